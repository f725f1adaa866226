#include "qrw/search.hpp"
#include "qrw/systems.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <optional>
#include <random>

using namespace qrw;
namespace sy = qrw::systems;

namespace {

const Quantale& lw() { return Quantale::get(QuantaleKind::Lawvere); }
Term S(const Term& t) { return Term::app("S", {t}); }
Term A(const Term& a, const Term& b) { return Term::app("A", {a, b}); }
Term Z() { return Term::app("Z"); }

bool exact(const DistanceAnswer& a, const Rational& v) {
    return a.kind == AnswerKind::Exact && a.value && *a.value == lw().make(v);
}

// Cheapest single-base mutation chains, by Floyd-Warshall over the substitution table.
std::vector<std::vector<std::optional<int>>> ems_table(bool symmetric) {
    const std::string bases = "ACGT";
    std::vector<std::vector<std::optional<int>>> d(4, std::vector<std::optional<int>>(4));
    auto set = [&](char a, char b, int w) {
        auto& cell = d[bases.find(a)][bases.find(b)];
        if (!cell || w < *cell) cell = w;
    };
    for (auto [a, b, w] : {std::tuple{'A', 'C', 1}, {'G', 'T', 1}, {'A', 'T', 1}, {'A', 'G', 0}, {'G', 'C', 1},
                           {'C', 'T', 0}}) {
        set(a, b, w);
        if (symmetric) set(b, a, w);
    }
    for (int i = 0; i < 4; ++i) d[i][i] = 0;
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (d[i][k] && d[k][j] && (!d[i][j] || *d[i][k] + *d[k][j] < *d[i][j])) d[i][j] = *d[i][k] + *d[k][j];
    return d;
}

TEST(Reduction, NatDistances) {
    RewriteSystem nat = sy::make_nat();
    Term t = A(S(Z()), S(Z()));
    auto a = reduction_distance(nat, t, S(S(Z())));
    EXPECT_TRUE(exact(a, 0));
    EXPECT_TRUE(validate_witness(nat, t, S(S(Z())), a));
    auto b = reduction_distance(nat, t, Z());
    EXPECT_TRUE(exact(b, 2));
    EXPECT_TRUE(validate_witness(nat, t, Z(), b));
    EXPECT_EQ(reduction_distance(nat, Z(), S(Z())).kind, AnswerKind::Unreachable);
    EXPECT_TRUE(exact(reduction_distance(nat, t, t), 0));
}

TEST(Reduction, MutationTableMatchesShortestChains) {
    RewriteSystem ems = sy::make_dna(sy::DnaVariant::EigenMcCaskill);
    auto directed = ems_table(false);
    auto both = ems_table(true);
    const std::string bases = "ACGT";
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Term s = sy::dna_term(std::string(1, bases[i])), t = sy::dna_term(std::string(1, bases[j]));
            auto d = reduction_distance(ems, s, t);
            if (directed[i][j]) EXPECT_TRUE(exact(d, *directed[i][j])) << bases[i] << "->" << bases[j];
            else EXPECT_EQ(d.kind, AnswerKind::Unreachable) << bases[i] << "->" << bases[j];
            auto c = convertibility_distance(ems, s, t);
            ASSERT_TRUE(both[i][j]);
            EXPECT_TRUE(exact(c, *both[i][j])) << bases[i] << "~" << bases[j];
            EXPECT_TRUE(validate_witness(ems, s, t, c));
        }
}

TEST(Conversion, LevenshteinOnRandomPairs) {
    RewriteSystem dna = sy::make_dna(sy::DnaVariant::Levenshtein);
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> len(0, 4), base(0, 3);
    auto word = [&] {
        std::string s(len(rng), 'A');
        for (auto& c : s) c = "ACGT"[base(rng)];
        return s;
    };
    for (int i = 0; i < 30; ++i) {
        std::string a = word(), b = word();
        Term s = sy::dna_term(a), t = sy::dna_term(b);
        auto d = convertibility_distance(dna, s, t);
        EXPECT_TRUE(exact(d, sy::oracle_levenshtein(a, b))) << a << " " << b;
        EXPECT_TRUE(validate_witness(dna, s, t, d));
    }
}

TEST(Conversion, HammingNeedsEqualLengths) {
    RewriteSystem h = sy::make_dna(sy::DnaVariant::Hamming);
    EXPECT_TRUE(exact(convertibility_distance(h, sy::dna_term("ACG"), sy::dna_term("TCA")), 2));
    EXPECT_EQ(convertibility_distance(h, sy::dna_term("AC"), sy::dna_term("A")).kind, AnswerKind::Unreachable);
}

TEST(Valley, NatJoinsAtZeroCost) {
    RewriteSystem nat = sy::make_nat();
    Term s = S(Z()), t = A(Z(), S(Z()));
    auto v = valley_distance(nat, s, t);
    EXPECT_TRUE(exact(v, 0));
    EXPECT_TRUE(validate_witness(nat, s, t, v));
}

TEST(Witness, TamperingIsDetected) {
    RewriteSystem nat = sy::make_nat();
    Term t = A(S(Z()), S(Z()));
    auto a = reduction_distance(nat, t, Z());
    ASSERT_FALSE(a.witness.empty());
    auto bad = a;
    bad.value = lw().make(1);
    EXPECT_FALSE(validate_witness(nat, t, Z(), bad));
    bad = a;
    bad.witness.back().weight = lw().make(0);
    EXPECT_FALSE(validate_witness(nat, t, Z(), bad));
    bad = a;
    bad.witness.pop_back();
    EXPECT_FALSE(validate_witness(nat, t, Z(), bad));
}

TEST(Budget, NeverClaimsExactnessWrongly) {
    RewriteSystem dna = sy::make_dna(sy::DnaVariant::Levenshtein);
    SearchBudget tiny;
    tiny.max_expanded_terms = 5;
    auto a = convertibility_distance(dna, sy::dna_term("ACGT"), sy::dna_term("TGCA"), tiny);
    EXPECT_NE(a.kind, AnswerKind::Exact);
    if (a.value) EXPECT_TRUE(lw().leq(*a.value, lw().make(sy::oracle_levenshtein("ACGT", "TGCA"))));
}

TEST(Reachability, YesNoAndEpsilon) {
    RewriteSystem ems = sy::make_dna(sy::DnaVariant::EigenMcCaskill);
    RewriteSystem h = sy::make_dna(sy::DnaVariant::Hamming);
    Term a = sy::dna_term("A"), t = sy::dna_term("T");
    EXPECT_EQ(reachability(ems, a, t), Tri::Yes);
    EXPECT_EQ(reachability(h, sy::dna_term("AC"), sy::dna_term("A")), Tri::No);
    EXPECT_EQ(epsilon_reachability(ems, a, t, lw().make(1)), Tri::Yes);
    EXPECT_EQ(epsilon_reachability(ems, a, t, lw().make(Rational(1, 2))), Tri::No);
}

TEST(Normalize, StrategiesAndAllForms) {
    RewriteSystem nat = sy::make_nat();
    Term t = A(S(Z()), S(Z()));
    auto all = normalize(nat, t, Strategy::All);
    EXPECT_TRUE(all.complete);
    ASSERT_EQ(all.forms.size(), 1u);
    EXPECT_EQ(all.forms[0].first, Z());
    EXPECT_EQ(all.forms[0].second, lw().make(2));
    auto out = normalize(nat, t, Strategy::LeftmostOutermost);
    EXPECT_TRUE(out.complete);
    ASSERT_FALSE(out.path.empty());
    EXPECT_EQ(out.path[0].rule, "add-succ");
    auto in = normalize(nat, t, Strategy::LeftmostInnermost);
    EXPECT_EQ(in.path[0].rule, "del-succ");
    SearchBudget one;
    one.max_depth = 1;
    EXPECT_FALSE(normalize(nat, t, Strategy::LeftmostInnermost, one).complete);
}

TEST(AnswerJson, Shape) {
    RewriteSystem nat = sy::make_nat();
    Term t = A(S(Z()), S(Z()));
    auto a = reduction_distance(nat, t, Z());
    auto j = nlohmann::json::parse(answer_json(nat, a));
    EXPECT_EQ(j["kind"], "Exact");
    EXPECT_EQ(j["value"], "2");
    EXPECT_EQ(j["witness"].size(), a.witness.size());
    EXPECT_EQ(j["witness"][0]["from"], "A(S(Z), S(Z))");
    auto u = nlohmann::json::parse(answer_json(nat, reduction_distance(nat, Z(), t)));
    EXPECT_TRUE(u["value"].is_null());
}

TEST(ChurchRosser, CertifiedRouteAgreesWithPlainSearch) {
    RewriteSystem nat = sy::make_nat();
    for (unsigned n = 0; n <= 3; ++n)
        for (unsigned m = 0; m <= 3; ++m) {
            Term s = A(sy::nat_code(n), sy::nat_code(m)), t = sy::nat_code(n + m);
            auto cr = convertibility_distance(nat, s, t, {}, {true});
            EXPECT_TRUE(exact(cr, 0));
            EXPECT_TRUE(validate_witness(nat, s, t, cr));
        }
}

}  // namespace
