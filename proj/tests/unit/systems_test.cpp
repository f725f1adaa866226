#include "qrw/systems.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace qrw;
namespace sy = qrw::systems;

namespace {

const Quantale& lw() { return Quantale::get(QuantaleKind::Lawvere); }

/// Probability mass of each variable in a concrete barycentric term.
void masses(const Term& t, const Rational& weight, std::map<std::string, Rational>& out) {
    if (t.is_var()) {
        out[t.name()] += weight;
        return;
    }
    const Rational& e = t.indices()[0].value();
    masses(t.args()[0], weight * e, out);
    masses(t.args()[1], weight * (1 - e), out);
}

TEST(Catalog, EveryEntryBuilds) {
    auto entries = sy::catalog();
    EXPECT_EQ(entries.size(), 15u);
    for (const auto& e : entries) {
        RewriteSystem sys = sy::by_name(e.name);
        EXPECT_EQ(sys.name(), e.name);
        EXPECT_FALSE(sys.rules().empty()) << e.name;
    }
    EXPECT_TRUE(sy::graded_by_name("graded-combinators"));
    EXPECT_FALSE(sy::graded_by_name("nat"));
    EXPECT_THROW(sy::by_name("nope"), ConfigError);
}

TEST(Catalog, Encodings) {
    EXPECT_EQ(sy::nat_code(2), Term::app("S", {Term::app("S", {Term::app("Z")})}));
    EXPECT_EQ(sy::dna_term("AG"), Term::app("A", {Term::app("G", {Term::app("nil")})}));
    EXPECT_EQ(sy::comb_code(1), sy::ap(sy::constant("S"), sy::constant("Z")));
    EXPECT_EQ(sy::ap({sy::constant("B"), Term::var("x"), Term::var("y")}),
              sy::ap(sy::ap(sy::constant("B"), Term::var("x")), Term::var("y")));
}

TEST(Oracles, KnownValues) {
    EXPECT_EQ(sy::oracle_levenshtein("kitten", "sitting"), 3u);
    EXPECT_EQ(sy::oracle_levenshtein("", "ACG"), 3u);
    EXPECT_EQ(sy::oracle_hamming("ACGT", "ACCA"), 2u);
    EXPECT_FALSE(sy::oracle_hamming("A", "AC"));
    EXPECT_EQ(sy::oracle_abs_diff(2, 7), 5u);
}

TEST(Barycentric, ZeroCostRulesPreserveDistributions) {
    RewriteSystem ba = sy::make_barycentric();
    std::size_t checked = 0;
    for (const auto& inst : instantiate_rules(ba)) {
        if (inst.rule.id == "perturb") continue;
        Term l = substitute_indices(inst.rule.lhs, inst.params);
        Term r = substitute_indices(inst.rule.rhs, inst.params);
        std::map<std::string, Rational> ml, mr;
        masses(l, 1, ml);
        masses(r, 1, mr);
        for (auto& [x, w] : mr) EXPECT_EQ(ml[x], w) << inst.rule.id << " " << ba.print(l);
        if (inst.rule.id != "proj")
            for (auto& [x, w] : ml) EXPECT_EQ(mr[x], w) << inst.rule.id << " " << ba.print(l);
        ++checked;
    }
    EXPECT_GT(checked, 20u);
}

TEST(Barycentric, PerturbationCostsItsWeight) {
    RewriteSystem ba = sy::make_barycentric();
    Term t = Term::app("+", {Term::var("x"), Term::var("y")}, {Rational(1, 4)});
    auto steps = one_step(ba, t, {{Term::var("w")}});
    bool found = false;
    for (const auto& st : steps)
        if (st.rule == "perturb") {
            found = true;
            EXPECT_EQ(st.weight, lw().make(Rational(1, 4)));
            EXPECT_EQ(st.target, Term::app("+", {Term::var("w"), Term::var("y")}, {Rational(1, 4)}));
        }
    EXPECT_TRUE(found);
}

TEST(Ticking, AdjustCostsTheDifference) {
    RewriteSystem tick = sy::make_ticking(false);
    Term t = Term::app("w", {Term::var("x")}, {Rational(3)});
    for (const auto& st : one_step(tick, t)) {
        if (st.rule != "adjust") continue;
        Rational m = st.target.indices()[0].value();
        EXPECT_EQ(st.weight, lw().make(Rational(m > 3 ? Rational(m - 3) : Rational(3 - m))));
    }
    for (const auto& st : one_step(sy::make_ticking(true), t))
        if (st.rule == "adjust") EXPECT_LT(st.target.indices()[0].value(), 3);
}

TEST(Semilattice, UsesStrongLawvere) {
    RewriteSystem s = sy::make_semilattice();
    EXPECT_EQ(s.quantale().kind(), QuantaleKind::StrongLawvere);
    EXPECT_FALSE(s.linear());
}

TEST(Combinators, WDuplicates) {
    RewriteSystem sys = sy::make_bck_nat(true);
    Term x = Term::var("x"), y = Term::var("y");
    auto steps = one_step(sys, sy::ap({sy::constant("W"), x, y}));
    ASSERT_EQ(steps.size(), 1u);
    EXPECT_EQ(steps[0].target, sy::ap({x, y, y}));
    EXPECT_FALSE(sys.linear());
    EXPECT_TRUE(sy::make_bck().linear());
}

}  // namespace
