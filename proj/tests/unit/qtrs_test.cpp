#include "qrw/qtrs.hpp"
#include "qrw/systems.hpp"

#include <gtest/gtest.h>

using namespace qrw;
namespace sy = qrw::systems;

namespace {

const Quantale& lw() { return Quantale::get(QuantaleKind::Lawvere); }
Term v(const std::string& x) { return Term::var(x); }
Term S(const Term& t) { return Term::app("S", {t}); }
Term A(const Term& a, const Term& b) { return Term::app("A", {a, b}); }
Term Z() { return Term::app("Z"); }

TEST(OneStep, NatRedexesInPositionOrder) {
    RewriteSystem nat = sy::make_nat();
    Term t = A(S(Z()), S(Z()));
    auto steps = one_step(nat, t);
    ASSERT_EQ(steps.size(), 3u);
    EXPECT_EQ(steps[0].rule, "add-succ");
    EXPECT_TRUE(steps[0].position.empty());
    EXPECT_EQ(steps[0].target, S(A(S(Z()), Z())));
    EXPECT_EQ(steps[0].weight, lw().make(0));
    EXPECT_EQ(steps[1].position, Position{1});
    EXPECT_EQ(steps[1].target, A(Z(), S(Z())));
    EXPECT_EQ(steps[1].weight, lw().make(1));
    EXPECT_EQ(steps[2].position, Position{2});
    for (const auto& st : steps) EXPECT_TRUE(validate_step(nat, st));
}

TEST(OneStep, NormalFormHasNoSteps) {
    EXPECT_TRUE(one_step(sy::make_nat(), Z()).empty());
}

TEST(BackwardStep, InvertsForwardSteps) {
    RewriteSystem nat = sy::make_nat();
    Term t = S(A(Z(), Z()));
    auto back = backward_step(nat, t, {subterm_pool({t})});
    ASSERT_FALSE(back.empty());
    for (const auto& st : back) {
        EXPECT_EQ(st.source, t);
        auto fwd = one_step(nat, st.target, {subterm_pool({t})});
        bool found = std::any_of(fwd.begin(), fwd.end(), [&](const RewriteStep& f) {
            return f.target == t && f.rule == st.rule && f.weight == st.weight;
        });
        EXPECT_TRUE(found) << nat.print(st.target);
    }
}

TEST(OneStep, GenerativeRulesDrawFromPool) {
    RewriteSystem dna = sy::make_dna(sy::DnaVariant::Levenshtein);
    Term t = sy::dna_term("A");
    auto steps = one_step(dna, t, {subterm_pool({t})});
    std::size_t inserts = std::count_if(steps.begin(), steps.end(),
                                        [](const RewriteStep& s) { return s.rule.rfind("ins-", 0) == 0; });
    // x -> b(x) fires at both positions of A(nil) for each of the four bases
    EXPECT_EQ(inserts, 8u);
}

TEST(Schema, PerturbationWeightIsItsIndex) {
    RewriteSystem ba = sy::make_barycentric();
    const Rule* r = ba.find_rule("perturb");
    ASSERT_NE(r, nullptr);
    EXPECT_EQ(*r->weight_at(lw(), {{"e", Rational(1, 3)}}), lw().make(Rational(1, 3)));
    EXPECT_EQ(r->fresh_variables(), std::set<std::string>{"z"});
    for (const auto& inst : instantiate_rules(ba)) {
        EXPECT_FALSE(inst.rule.is_schema()) << inst.rule.id;
        EXPECT_TRUE(inst.rule.conditions_hold(inst.params)) << inst.rule.id;
    }
}

TEST(System, RejectsMalformedRules) {
    Signature sig;
    sig.add({"f", 1, 0, false});
    auto rule = [](std::string id, Term l, Term r, QValue w) { return Rule{id, l, r, w, {}, {}}; };
    Term fx = Term::app("f", {v("x")});
    EXPECT_THROW(RewriteSystem(lw(), sig, {rule("a", fx, v("x"), lw().make(0)), rule("a", fx, fx, lw().make(0))}),
                 ConfigError);
    EXPECT_THROW(RewriteSystem(lw(), sig, {rule("a", fx, v("x"), lw().bottom())}), ConfigError);
    EXPECT_THROW(RewriteSystem(lw(), sig, {rule("a", Term::app("f"), v("x"), lw().make(0))}), IllFormedTerm);
    Signature isig;
    isig.add({"w", 1, 1, false});
    Rule sch{"s", Term::app("w", {v("x")}, {IndexExpr::param("n")}), Term::app("w", {v("x")}, {IndexExpr::param("m")}),
             lw().make(1), {}, {}};
    EXPECT_THROW(RewriteSystem(lw(), isig, {sch}), ConfigError);
    EXPECT_NO_THROW(RewriteSystem(lw(), isig, {sch}, sy::default_index_grid()));
}

TEST(CriticalPairs, NatHasTheSuccessorOverlap) {
    RewriteSystem nat = sy::make_nat();
    auto peaks = critical_pairs(nat);
    ASSERT_EQ(peaks.size(), 1u);
    const auto& p = peaks[0];
    EXPECT_EQ(p.inner_rule, "del-succ");
    EXPECT_EQ(p.outer_rule, "add-succ");
    EXPECT_EQ(p.position, Position{2});
    EXPECT_TRUE(join_check(nat, p, 4).joinable);
}

TEST(CriticalPairs, PeaksAreRealOneStepDivergences) {
    for (const char* name : {"nat", "ba", "semilattice", "ticking", "bck-nat-w"}) {
        RewriteSystem sys = sy::by_name(name);
        for (const auto& p : critical_pairs(sys)) {
            StepOptions opts{subterm_pool({p.source, p.left, p.right})};
            auto steps = one_step(sys, p.source, opts);
            auto reaches = [&](const Term& t, const QValue& w) {
                return std::any_of(steps.begin(), steps.end(),
                                   [&](const RewriteStep& s) { return s.target == t && s.weight == w; });
            };
            if (!p.source.ground() && sys.find_rule(p.inner_rule)->fresh_variables().empty() &&
                sys.find_rule(p.outer_rule)->fresh_variables().empty()) {
                EXPECT_TRUE(reaches(p.left, p.left_weight)) << name << " " << sys.print(p.source);
                EXPECT_TRUE(reaches(p.right, p.right_weight)) << name << " " << sys.print(p.source);
            }
        }
    }
}

TEST(CriticalPairs, DisjointHeadsDoNotOverlap) {
    EXPECT_TRUE(critical_pairs(sy::make_bck()).empty());
    EXPECT_TRUE(cross_critical_pairs(sy::make_bck(), sy::make_barycentric()).empty());
}

TEST(Sum, RequiresDisjointSignatures) {
    EXPECT_NO_THROW(sum(sy::make_bck(), sy::make_barycentric()));
    EXPECT_THROW(sum(sy::make_nat(), sy::make_nat()), ConfigError);
}

TEST(Termination, ProbeVerdicts) {
    std::vector<Term> seeds{A(S(S(Z())), S(S(Z())))};
    EXPECT_EQ(sn_probe(sy::make_nat(), seeds).verdict, SnVerdict::TerminatingOnExplored);
    Term w1 = Term::app("w", {v("x")}, {Rational(1)});
    auto cyc = sn_probe(sy::make_ticking(false), {w1});
    EXPECT_EQ(cyc.verdict, SnVerdict::NotTerminating);
    EXPECT_FALSE(cyc.cycle.empty());
    EXPECT_EQ(sn_probe(sy::make_ticking(true), {w1}).verdict, SnVerdict::TerminatingOnExplored);
}

TEST(Explore, KeepsBestWeights) {
    RewriteSystem nat = sy::make_nat();
    Term t = A(S(Z()), S(Z()));
    auto r = explore(nat, t, {8, 1000, std::nullopt});
    ASSERT_TRUE(r.nodes.count(S(S(Z()))));
    EXPECT_EQ(r.nodes.at(S(S(Z()))).weight, lw().make(0));
    EXPECT_EQ(r.nodes.at(Z()).weight, lw().make(2));
    auto path = r.path_to(Z());
    QValue total = lw().unit();
    for (const auto& st : path) total = lw().tensor(total, st.weight);
    EXPECT_EQ(total, lw().make(2));
}

TEST(Confluence, Certificates) {
    EXPECT_EQ(confluence_report(sy::make_nat()).certificate, Certificate::CriticalPairsAndSN);
    EXPECT_NE(confluence_report(sy::make_bck()).certificate, Certificate::Inconclusive);
    auto dna = confluence_report(sy::make_dna(sy::DnaVariant::Levenshtein));
    EXPECT_EQ(dna.certificate, Certificate::Inconclusive);
    EXPECT_FALSE(dna.notes.empty());
}

TEST(StrongClosure, ProjectionPeaksStayOpen) {
    RewriteSystem ba = sy::make_barycentric();
    std::size_t open = 0;
    for (const auto& p : critical_pairs(ba))
        if (p.inner_rule == "proj" && p.position.empty() && !strongly_closed_check(ba, p, 4).holds) ++open;
    EXPECT_GE(open, 1u);
}

}  // namespace
