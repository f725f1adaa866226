#include "qrw/systems.hpp"

#include <algorithm>
#include <numeric>

namespace qrw::systems {

namespace {

const Quantale& lawvere() { return Quantale::get(QuantaleKind::Lawvere); }

Term v(const std::string& name) { return Term::var(name); }
IndexExpr p(const std::string& name) { return IndexExpr::param(name); }
IndexExpr op(IndexExpr::Op o, IndexExpr a, IndexExpr b) { return IndexExpr::binary(o, std::move(a), std::move(b)); }

Rule rule(std::string id, Term lhs, Term rhs, WeightSpec w, std::vector<SideCondition> conds = {}) {
    Rule r;
    r.id = std::move(id);
    r.lhs = std::move(lhs);
    r.rhs = std::move(rhs);
    r.weight = std::move(w);
    r.conditions = std::move(conds);
    return r;
}

QValue lw(int n) { return lawvere().make(n); }

const char* const kBases[] = {"A", "C", "G", "T"};

void add_combinators(Signature& sig, std::initializer_list<const char*> names) {
    for (const char* n : names) sig.add({n, 0, 0, false});
}

Signature application_signature() {
    Signature sig;
    sig.add({".", 2, 0, true});
    return sig;
}

std::vector<Rule> bck_rules() {
    Term x = v("x"), y = v("y"), z = v("z");
    return {
        rule("B", ap({constant("B"), x, y, z}), ap(x, ap(y, z)), lw(0)),
        rule("C", ap({constant("C"), x, y, z}), ap({x, z, y}), lw(0)),
        rule("K", ap({constant("K"), x, y}), x, lw(0)),
    };
}

}  // namespace

Term ap(const Term& f, const Term& x) { return Term::app(".", {f, x}); }

Term ap(std::initializer_list<Term> spine) {
    auto it = spine.begin();
    Term acc = *it++;
    for (; it != spine.end(); ++it) acc = ap(acc, *it);
    return acc;
}

Term constant(const std::string& name) { return Term::app(name); }

RewriteSystem make_nat() {
    Signature sig;
    sig.add({"Z", 0, 0, false});
    sig.add({"S", 1, 0, false});
    sig.add({"A", 2, 0, false});
    Term x = v("x"), y = v("y"), Z = constant("Z");
    auto S = [](const Term& t) { return Term::app("S", {t}); };
    auto A = [](const Term& a, const Term& b) { return Term::app("A", {a, b}); };
    std::vector<Rule> rules{
        rule("add-zero", A(x, Z), x, lw(0)),
        rule("add-succ", A(x, S(y)), S(A(x, y)), lw(0)),
        rule("del-succ", S(x), x, lw(1)),
    };
    return RewriteSystem(lawvere(), sig, rules, {}, "nat");
}

Term nat_code(unsigned n) {
    Term t = constant("Z");
    for (unsigned i = 0; i < n; ++i) t = Term::app("S", {t});
    return t;
}

RewriteSystem make_dna(DnaVariant variant) {
    Signature sig;
    sig.add({"nil", 0, 0, false});
    for (const char* b : kBases) sig.add({b, 1, 0, false});
    Term x = v("x");
    auto base = [&](const char* b) { return Term::app(b, {x}); };
    std::vector<Rule> rules;
    std::string name;
    switch (variant) {
    case DnaVariant::Levenshtein:
        name = "dna";
        for (const char* b : kBases) rules.push_back(rule(std::string("ins-") + b, x, base(b), lw(1)));
        for (const char* b : kBases) rules.push_back(rule(std::string("del-") + b, base(b), x, lw(1)));
        [[fallthrough]];
    case DnaVariant::Hamming:
        if (name.empty()) name = "hamming";
        for (const char* b : kBases)
            for (const char* c : kBases)
                if (std::string_view(b) != c)
                    rules.push_back(rule(std::string("sub-") + b + c, base(b), base(c), lw(1)));
        break;
    case DnaVariant::EigenMcCaskill:
        name = "ems";
        for (auto [b, c, w] : {std::tuple{"A", "C", 1}, {"G", "T", 1}, {"A", "T", 1}, {"A", "G", 0},
                               {"G", "C", 1}, {"C", "T", 0}})
            rules.push_back(rule(std::string("sub-") + b + c, base(b), base(c), lw(w)));
        break;
    }
    return RewriteSystem(lawvere(), sig, rules, {}, name);
}

Term dna_term(std::string_view bases) {
    Term t = constant("nil");
    for (auto it = bases.rbegin(); it != bases.rend(); ++it) t = Term::app(std::string(1, *it), {t});
    return t;
}

ParamGrid default_barycentric_grid() {
    ParamGrid g;
    g.values = {Rational(0), Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(2, 3), Rational(3, 4),
                Rational(1)};
    return g;
}

ParamGrid default_index_grid() {
    ParamGrid g;
    g.values = {0, 1, 2, 3};
    return g;
}

namespace {

Term plus(const Term& a, IndexExpr e, const Term& b) { return Term::app("+", {a, b}, {std::move(e)}); }

std::vector<Rule> barycentric_rules(bool with_perturbation) {
    using Op = IndexExpr::Op;
    using Cmp = SideCondition::Cmp;
    Term x = v("x"), y = v("y"), z = v("z");
    IndexExpr e = p("e"), e1 = p("e1"), e2 = p("e2");
    IndexExpr prod = op(Op::Mul, e1, e2);
    IndexExpr rest = op(Op::Div, op(Op::Sub, e2, prod), op(Op::Sub, Rational(1), prod));
    std::vector<Rule> rules{
        rule("proj", plus(x, Rational(1), y), x, lw(0)),
        rule("comm", plus(x, e, y), plus(y, op(Op::Sub, Rational(1), e), x), lw(0)),
        rule("assoc", plus(plus(x, e1, y), e2, z), plus(x, prod, plus(y, rest, z)), lw(0),
             {{Rational(0), Cmp::Lt, e1}, {e1, Cmp::Lt, Rational(1)}, {Rational(0), Cmp::Lt, e2},
              {e2, Cmp::Lt, Rational(1)}}),
    };
    if (with_perturbation) rules.push_back(rule("perturb", plus(x, e, y), plus(z, e, y), e));
    return rules;
}

Signature barycentric_signature() {
    Signature sig;
    sig.add({"+", 2, 1, true});
    return sig;
}

}  // namespace

RewriteSystem make_barycentric(ParamGrid grid) {
    return RewriteSystem(lawvere(), barycentric_signature(), barycentric_rules(true), std::move(grid), "ba");
}

GradedSystem make_graded_barycentric(ParamGrid grid) {
    RewriteSystem sys(lawvere(), barycentric_signature(), barycentric_rules(false), std::move(grid), "ba-graded");
    GradedSignature gs;
    gs.set("+", {{"e"}, {p("e"), op(IndexExpr::Op::Sub, Rational(1), p("e"))}});
    return GradedSystem(std::move(sys), std::move(gs));
}

RewriteSystem make_bck() {
    Signature sig = application_signature();
    add_combinators(sig, {"B", "C", "K"});
    return RewriteSystem(lawvere(), sig, bck_rules(), {}, "bck");
}

RewriteSystem make_bck_nat(bool with_w) {
    Signature sig = application_signature();
    add_combinators(sig, {"B", "C", "K", "Z", "S", "A"});
    auto rules = bck_rules();
    Term x = v("x"), y = v("y");
    Term A = constant("A"), S = constant("S"), Z = constant("Z");
    rules.push_back(rule("add-zero", ap({A, x, Z}), x, lw(0)));
    rules.push_back(rule("add-succ", ap({A, x, ap(S, y)}), ap(S, ap({A, x, y})), lw(0)));
    rules.push_back(rule("del-succ", ap(S, x), x, lw(1)));
    if (with_w) {
        add_combinators(sig, {"W"});
        rules.push_back(rule("W", ap({constant("W"), x, y}), ap({x, y, y}), lw(0)));
    }
    return RewriteSystem(lawvere(), sig, rules, {}, with_w ? "bck-nat-w" : "bck-nat");
}

Term comb_code(unsigned n) {
    Term t = constant("Z");
    for (unsigned i = 0; i < n; ++i) t = ap(constant("S"), t);
    return t;
}

RewriteSystem make_ticking(bool terminating, ParamGrid grid) {
    using Op = IndexExpr::Op;
    Signature sig;
    sig.add({"w", 1, 1, false});
    Term x = v("x");
    auto w = [](IndexExpr e, const Term& t) { return Term::app("w", {t}, {std::move(e)}); };
    IndexExpr n = p("n"), m = p("m");
    std::vector<SideCondition> conds;
    if (terminating) conds.push_back({m, SideCondition::Cmp::Lt, n});
    std::vector<Rule> rules{
        rule("unit", w(Rational(0), x), x, lw(0)),
        rule("seq", w(n, w(m, x)), w(op(Op::Add, n, m), x), lw(0)),
        rule("adjust", w(n, x), w(m, x), IndexExpr::abs(op(Op::Sub, n, m)), conds),
    };
    return RewriteSystem(lawvere(), sig, rules, std::move(grid), terminating ? "ticking-down" : "ticking");
}

RewriteSystem make_tick_simple() {
    Signature sig;
    sig.add({"tick", 1, 0, false});
    Term x = v("x");
    return RewriteSystem(lawvere(), sig, {rule("tick", Term::app("tick", {x}), x, lw(1))}, {}, "tick");
}

RewriteSystem make_semilattice() {
    Signature sig;
    sig.add({"|", 2, 0, true});
    Term x = v("x"), y = v("y"), z = v("z");
    auto u = [](const Term& a, const Term& b) { return Term::app("|", {a, b}); };
    const Quantale& q = Quantale::get(QuantaleKind::StrongLawvere);
    std::vector<Rule> rules{
        rule("dup", x, u(x, x), q.make(0)),
        rule("assoc", u(u(x, y), z), u(x, u(y, z)), q.make(0)),
        rule("comm", u(x, y), u(y, x), q.make(0)),
    };
    return RewriteSystem(q, sig, rules, {}, "semilattice");
}

GradedSystem make_graded_combinators(ParamGrid grid) {
    using Op = IndexExpr::Op;
    Signature sig = application_signature();
    add_combinators(sig, {"B", "C", "K", "I", "D"});
    sig.add({"delta", 0, 2, false});
    sig.add({"F", 0, 1, false});
    sig.add({"W", 0, 2, false});
    sig.add({"!", 1, 1, false});
    Term x = v("x"), y = v("y");
    IndexExpr n = p("n"), m = p("m");
    auto bang = [](IndexExpr e, const Term& t) { return Term::app("!", {t}, {std::move(e)}); };
    auto rules = bck_rules();
    rules[2] = rule("K", ap({constant("K"), x, bang(Rational(0), y)}), x, lw(0));
    rules.push_back(rule("I", ap(constant("I"), x), x, lw(0)));
    rules.push_back(rule("D", ap(constant("D"), bang(Rational(1), x)), x, lw(0)));
    rules.push_back(rule("delta", ap(Term::app("delta", {}, {n, m}), bang(op(Op::Mul, n, m), x)),
                         bang(n, bang(m, x)), lw(0)));
    rules.push_back(rule("F", ap({Term::app("F", {}, {n}), bang(n, x), bang(n, y)}), bang(n, ap(x, y)), lw(0)));
    rules.push_back(rule("W", ap({Term::app("W", {}, {n, m}), x, bang(op(Op::Add, n, m), y)}),
                         ap({x, bang(n, y), bang(m, y)}), lw(0)));
    RewriteSystem sys(lawvere(), sig, rules, std::move(grid), "graded-combinators");
    GradedSignature gs;
    gs.set("!", {{"n"}, {n}});
    return GradedSystem(std::move(sys), std::move(gs));
}

RewriteSystem make_linearity_counterexample() {
    Signature sig;
    sig.add({"f", 2, 0, false});
    sig.add({"e", 0, 0, false});
    sig.add({"i", 0, 0, false});
    Term x = v("x");
    std::vector<Rule> rules{
        rule("collapse", Term::app("f", {x, x}), x, lw(0)),
        rule("decay", constant("e"), constant("i"), lw(1)),
    };
    return RewriteSystem(lawvere(), sig, rules, {}, "nonlinear");
}

std::vector<CatalogEntry> catalog() {
    return {
        {"nat", "natural numbers with addition and successor deletion"},
        {"dna", "DNA edit system (insertion, deletion, substitution)"},
        {"hamming", "DNA substitutions only"},
        {"ems", "purine/pyrimidine mutation costs"},
        {"ba", "barycentric algebras with perturbation"},
        {"bck", "affine combinators"},
        {"bck-nat", "affine combinators with numerals"},
        {"bck-nat-w", "affine combinators with numerals and W"},
        {"ticking", "write operations over the naturals"},
        {"ticking-down", "write operations that only lower counters"},
        {"tick", "single tick"},
        {"semilattice", "quantitative semilattices over the strong Lawvere quantale"},
        {"graded-combinators", "graded combinatory logic"},
        {"ba-graded", "barycentric algebras with graded choice"},
        {"nonlinear", "non-left-linear collapse with a unit decay"},
    };
}

std::optional<GradedSystem> graded_by_name(const std::string& name) {
    if (name == "graded-combinators") return make_graded_combinators();
    if (name == "ba-graded") return make_graded_barycentric();
    return std::nullopt;
}

RewriteSystem by_name(const std::string& name) {
    if (name == "nat") return make_nat();
    if (name == "dna") return make_dna(DnaVariant::Levenshtein);
    if (name == "hamming") return make_dna(DnaVariant::Hamming);
    if (name == "ems") return make_dna(DnaVariant::EigenMcCaskill);
    if (name == "ba") return make_barycentric();
    if (name == "bck") return make_bck();
    if (name == "bck-nat") return make_bck_nat(false);
    if (name == "bck-nat-w") return make_bck_nat(true);
    if (name == "ticking") return make_ticking(false);
    if (name == "ticking-down") return make_ticking(true);
    if (name == "tick") return make_tick_simple();
    if (name == "semilattice") return make_semilattice();
    if (name == "nonlinear") return make_linearity_counterexample();
    if (auto g = graded_by_name(name)) return g->system();
    throw ConfigError("unknown catalog system " + name);
}

std::size_t oracle_levenshtein(std::string_view s, std::string_view t) {
    std::vector<std::size_t> row(t.size() + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});
    for (std::size_t i = 1; i <= s.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= t.size(); ++j) {
            std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (s[i - 1] == t[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[t.size()];
}

std::optional<std::size_t> oracle_hamming(std::string_view s, std::string_view t) {
    if (s.size() != t.size()) return std::nullopt;
    std::size_t d = 0;
    for (std::size_t i = 0; i < s.size(); ++i) d += s[i] != t[i];
    return d;
}

unsigned oracle_abs_diff(unsigned n, unsigned m) { return n > m ? n - m : m - n; }

}  // namespace qrw::systems
