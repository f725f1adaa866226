#include "qrw/graded.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

namespace qrw {

// ---- sensitivities ---------------------------------------------------------

Sensitivity Sensitivity::identity() { return Sensitivity{}; }

Sensitivity Sensitivity::const_unit() {
    Sensitivity s;
    s.kind_ = Kind::ConstUnit;
    s.c_ = 0;
    return s;
}

Sensitivity Sensitivity::scalar(Rational c) {
    if (c < 0) throw ConfigError("negative sensitivity scalar " + to_string(c));
    Sensitivity s;
    s.kind_ = Kind::Scalar;
    s.c_ = std::move(c);
    return s;
}

Sensitivity Sensitivity::fold(const Quantale& q) const {
    auto c = as_scalar(q);
    return c ? scalar(*c) : *this;
}

Sensitivity Sensitivity::compose(const Quantale& q, const Sensitivity& outer, const Sensitivity& inner) {
    if (q.distance_like()) return scalar(*outer.as_scalar(q) * *inner.as_scalar(q));
    if (outer.kind_ == Kind::Identity) return inner;
    if (inner.kind_ == Kind::Identity) return outer;
    if (outer.kind_ == Kind::ConstUnit || inner.kind_ == Kind::ConstUnit) {
        // φ(k) = k for homomorphisms, and k⋆ ∘ ψ = k⋆.
        return const_unit();
    }
    Sensitivity s;
    s.kind_ = Kind::Compose;
    s.kids_ = std::make_shared<const std::vector<Sensitivity>>(std::vector<Sensitivity>{outer, inner});
    return s;
}

Sensitivity Sensitivity::tensor(const Quantale& q, const Sensitivity& a, const Sensitivity& b) {
    if (q.distance_like()) {
        Rational x = *a.as_scalar(q);
        Rational y = *b.as_scalar(q);
        if (q.kind() == QuantaleKind::StrongLawvere) return scalar(x < y ? y : x);
        return scalar(x + y);
    }
    if (a.kind_ == Kind::ConstUnit) return b;
    if (b.kind_ == Kind::ConstUnit) return a;
    Sensitivity s;
    s.kind_ = Kind::Tensor;
    s.kids_ = std::make_shared<const std::vector<Sensitivity>>(std::vector<Sensitivity>{a, b});
    return s;
}

std::optional<Rational> Sensitivity::as_scalar(const Quantale& q) const {
    if (!q.distance_like()) return kind_ == Kind::Scalar ? std::optional<Rational>(c_) : std::nullopt;
    switch (kind_) {
    case Kind::Identity: return Rational(1);
    case Kind::ConstUnit: return Rational(0);
    case Kind::Scalar: return c_;
    case Kind::Compose: return *(*kids_)[0].as_scalar(q) * *(*kids_)[1].as_scalar(q);
    case Kind::Tensor: {
        Rational x = *(*kids_)[0].as_scalar(q);
        Rational y = *(*kids_)[1].as_scalar(q);
        if (q.kind() == QuantaleKind::StrongLawvere) return x < y ? y : x;
        return Rational(x + y);
    }
    }
    return std::nullopt;
}

QValue Sensitivity::apply(const Quantale& q, const QValue& v) const {
    q.check(v);
    switch (kind_) {
    case Kind::Identity: return v;
    case Kind::ConstUnit: return q.unit();
    case Kind::Scalar:
        if (!q.distance_like()) throw ConfigError("scalar sensitivities need a Lawvere-family quantale");
        if (v.is_infinite()) return c_ == 0 ? q.unit() : v;
        return q.make(c_ * v.number());
    case Kind::Compose: return (*kids_)[0].apply(q, (*kids_)[1].apply(q, v));
    case Kind::Tensor: return q.tensor((*kids_)[0].apply(q, v), (*kids_)[1].apply(q, v));
    }
    return v;
}

std::string Sensitivity::str(const Quantale& q) const {
    if (auto c = as_scalar(q); c && q.distance_like()) return to_string(*c);
    switch (kind_) {
    case Kind::Identity: return "1";
    case Kind::ConstUnit: return "k*";
    case Kind::Scalar: return to_string(c_);
    case Kind::Compose: return "(" + (*kids_)[0].str(q) + " o " + (*kids_)[1].str(q) + ")";
    case Kind::Tensor: return "(" + (*kids_)[0].str(q) + " (x) " + (*kids_)[1].str(q) + ")";
    }
    return "?";
}

bool Sensitivity::equal(const Quantale& q, const Sensitivity& a, const Sensitivity& b, bool* sampled) {
    if (q.distance_like()) {
        if (sampled) *sampled = false;
        return *a.as_scalar(q) == *b.as_scalar(q);
    }
    if (sampled) *sampled = true;
    std::vector<QValue> samples{q.bottom(), q.top()};
    if (q.kind() != QuantaleKind::Boolean)
        for (auto r : {Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(2, 3), Rational(3, 4)})
            samples.push_back(q.make(r));
    return std::all_of(samples.begin(), samples.end(),
                       [&](const QValue& v) { return a.apply(q, v) == b.apply(q, v); });
}

// ---- signatures and systems ------------------------------------------------

const SymbolGrades* GradedSignature::find(const std::string& symbol) const {
    auto it = grades_.find(symbol);
    return it == grades_.end() ? nullptr : &it->second;
}

Sensitivity GradedSignature::grade(const Quantale& q, const Term& node, std::size_t i) const {
    const SymbolGrades* g = find(node.name());
    if (!g || i >= g->args.size()) return Sensitivity::identity();
    const auto& spec = g->args[i];
    if (auto* s = std::get_if<Sensitivity>(&spec)) return *s;
    ParamEnv env;
    for (std::size_t k = 0; k < g->index_names.size() && k < node.indices().size(); ++k)
        if (node.indices()[k].is_const()) env[g->index_names[k]] = node.indices()[k].value();
    auto v = std::get<IndexExpr>(spec).eval(env);
    if (!v) throw ConfigError("grade of " + node.name() + " needs concrete indices");
    (void)q;
    return Sensitivity::scalar(*v);
}

GradedSystem::GradedSystem(RewriteSystem sys, GradedSignature grades)
    : sys_(std::move(sys)), grades_(std::move(grades)) {
    for (const auto& [name, g] : grades_.all()) {
        const SymbolDecl* d = sys_.signature().find(name);
        if (!d) throw ConfigError("grades given for unknown symbol " + name);
        if (g.args.size() != static_cast<std::size_t>(d->arity))
            throw ConfigError("symbol " + name + " has arity " + std::to_string(d->arity) + " but " +
                              std::to_string(g.args.size()) + " grades");
        for (const auto& a : g.args)
            if (std::holds_alternative<IndexExpr>(a) && !sys_.quantale().distance_like())
                throw ConfigError("scalar grades need a Lawvere-family quantale");
    }
}

// ---- degrees ---------------------------------------------------------------

Sensitivity path_degree(const GradedSystem& g, const Term& t, const Position& p) {
    const Quantale& q = g.quantale();
    Sensitivity acc = Sensitivity::identity();
    const Term* cur = &t;
    for (int i : p) {
        if (cur->is_var() || i < 1 || static_cast<std::size_t>(i) > cur->arity())
            throw InvalidPosition("position " + position_str(p) + " is not valid in " + t.str());
        acc = Sensitivity::compose(q, acc, g.grades().grade(q, *cur, static_cast<std::size_t>(i - 1)));
        cur = &cur->args()[static_cast<std::size_t>(i - 1)];
    }
    return acc;
}

Sensitivity degree_at_position(const GradedSystem& g, const Term& t, const Position& p) {
    if (!subterm_at(t, p).is_var()) throw InvalidPosition("position " + position_str(p) + " is not a variable");
    return path_degree(g, t, p);
}

Sensitivity degree_of_variable(const GradedSystem& g, const Term& t, const std::string& x) {
    Sensitivity acc = Sensitivity::const_unit();
    for (const auto& p : variable_positions(t, x))
        acc = Sensitivity::tensor(g.quantale(), acc, path_degree(g, t, p));
    return acc;
}

Sensitivity degree_of_variable_recursive(const GradedSystem& g, const Term& t, const std::string& x) {
    const Quantale& q = g.quantale();
    if (t.is_var()) return t.name() == x ? Sensitivity::identity() : Sensitivity::const_unit();
    Sensitivity acc = Sensitivity::const_unit();
    for (std::size_t i = 0; i < t.arity(); ++i) {
        Sensitivity inner = degree_of_variable_recursive(g, t.args()[i], x);
        acc = Sensitivity::tensor(q, acc, Sensitivity::compose(q, g.grades().grade(q, t, i), inner));
    }
    return acc;
}

Sensitivity context_degree(const GradedSystem& g, const Context& c) {
    return path_degree(g, c.term, c.hole);
}

BalanceReport balanced_check(const GradedSystem& g) {
    BalanceReport rep;
    for (const auto& inst : instantiate_rules(g.system())) {
        std::vector<std::string> vars = variable_list(inst.rule.lhs);
        for (const auto& x : variable_list(inst.rule.rhs))
            if (std::find(vars.begin(), vars.end(), x) == vars.end()) vars.push_back(x);
        for (const auto& x : vars) {
            BalanceEntry e{inst.rule.id, inst.params, x, degree_of_variable(g, inst.rule.lhs, x),
                           degree_of_variable(g, inst.rule.rhs, x), false, false};
            e.equal = Sensitivity::equal(g.quantale(), e.lhs, e.rhs, &e.sampled);
            rep.balanced = rep.balanced && e.equal;
            rep.entries.push_back(std::move(e));
        }
    }
    return rep;
}

// ---- graded steps ----------------------------------------------------------

namespace {

std::vector<RewriteStep> regrade(const GradedSystem& g, std::vector<RewriteStep> steps) {
    for (auto& st : steps) st.weight = path_degree(g, st.source, st.position).apply(g.quantale(), st.weight);
    return steps;
}

}  // namespace

std::vector<RewriteStep> graded_one_step(const GradedSystem& g, const Term& t, const StepOptions& opts) {
    return regrade(g, one_step(g.system(), t, opts));
}

std::vector<RewriteStep> graded_backward_step(const GradedSystem& g, const Term& t, const StepOptions& opts) {
    return regrade(g, backward_step(g.system(), t, opts));
}

// ---- multi-step reduction --------------------------------------------------

namespace {

/// Per reachable term: best weight for each exact number of contractions.
using Table = std::map<Term, std::vector<QValue>>;

class MultiStep {
public:
    MultiStep(const GradedSystem& g, std::size_t width) : g_(g), q_(g.quantale()), w_(width) {}

    const Table& run(const Term& t) {
        if (auto it = memo_.find(t); it != memo_.end()) return it->second;
        Table out;
        if (t.is_var()) {
            offer(out, t, 0, q_.unit());
        } else {
            congruence(t, out);
            for (const auto& r : g_.system().rules()) contract(t, r, out);
        }
        return memo_.emplace(t, std::move(out)).first->second;
    }

private:
    std::vector<QValue> empty_row() const { return std::vector<QValue>(w_ + 1, q_.bottom()); }

    void offer(Table& tab, const Term& t, std::size_t c, const QValue& w) {
        auto it = tab.find(t);
        if (it == tab.end()) it = tab.emplace(t, empty_row()).first;
        it->second[c] = q_.join(it->second[c], w);
    }

    /// Combines a partial row with a child's table through sensitivity s.
    template <class Key, class Extend>
    std::map<Key, std::vector<QValue>> product(const std::map<Key, std::vector<QValue>>& acc, const Table& child,
                                               const Sensitivity& s, Extend extend) {
        std::map<Key, std::vector<QValue>> next;
        for (const auto& [key, row] : acc)
            for (const auto& [ct, crow] : child)
                for (std::size_t c1 = 0; c1 <= w_; ++c1) {
                    if (row[c1] == q_.bottom()) continue;
                    for (std::size_t c2 = 0; c1 + c2 <= w_; ++c2) {
                        if (crow[c2] == q_.bottom()) continue;
                        QValue w = q_.tensor(row[c1], s.apply(q_, crow[c2]));
                        Key k = extend(key, ct);
                        auto it = next.find(k);
                        if (it == next.end()) it = next.emplace(k, empty_row()).first;
                        it->second[c1 + c2] = q_.join(it->second[c1 + c2], w);
                    }
                }
        return next;
    }

    void congruence(const Term& t, Table& out) {
        std::map<std::vector<Term>, std::vector<QValue>> acc;
        auto unit_row = empty_row();
        unit_row[0] = q_.unit();
        acc.emplace(std::vector<Term>{}, unit_row);
        for (std::size_t i = 0; i < t.arity(); ++i) {
            const Table& child = run(t.args()[i]);
            Sensitivity phi = g_.grades().grade(q_, t, i);
            acc = product(acc, child, phi, [](std::vector<Term> k, const Term& ct) {
                k.push_back(ct);
                return k;
            });
        }
        for (const auto& [args, row] : acc) {
            Term nt = Term::app(t.name(), args, t.indices());
            for (std::size_t c = 0; c <= w_; ++c)
                if (!(row[c] == q_.bottom())) offer(out, nt, c, row[c]);
        }
    }

    void contract(const Term& t, const Rule& r, Table& out) {
        if (w_ == 0 || !r.fresh_variables().empty()) return;
        auto m = match_partial(r.lhs, t);
        if (!m) return;
        std::vector<std::string> open;
        for (const auto& x : r.params())
            if (!m->params.count(x)) open.push_back(x);
        std::function<void(std::size_t, ParamEnv&)> each = [&](std::size_t k, ParamEnv& env) {
            if (k < open.size()) {
                const auto* vals = g_.system().grid().values_for(open[k]);
                if (!vals) return;
                for (const auto& v : *vals) {
                    env[open[k]] = v;
                    each(k + 1, env);
                }
                env.erase(open[k]);
                return;
            }
            for (const auto& [e, v] : m->deferred) {
                auto got = e.eval(env);
                if (!got || *got != v) return;
            }
            if (!r.conditions_hold(env)) return;
            auto eps = r.weight_at(q_, env);
            if (!eps) return;
            Term lhs = substitute_indices(r.lhs, env);
            Term rhs = substitute_indices(r.rhs, env);
            if (!lhs.concrete() || !rhs.concrete()) return;
            std::map<Substitution, std::vector<QValue>> acc;
            auto row = empty_row();
            row[1] = *eps;
            acc.emplace(Substitution{}, row);
            for (const auto& x : variable_list(lhs)) {
                Sensitivity deg = degree_of_variable(g_, lhs, x);
                const Table& child = run(m->subst.at(x));
                acc = product(acc, child, deg, [&x](Substitution s, const Term& ct) {
                    s[x] = ct;
                    return s;
                });
            }
            for (const auto& [sigma, row2] : acc) {
                Term nt = apply_substitution(rhs, sigma);
                for (std::size_t c = 0; c <= w_; ++c)
                    if (!(row2[c] == q_.bottom())) offer(out, nt, c, row2[c]);
            }
        };
        ParamEnv env = m->params;
        each(0, env);
    }

    const GradedSystem& g_;
    const Quantale& q_;
    std::size_t w_;
    std::unordered_map<Term, Table, TermHash> memo_;
};

}  // namespace

std::map<Term, QValue> multi_step(const GradedSystem& g, const Term& t, std::size_t width) {
    if (!balanced_check(g).balanced) throw ConfigError("multi_step requires a balanced system");
    MultiStep ms(g, width);
    std::map<Term, QValue> out;
    for (const auto& [u, row] : ms.run(t)) out[u] = g.quantale().join(std::span<const QValue>(row));
    return out;
}

// ---- orthogonality and probes ----------------------------------------------

OrthogonalityReport orthogonality_check(const GradedSystem& g) {
    OrthogonalityReport rep;
    for (const auto& r : g.system().rules())
        if (!is_linear(r.lhs)) rep.nonlinear_rules.push_back(r.id);
    rep.left_linear = rep.nonlinear_rules.empty();
    rep.peaks = critical_pairs(g.system());
    rep.orthogonal = rep.left_linear && rep.peaks.empty();
    return rep;
}

DiamondReport multistep_diamond_probe(const GradedSystem& g, const Term& t, std::size_t depth, std::size_t width) {
    if (!orthogonality_check(g).orthogonal) throw ConfigError("multistep_diamond_probe requires an orthogonal system");
    if (!balanced_check(g).balanced) throw ConfigError("multistep_diamond_probe requires a balanced system");
    const Quantale& q = g.quantale();
    std::vector<Term> seeds{t};
    std::set<Term> seen{t};
    for (std::size_t level = 0, begin = 0; level < depth; ++level) {
        std::size_t end = seeds.size();
        for (std::size_t i = begin; i < end && seeds.size() < 200; ++i)
            for (const auto& st : graded_one_step(g, seeds[i]))
                if (seen.insert(st.target).second) seeds.push_back(st.target);
        begin = end;
    }
    DiamondReport rep;
    rep.seeds = seeds.size();
    MultiStep narrow(g, width);
    MultiStep wide(g, std::max<std::size_t>(16, width * 4));
    auto best = [&](MultiStep& ms, const Term& u) {
        std::map<Term, QValue> out;
        for (const auto& [v, row] : ms.run(u)) out[v] = q.join(std::span<const QValue>(row));
        return out;
    };
    for (const auto& s : seeds) {
        auto peaks = best(narrow, s);
        std::vector<std::pair<Term, QValue>> list(peaks.begin(), peaks.end());
        for (std::size_t i = 0; i < list.size(); ++i)
            for (std::size_t j = i; j < list.size(); ++j) {
                ++rep.peaks;
                const auto& [a, ea] = list[i];
                const auto& [b, eb] = list[j];
                auto ma = best(wide, a);
                auto mb = best(wide, b);
                std::optional<QValue> valley;
                for (const auto& [u, da] : ma) {
                    auto it = mb.find(u);
                    if (it == mb.end()) continue;
                    QValue total = q.tensor(da, it->second);
                    valley = valley ? q.join(*valley, total) : total;
                }
                QValue peak = q.tensor(ea, eb);
                if (!valley || !q.leq(peak, *valley)) rep.violations.push_back({s, a, b, ea, eb, valley});
            }
    }
    return rep;
}

SubstitutionReport substitution_lemma_probe(const GradedSystem& g, const std::vector<SubstitutionSample>& samples,
                                            std::size_t width) {
    const Quantale& q = g.quantale();
    SubstitutionReport rep;
    MultiStep small(g, width);
    MultiStep large(g, std::max<std::size_t>(16, width * 4));
    auto best = [&](MultiStep& ms, const Term& u) {
        std::map<Term, QValue> out;
        for (const auto& [v, row] : ms.run(u)) out[v] = q.join(std::span<const QValue>(row));
        return out;
    };
    for (const auto& sample : samples) {
        std::vector<std::string> xs;
        for (const auto& [x, v] : sample.v) xs.push_back(x);
        std::vector<std::map<Term, QValue>> choices;
        for (const auto& x : xs) choices.push_back(best(small, sample.v.at(x)));
        Term source = apply_substitution(sample.e, sample.v);
        auto reach = best(large, source);
        for (const auto& [f, eps] : best(small, sample.e)) {
            std::size_t budget = 200;
            std::function<void(std::size_t, Substitution&, QValue)> rec = [&](std::size_t k, Substitution& w,
                                                                              QValue acc) {
                if (budget == 0) return;
                if (k == xs.size()) {
                    --budget;
                    ++rep.checked;
                    Term target = apply_substitution(f, w);
                    auto it = reach.find(target);
                    if (it == reach.end() || !q.leq(acc, it->second))
                        rep.failures.push_back(g.system().print(source) + " -> " + g.system().print(target) +
                                               " expected " + q.format(acc));
                    return;
                }
                Sensitivity deg = degree_of_variable(g, sample.e, xs[k]);
                for (const auto& [wt, delta] : choices[k]) {
                    w[xs[k]] = wt;
                    rec(k + 1, w, q.tensor(acc, deg.apply(q, delta)));
                }
                w.erase(xs[k]);
            };
            Substitution w;
            rec(0, w, eps);
        }
    }
    return rep;
}

}  // namespace qrw
