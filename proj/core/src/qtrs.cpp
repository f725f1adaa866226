#include "qrw/qtrs.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>

namespace qrw {

// ---- side conditions and grids --------------------------------------------

std::optional<bool> SideCondition::holds(const ParamEnv& env) const {
    auto a = left.eval(env);
    auto b = right.eval(env);
    if (!a || !b) return std::nullopt;
    switch (cmp) {
    case Cmp::Lt: return *a < *b;
    case Cmp::Le: return *a <= *b;
    case Cmp::Gt: return *a > *b;
    case Cmp::Ge: return *a >= *b;
    case Cmp::Eq: return *a == *b;
    case Cmp::Ne: return *a != *b;
    }
    return std::nullopt;
}

std::string SideCondition::str() const {
    static const char* ops[] = {"<", "<=", ">", ">=", "==", "!="};
    return left.str() + " " + ops[static_cast<int>(cmp)] + " " + right.str();
}

const std::vector<Rational>* ParamGrid::values_for(const std::string& param) const {
    if (auto it = per_param.find(param); it != per_param.end()) return &it->second;
    return values.empty() ? nullptr : &values;
}

namespace {

void for_each_env(const std::vector<std::string>& params, std::size_t k, const ParamGrid& grid, ParamEnv& env,
                  const std::function<void(const ParamEnv&)>& f) {
    if (k == params.size()) {
        f(env);
        return;
    }
    const auto* vals = grid.values_for(params[k]);
    if (!vals) return;
    for (const auto& v : *vals) {
        env[params[k]] = v;
        for_each_env(params, k + 1, grid, env, f);
    }
    env.erase(params[k]);
}

void bare_params(const Term& t, std::set<std::string>& out) {
    if (t.is_var()) return;
    for (const auto& i : t.indices())
        if (i.is_param()) out.insert(i.name());
    for (const auto& a : t.args()) bare_params(a, out);
}

}  // namespace

// ---- rules -----------------------------------------------------------------

std::set<std::string> Rule::params() const {
    std::set<std::string> out;
    collect_index_params(lhs, out);
    collect_index_params(rhs, out);
    if (auto* e = std::get_if<IndexExpr>(&weight)) e->collect_params(out);
    for (const auto& c : conditions) {
        c.left.collect_params(out);
        c.right.collect_params(out);
    }
    return out;
}

std::set<std::string> Rule::unbound_params() const {
    std::set<std::string> bound;
    bare_params(lhs, bound);
    std::set<std::string> out;
    for (const auto& p : params())
        if (!bound.count(p)) out.insert(p);
    return out;
}

std::set<std::string> Rule::fresh_variables() const {
    auto l = variables(lhs);
    std::set<std::string> out;
    for (const auto& x : variables(rhs))
        if (!l.count(x)) out.insert(x);
    return out;
}

std::optional<QValue> Rule::weight_at(const Quantale& q, const ParamEnv& env) const {
    if (auto* v = std::get_if<QValue>(&weight)) return *v;
    auto r = std::get<IndexExpr>(weight).eval(env);
    if (!r || !q.contains(*r)) return std::nullopt;
    return q.make(*r);
}

bool Rule::conditions_hold(const ParamEnv& env) const {
    return std::all_of(conditions.begin(), conditions.end(), [&](const SideCondition& c) {
        auto h = c.holds(env);
        return h && *h;
    });
}

// ---- systems ---------------------------------------------------------------

RewriteSystem::RewriteSystem(const Quantale& q, Signature sig, std::vector<Rule> rules, ParamGrid grid,
                             std::string name)
    : q_(&q), sig_(std::move(sig)), rules_(std::move(rules)), grid_(std::move(grid)), name_(std::move(name)) {
    std::set<std::string> ids;
    for (const auto& r : rules_) {
        if (r.id.empty() || !ids.insert(r.id).second) throw ConfigError("duplicate or empty rule id '" + r.id + "'");
        sig_.check(r.lhs);
        sig_.check(r.rhs);
        if (auto* v = std::get_if<QValue>(&r.weight)) {
            q_->check(*v);
            if (*v == q_->bottom()) throw ConfigError("rule " + r.id + " has bottom weight");
        }
        for (const auto& p : r.unbound_params())
            if (!grid_.values_for(p))
                throw ConfigError("rule " + r.id + ": parameter " + p + " is not bound by the lhs and has no grid");
        linear_ = linear_ && is_linear(r.lhs) && is_linear(r.rhs);
        left_linear_ = left_linear_ && is_linear(r.lhs);
    }
}

const Rule* RewriteSystem::find_rule(const std::string& id) const {
    for (const auto& r : rules_)
        if (r.id == id) return &r;
    return nullptr;
}

// ---- one-step rewriting ----------------------------------------------------

std::vector<Term> subterm_pool(const std::vector<Term>& terms) {
    std::set<Term> seen;
    for (const auto& t : terms)
        for (const auto& p : positions(t)) seen.insert(subterm_at(t, p));
    return {seen.begin(), seen.end()};
}

namespace {

/// Instantiates `extra` variables from the pool, or with fresh names when the pool is empty.
void for_each_extension(const std::vector<std::string>& extra, const StepOptions& opts, const Term& context,
                        Substitution& sigma, const std::function<void(const Substitution&)>& f) {
    if (extra.empty()) {
        f(sigma);
        return;
    }
    if (opts.pool.empty()) {
        Renamer ren(variables(context));
        for (const auto& [x, t] : sigma) ren.avoid(variables(t));
        Substitution s = sigma;
        for (const auto& x : extra) s[x] = Term::var(ren.fresh(x));
        f(s);
        return;
    }
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == extra.size()) {
            f(sigma);
            return;
        }
        for (const auto& t : opts.pool) {
            sigma[extra[k]] = t;
            rec(k + 1);
        }
        sigma.erase(extra[k]);
    };
    rec(0);
}

/// Shared driver for forward and backward steps: `from` is matched, `to` is built.
void rewrite_at(const RewriteSystem& sys, const Rule& rule, const Term& t, const Position& p, bool backward,
                const StepOptions& opts, std::vector<RewriteStep>& out) {
    const Term& from = backward ? rule.rhs : rule.lhs;
    const Term& to = backward ? rule.lhs : rule.rhs;
    const Term& s = subterm_at(t, p);
    auto m = match_partial(from, s);
    if (!m) return;
    std::vector<std::string> open;
    for (const auto& x : rule.params())
        if (!m->params.count(x)) open.push_back(x);
    std::vector<std::string> extra;
    {
        auto fv = variables(from);
        for (const auto& x : variable_list(to))
            if (!fv.count(x)) extra.push_back(x);
    }
    ParamEnv env = m->params;
    for_each_env(open, 0, sys.grid(), env, [&](const ParamEnv& e) {
        for (const auto& [expr, v] : m->deferred) {
            auto got = expr.eval(e);
            if (!got || *got != v) return;
        }
        if (!rule.conditions_hold(e)) return;
        auto w = rule.weight_at(sys.quantale(), e);
        if (!w || *w == sys.quantale().bottom()) return;
        Term pattern = substitute_indices(to, e);
        if (!pattern.concrete()) return;
        Substitution sigma = m->subst;
        for_each_extension(extra, opts, t, sigma, [&](const Substitution& full) {
            Term image = apply_substitution(pattern, full);
            RewriteStep st;
            st.source = t;
            st.target = replace_at(t, p, image);
            st.weight = *w;
            st.position = p;
            st.rule = rule.id;
            st.subst = full;
            st.params = e;
            st.backward = backward;
            out.push_back(std::move(st));
        });
    });
}

}  // namespace

std::vector<RewriteStep> one_step(const RewriteSystem& sys, const Term& t, const StepOptions& opts) {
    sys.signature().check(t);
    std::vector<RewriteStep> out;
    for (const auto& p : positions(t))
        for (const auto& r : sys.rules()) rewrite_at(sys, r, t, p, false, opts, out);
    return out;
}

std::vector<RewriteStep> backward_step(const RewriteSystem& sys, const Term& t, const StepOptions& opts) {
    sys.signature().check(t);
    std::vector<RewriteStep> out;
    for (const auto& p : positions(t))
        for (const auto& r : sys.rules()) rewrite_at(sys, r, t, p, true, opts, out);
    return out;
}

bool validate_step(const RewriteSystem& sys, const RewriteStep& step) {
    const Rule* r = sys.find_rule(step.rule);
    if (!r) return false;
    const Term& before = step.backward ? step.target : step.source;
    const Term& after = step.backward ? step.source : step.target;
    if (!r->conditions_hold(step.params)) return false;
    auto w = r->weight_at(sys.quantale(), step.params);
    if (!w || !(*w == step.weight)) return false;
    Term l = apply_substitution(substitute_indices(r->lhs, step.params), step.subst);
    Term rr = apply_substitution(substitute_indices(r->rhs, step.params), step.subst);
    try {
        return subterm_at(before, step.position) == l && replace_at(before, step.position, rr) == after;
    } catch (const InvalidPosition&) {
        return false;
    }
}

// ---- critical pairs --------------------------------------------------------

std::vector<RuleInstance> instantiate_rules(const RewriteSystem& sys) {
    std::vector<RuleInstance> out;
    for (const auto& r : sys.rules()) {
        auto ps = r.params();
        if (ps.empty()) {
            out.push_back({r, {}});
            continue;
        }
        std::vector<std::string> names(ps.begin(), ps.end());
        for (const auto& n : names)
            if (!sys.grid().values_for(n))
                throw ConfigError("rule " + r.id + ": schema parameter " + n + " has no grid for critical pairs");
        ParamEnv env;
        for_each_env(names, 0, sys.grid(), env, [&](const ParamEnv& e) {
            if (!r.conditions_hold(e)) return;
            auto w = r.weight_at(sys.quantale(), e);
            if (!w || *w == sys.quantale().bottom()) return;
            Rule inst = r;
            inst.lhs = substitute_indices(r.lhs, e);
            inst.rhs = substitute_indices(r.rhs, e);
            if (!inst.lhs.concrete() || !inst.rhs.concrete()) return;
            inst.weight = *w;
            inst.conditions.clear();
            out.push_back({std::move(inst), e});
        });
    }
    return out;
}

namespace {

struct Tagged {
    RuleInstance inst;
    int origin;
};

std::vector<CriticalPeak> overlaps(const std::vector<Tagged>& rules, bool cross_only) {
    std::vector<CriticalPeak> out;
    for (std::size_t j = 0; j < rules.size(); ++j) {
        const Rule& outer = rules[j].inst.rule;
        if (outer.variable_lhs()) continue;
        std::set<std::string> avoid = variables(outer.lhs);
        for (const auto& x : variables(outer.rhs)) avoid.insert(x);
        for (const auto& p : function_positions(outer.lhs)) {
            const Term& target = subterm_at(outer.lhs, p);
            for (std::size_t i = 0; i < rules.size(); ++i) {
                const Rule& inner = rules[i].inst.rule;
                if (inner.variable_lhs()) continue;
                if (cross_only && rules[i].origin == rules[j].origin) continue;
                if (p.empty() && i >= j) continue;
                auto renamed = rename_apart({inner.lhs, inner.rhs}, avoid);
                auto mgu = unify(renamed[0], target);
                if (!mgu) continue;
                CriticalPeak peak;
                peak.source = apply_substitution(outer.lhs, *mgu);
                peak.left = replace_at(peak.source, p, apply_substitution(renamed[1], *mgu));
                peak.left_weight = std::get<QValue>(inner.weight);
                peak.right = apply_substitution(outer.rhs, *mgu);
                peak.right_weight = std::get<QValue>(outer.weight);
                peak.position = p;
                peak.inner_rule = inner.id;
                peak.outer_rule = outer.id;
                peak.inner_params = rules[i].inst.params;
                peak.outer_params = rules[j].inst.params;
                out.push_back(std::move(peak));
            }
        }
    }
    return out;
}

std::vector<Tagged> tag(const RewriteSystem& sys, int origin) {
    std::vector<Tagged> out;
    for (auto& inst : instantiate_rules(sys)) out.push_back({std::move(inst), origin});
    return out;
}

}  // namespace

std::vector<CriticalPeak> critical_pairs(const RewriteSystem& sys) {
    return overlaps(tag(sys, 0), false);
}

std::vector<CriticalPeak> cross_critical_pairs(const RewriteSystem& a, const RewriteSystem& b) {
    if (&a.quantale() != &b.quantale()) throw ConfigError("systems over different quantales");
    auto rules = tag(a, 0);
    auto rb = tag(b, 1);
    rules.insert(rules.end(), rb.begin(), rb.end());
    return overlaps(rules, true);
}

// ---- bounded exploration ---------------------------------------------------

std::vector<RewriteStep> Reachable::path_to(const Term& t) const {
    std::vector<RewriteStep> path;
    auto it = nodes.find(t);
    while (it != nodes.end() && it->second.via) {
        path.push_back(*it->second.via);
        it = nodes.find(it->second.via->source);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

Reachable explore(const RewriteSystem& sys, const Term& start, const ExploreLimits& limits,
                  const StepOptions& opts, const SettleHook& stop) {
    const Quantale& q = sys.quantale();
    struct Item {
        QValue w;
        std::size_t depth;
        Term t;
    };
    auto worse = [&q](const Item& a, const Item& b) {
        if (!(a.w == b.w)) return q.lt(a.w, b.w);
        if (a.depth != b.depth) return a.depth > b.depth;
        return b.t < a.t;
    };
    std::priority_queue<Item, std::vector<Item>, decltype(worse)> frontier(worse);
    Reachable out;
    out.nodes[start] = {q.unit(), 0, std::nullopt};
    frontier.push({q.unit(), 0, start});
    std::unordered_map<Term, bool, TermHash> settled;
    while (!frontier.empty()) {
        Item cur = frontier.top();
        frontier.pop();
        if (settled.count(cur.t)) continue;
        const auto& entry = out.nodes.at(cur.t);
        if (!(entry.weight == cur.w) || entry.depth != cur.depth) continue;
        settled[cur.t] = true;
        if (stop && stop(cur.t, cur.w)) break;
        if (cur.depth >= limits.max_depth) continue;
        for (auto& st : one_step(sys, cur.t, opts)) {
            QValue w = q.tensor(cur.w, st.weight);
            if (limits.cutoff && !q.leq(*limits.cutoff, w)) continue;
            auto it = out.nodes.find(st.target);
            if (it != out.nodes.end()) {
                const auto& e = it->second;
                bool better = q.lt(e.weight, w) || (e.weight == w && cur.depth + 1 < e.depth);
                if (!better || settled.count(st.target)) continue;
            } else if (out.nodes.size() >= limits.max_nodes) {
                out.truncated = true;
                continue;
            }
            Term target = st.target;
            out.nodes[target] = {w, cur.depth + 1, std::move(st)};
            frontier.push({w, cur.depth + 1, target});
        }
    }
    return out;
}

// ---- joinability -----------------------------------------------------------

namespace {

using Candidates = std::vector<std::pair<Term, std::pair<QValue, std::vector<RewriteStep>>>>;

JoinVerdict best_meet(const Quantale& q, const QValue& peak_total,
                      const std::function<std::optional<std::pair<QValue, std::vector<RewriteStep>>>(const Term&)>& left,
                      const Reachable& right_side, const std::vector<Term>& left_terms) {
    JoinVerdict v;
    for (const auto& u : left_terms) {
        auto it = right_side.nodes.find(u);
        if (it == right_side.nodes.end()) continue;
        auto l = left(u);
        if (!l) continue;
        QValue total = q.tensor(l->first, it->second.weight);
        bool better = !v.best_valley || q.lt(*v.best_valley, total) ||
                      (*v.best_valley == total && v.meet && u < *v.meet);
        if (better) {
            v.best_valley = total;
            v.meet = u;
            v.left_path = l->second;
            v.right_path = right_side.path_to(u);
        }
    }
    v.joinable = v.best_valley && q.leq(peak_total, *v.best_valley);
    return v;
}

std::vector<Term> keys(const Reachable& r) {
    std::vector<Term> out;
    for (const auto& [t, e] : r.nodes) out.push_back(t);
    std::sort(out.begin(), out.end());
    return out;
}

JoinVerdict star_star(const RewriteSystem& sys, const Term& l, const Term& r, const QValue& peak,
                      std::size_t depth, std::optional<QValue> cutoff, const StepOptions& opts) {
    const Quantale& q = sys.quantale();
    ExploreLimits lim{depth, 200000, cutoff};
    Reachable a = explore(sys, l, lim, opts);
    SettleHook stop;
    if (cutoff)
        stop = [&](const Term& u, const QValue& w) {
            auto it = a.nodes.find(u);
            return it != a.nodes.end() && q.leq(peak, q.tensor(it->second.weight, w));
        };
    Reachable b = explore(sys, r, lim, opts, stop);
    return best_meet(
        q, peak,
        [&](const Term& u) -> std::optional<std::pair<QValue, std::vector<RewriteStep>>> {
            auto it = a.nodes.find(u);
            if (it == a.nodes.end()) return std::nullopt;
            return std::make_pair(it->second.weight, a.path_to(u));
        },
        b, keys(a));
}

/// left →⁼ u *← right.
JoinVerdict eq_star(const RewriteSystem& sys, const Term& l, const Term& r, const QValue& peak, std::size_t depth,
                    const StepOptions& opts) {
    const Quantale& q = sys.quantale();
    std::map<Term, std::pair<QValue, std::vector<RewriteStep>>> one;
    one.emplace(l, std::make_pair(q.unit(), std::vector<RewriteStep>{}));
    for (auto& st : one_step(sys, l, opts)) {
        auto it = one.find(st.target);
        if (it == one.end() || q.lt(it->second.first, st.weight)) {
            Term t = st.target;
            QValue w = st.weight;
            one[t] = {w, {std::move(st)}};
        }
    }
    Reachable b = explore(sys, r, ExploreLimits{depth, 200000, peak}, opts, [&](const Term& u, const QValue& w) {
        auto it = one.find(u);
        return it != one.end() && q.leq(peak, q.tensor(it->second.first, w));
    });
    std::vector<Term> terms;
    for (const auto& [t, e] : one) terms.push_back(t);
    return best_meet(
        q, peak,
        [&](const Term& u) -> std::optional<std::pair<QValue, std::vector<RewriteStep>>> {
            auto it = one.find(u);
            if (it == one.end()) return std::nullopt;
            return it->second;
        },
        b, terms);
}

void swap_sides(JoinVerdict& v) { std::swap(v.left_path, v.right_path); }

}  // namespace

JoinVerdict join_check(const RewriteSystem& sys, const CriticalPeak& peak, std::size_t depth_budget) {
    const Quantale& q = sys.quantale();
    QValue total = q.tensor(peak.left_weight, peak.right_weight);
    if (peak.left == peak.right) {
        JoinVerdict v;
        v.joinable = true;
        v.best_valley = q.unit();
        v.meet = peak.left;
        return v;
    }
    StepOptions opts{subterm_pool({peak.source, peak.left, peak.right})};
    JoinVerdict v = star_star(sys, peak.left, peak.right, total, depth_budget, total, opts);
    if (!v.joinable) {
        JoinVerdict any = star_star(sys, peak.left, peak.right, total, depth_budget, std::nullopt, opts);
        if (any.best_valley) return any;
    }
    return v;
}

StrongClosureVerdict strongly_closed_check(const RewriteSystem& sys, const CriticalPeak& peak,
                                           std::size_t depth_budget) {
    const Quantale& q = sys.quantale();
    QValue total = q.tensor(peak.left_weight, peak.right_weight);
    StrongClosureVerdict v;
    StepOptions opts{subterm_pool({peak.source, peak.left, peak.right})};
    v.first = eq_star(sys, peak.left, peak.right, total, depth_budget, opts);
    if (!v.first.joinable) return v;
    v.second = eq_star(sys, peak.right, peak.left, total, depth_budget, opts);
    swap_sides(v.second);
    v.holds = v.first.joinable && v.second.joinable;
    return v;
}

// ---- sums ------------------------------------------------------------------

RewriteSystem sum(const RewriteSystem& a, const RewriteSystem& b) {
    if (&a.quantale() != &b.quantale()) throw ConfigError("sum of systems over different quantales");
    if (!a.signature().disjoint(b.signature())) throw ConfigError("sum requires disjoint signatures");
    Signature sig = a.signature();
    for (const auto& d : b.signature().symbols()) sig.add(d);
    std::string na = a.name().empty() ? "left" : a.name();
    std::string nb = b.name().empty() ? "right" : b.name();
    std::vector<Rule> rules;
    std::set<std::string> ids;
    auto add = [&](const RewriteSystem& s, const std::string& comp) {
        for (auto r : s.rules()) {
            if (!ids.insert(r.id).second) {
                r.id = comp + "." + r.id;
                ids.insert(r.id);
            }
            r.component = comp;
            rules.push_back(std::move(r));
        }
    };
    add(a, na);
    add(b, nb);
    ParamGrid grid = a.grid();
    if (grid.values.empty()) grid.values = b.grid().values;
    for (const auto& [k, v] : b.grid().per_param) grid.per_param.emplace(k, v);
    RewriteSystem out(a.quantale(), std::move(sig), std::move(rules), std::move(grid), na + "+" + nb);
    out.parts_ = {std::make_shared<const RewriteSystem>(a), std::make_shared<const RewriteSystem>(b)};
    return out;
}

// ---- termination probe -----------------------------------------------------

SnProbe sn_probe(const RewriteSystem& sys, const std::vector<Term>& seeds, std::size_t max_nodes) {
    constexpr std::size_t kMaxProbeDepth = 256;
    SnProbe out;
    StepOptions opts{subterm_pool(seeds)};
    enum Color { Grey, Black };
    std::unordered_map<Term, Color, TermHash> color;
    struct Frame {
        Term t;
        std::vector<Term> succ;
        std::size_t next = 0;
    };
    bool budget_hit = false;
    for (const auto& seed : seeds) {
        if (color.count(seed)) continue;
        std::vector<Frame> stack;
        auto push = [&](const Term& t) {
            color[t] = Grey;
            Frame f{t, {}, 0};
            std::set<Term> seen;
            for (auto& st : one_step(sys, t, opts))
                if (seen.insert(st.target).second) f.succ.push_back(st.target);
            stack.push_back(std::move(f));
        };
        push(seed);
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.next == 0 && stack.size() >= kMaxProbeDepth) {
                budget_hit = true;
                f.next = f.succ.size();
            }
            if (f.next == 0)
                std::stable_partition(f.succ.begin(), f.succ.end(), [&](const Term& u) {
                    auto it = color.find(u);
                    return it != color.end() && it->second == Grey;
                });
            if (f.next == f.succ.size()) {
                color[f.t] = Black;
                stack.pop_back();
                continue;
            }
            Term n = f.succ[f.next++];
            auto it = color.find(n);
            if (it != color.end()) {
                if (it->second == Grey) {
                    out.verdict = SnVerdict::NotTerminating;
                    bool in = false;
                    for (const auto& fr : stack) {
                        if (fr.t == n) in = true;
                        if (in) out.cycle.push_back(fr.t);
                    }
                    out.explored = color.size();
                    return out;
                }
                continue;
            }
            if (color.size() >= max_nodes) {
                budget_hit = true;
                continue;
            }
            push(n);
        }
    }
    out.explored = color.size();
    out.verdict = budget_hit ? SnVerdict::Inconclusive : SnVerdict::TerminatingOnExplored;
    return out;
}

// ---- confluence report -----------------------------------------------------

std::string certificate_label(Certificate c) {
    switch (c) {
    case Certificate::CriticalPairsAndSN: return "CP joinable + SN probe passes";
    case Certificate::StrongClosure: return "strong closure";
    case Certificate::HindleyRosen: return "Hindley-Rosen";
    case Certificate::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

ConfluenceReport confluence_report(const RewriteSystem& sys, const ConfluenceOptions& opts) {
    ConfluenceReport rep;
    const Quantale& q = sys.quantale();
    rep.linear = sys.linear();
    rep.left_linear = sys.left_linear();
    bool linear_ok = rep.linear;
    if (!rep.linear && q.idempotent()) {
        rep.linearity_relaxed = true;
        linear_ok = true;
        rep.notes.push_back("linearity gate relaxed for an idempotent quantale (unproved)");
    }
    bool variable_lhs = std::any_of(sys.rules().begin(), sys.rules().end(),
                                    [](const Rule& r) { return r.variable_lhs(); });
    if (variable_lhs) rep.notes.push_back("variable left-hand sides are excluded from overlap analysis");

    if (sys.components().size() == 2) {
        const auto& a = *sys.components()[0];
        const auto& b = *sys.components()[1];
        rep.cross_peaks = cross_critical_pairs(a, b).size();
        bool all = true;
        for (const auto& part : sys.components()) {
            auto sub = confluence_report(*part, opts);
            rep.components.emplace_back(part->name(), sub.certificate);
            all = all && sub.certificate != Certificate::Inconclusive;
        }
        if (rep.cross_peaks == 0 && all && linear_ok && !variable_lhs) {
            rep.certificate = Certificate::HindleyRosen;
            rep.notes.push_back("no cross critical pairs; components confluent and strongly commuting");
            return rep;
        }
    }

    auto peaks = critical_pairs(sys);
    std::vector<Term> seeds = opts.seeds;
    if (seeds.empty()) {
        for (const auto& inst : instantiate_rules(sys)) seeds.push_back(inst.rule.lhs);
        for (const auto& p : peaks) seeds.push_back(p.source);
    }
    rep.sn = sn_probe(sys, seeds, opts.sn_budget);
    for (const auto& p : peaks) rep.peaks.push_back({p, std::nullopt, std::nullopt});

    if (!linear_ok || variable_lhs) {
        rep.notes.push_back(std::string(variable_lhs ? "variable left-hand sides" : "non-linear rules") +
                            " rule out both certificates; peak checks skipped");
        return rep;
    }
    bool terminating = rep.sn.verdict == SnVerdict::TerminatingOnExplored;
    rep.all_joinable = terminating;
    if (terminating) {
        for (auto& pr : rep.peaks) {
            pr.join = join_check(sys, pr.peak, opts.depth_budget);
            rep.all_joinable = rep.all_joinable && pr.join->joinable;
        }
        if (rep.all_joinable) {
            rep.certificate = Certificate::CriticalPairsAndSN;
            rep.notes.push_back("termination established at explored scale only");
            return rep;
        }
    } else {
        rep.notes.push_back("termination probe failed; joinability checks skipped");
    }
    rep.all_strongly_closed = true;
    for (auto& pr : rep.peaks) {
        pr.strong = strongly_closed_check(sys, pr.peak, opts.depth_budget);
        rep.all_strongly_closed = rep.all_strongly_closed && pr.strong->holds;
    }
    if (rep.all_strongly_closed) rep.certificate = Certificate::StrongClosure;
    return rep;
}

}  // namespace qrw
