#include "qrw/search.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <functional>
#include <queue>
#include <unordered_map>

namespace qrw {

std::string answer_kind_name(AnswerKind k) {
    switch (k) {
    case AnswerKind::Exact: return "Exact";
    case AnswerKind::UpperBoundOnly: return "UpperBoundOnly";
    case AnswerKind::Unreachable: return "Unreachable";
    case AnswerKind::BudgetExhausted: return "BudgetExhausted";
    }
    return "BudgetExhausted";
}

std::string tri_name(Tri t) {
    switch (t) {
    case Tri::Yes: return "yes";
    case Tri::No: return "no";
    case Tri::Unknown: return "unknown";
    }
    return "unknown";
}

std::vector<RewriteStep> StepRelation::forward(const Term& t, const StepOptions& opts) const {
    return graded_ ? graded_one_step(*graded_, t, opts) : one_step(*sys_, t, opts);
}

std::vector<RewriteStep> StepRelation::backward(const Term& t, const StepOptions& opts) const {
    return graded_ ? graded_backward_step(*graded_, t, opts) : backward_step(*sys_, t, opts);
}

bool StepRelation::replay(const RewriteStep& step, const StepOptions& opts) const {
    auto steps = step.backward ? backward(step.source, opts) : forward(step.source, opts);
    return std::any_of(steps.begin(), steps.end(), [&](const RewriteStep& s) {
        return s.target == step.target && s.rule == step.rule && s.position == step.position &&
               s.weight == step.weight;
    });
}

namespace {

RewriteStep reversed(const RewriteStep& st) {
    RewriteStep r = st;
    std::swap(r.source, r.target);
    r.backward = !st.backward;
    return r;
}

/// One side of a uniform-cost search.
class Frontier {
public:
    struct Node {
        QValue w;
        std::size_t depth = 0;
        std::optional<RewriteStep> via;
        bool settled = false;
    };

    Frontier(const StepRelation& rel, const Term& start, bool symmetric, const SearchBudget& budget,
             const StepOptions& opts)
        : rel_(rel), q_(rel.quantale()), symmetric_(symmetric), budget_(budget), opts_(opts),
          queue_(Worse{&q_}) {
        nodes_.emplace(start, Node{q_.unit(), 0, std::nullopt, false});
        queue_.push({q_.unit(), start.size(), 0, start});
    }

    bool empty() {
        drop_stale();
        return queue_.empty();
    }

    QValue top() {
        drop_stale();
        return queue_.empty() ? q_.bottom() : queue_.top().w;
    }

    /// Settles the best node and relaxes its edges. `on_update` sees every improved node.
    std::optional<Term> advance(const std::function<void(const Term&)>& on_update,
                                const std::function<void(const Term&, bool)>& on_settle = nullptr) {
        drop_stale();
        if (queue_.empty()) return std::nullopt;
        Item cur = queue_.top();
        queue_.pop();
        Node& node = nodes_.at(cur.t);
        node.settled = true;
        ++expanded_;
        if (cur.depth >= budget_.max_depth) {
            prune(cur.w);
            if (on_settle) on_settle(cur.t, false);
            return cur.t;
        }
        auto steps = rel_.forward(cur.t, opts_);
        bool normal = steps.empty();
        if (symmetric_)
            for (auto& b : rel_.backward(cur.t, opts_)) steps.push_back(std::move(b));
        for (auto& st : steps) {
            QValue w = q_.tensor(cur.w, st.weight);
            if (budget_.weight_cutoff && !q_.leq(*budget_.weight_cutoff, w)) continue;
            if (budget_.max_term_size && st.target.size() > budget_.max_term_size) {
                prune(w);
                continue;
            }
            auto it = nodes_.find(st.target);
            if (it != nodes_.end() && (it->second.settled || !q_.lt(it->second.w, w))) continue;
            Term target = st.target;
            std::size_t size = target.size();
            nodes_[target] = Node{w, cur.depth + 1, std::move(st), false};
            queue_.push({w, size, cur.depth + 1, target});
            on_update(target);
        }
        if (on_settle) on_settle(cur.t, normal);
        return cur.t;
    }

    const Node* find(const Term& t) const {
        auto it = nodes_.find(t);
        return it == nodes_.end() ? nullptr : &it->second;
    }

    std::vector<RewriteStep> path_to(const Term& t) const {
        std::vector<RewriteStep> path;
        const Node* n = find(t);
        while (n && n->via) {
            path.push_back(*n->via);
            n = find(n->via->source);
        }
        std::reverse(path.begin(), path.end());
        return path;
    }

    std::size_t expanded() const { return expanded_; }
    const std::optional<QValue>& pruned_best() const { return pruned_; }
    void prune(const QValue& w) { pruned_ = pruned_ ? q_.join(*pruned_, w) : w; }

private:
    struct Item {
        QValue w;
        std::size_t size;
        std::size_t depth;
        Term t;
    };
    struct Worse {
        const Quantale* q;
        bool operator()(const Item& a, const Item& b) const {
            if (!(a.w == b.w)) return q->lt(a.w, b.w);
            if (a.size != b.size) return a.size > b.size;
            if (a.depth != b.depth) return a.depth > b.depth;
            return b.t < a.t;
        }
    };

    void drop_stale() {
        while (!queue_.empty()) {
            const Item& it = queue_.top();
            const Node& n = nodes_.at(it.t);
            if (n.settled || !(n.w == it.w) || n.depth != it.depth)
                queue_.pop();
            else
                break;
        }
    }

    const StepRelation& rel_;
    const Quantale& q_;
    bool symmetric_;
    const SearchBudget& budget_;
    const StepOptions& opts_;
    std::priority_queue<Item, std::vector<Item>, Worse> queue_;
    std::unordered_map<Term, Node, TermHash> nodes_;
    std::size_t expanded_ = 0;
    std::optional<QValue> pruned_;
};

QValue total_weight(const Quantale& q, const std::vector<RewriteStep>& steps) {
    QValue acc = q.unit();
    for (const auto& st : steps) acc = q.tensor(acc, st.weight);
    return acc;
}

/// True when no pruned branch could have beaten `value`.
bool unaffected(const Quantale& q, const QValue& value, const std::optional<QValue>& a,
                const std::optional<QValue>& b = std::nullopt) {
    return (!a || q.leq(*a, value)) && (!b || q.leq(*b, value));
}

void require_total(const StepRelation& rel, const Term& s, const Term& t) {
    if (!rel.quantale().totally_ordered())
        throw DomainError("uniform-cost search needs a totally ordered quantale, got " + rel.quantale().name());
    rel.system().signature().check(s);
    rel.system().signature().check(t);
}

DistanceAnswer identity_answer(const Quantale& q) {
    DistanceAnswer a;
    a.kind = AnswerKind::Exact;
    a.value = q.unit();
    return a;
}

/// Two simultaneous searches joined at common nodes.
DistanceAnswer meet_search(const StepRelation& rel, const Term& s, const Term& t, const SearchBudget& budget,
                           bool symmetric) {
    const Quantale& q = rel.quantale();
    StepOptions opts{subterm_pool({s, t})};
    Frontier fs(rel, s, symmetric, budget, opts);
    Frontier ft(rel, t, symmetric, budget, opts);
    std::optional<QValue> mu;
    std::optional<Term> meet;
    auto check = [&](const Term& x) {
        const auto* a = fs.find(x);
        const auto* b = ft.find(x);
        if (!a || !b) return;
        QValue total = q.tensor(a->w, b->w);
        if (!mu || q.lt(*mu, total) || (*mu == total && x < *meet)) {
            mu = total;
            meet = x;
        }
    };
    check(s);
    check(t);
    bool capped = false;
    for (;;) {
        QValue ts = fs.top();
        QValue tt = ft.top();
        // Unseen meets are bounded by ts ⊗ tt for conversions and by ts ∨ tt for valleys.
        QValue bound = symmetric ? q.tensor(ts, tt) : q.join(ts, tt);
        if (mu && q.leq(bound, *mu)) break;
        if (fs.empty() && ft.empty()) break;
        if (symmetric && (fs.empty() || ft.empty())) break;
        if (fs.expanded() + ft.expanded() >= budget.max_expanded_terms) {
            capped = true;
            break;
        }
        bool left = ft.empty() || (!fs.empty() && q.leq(tt, ts));
        if (left)
            fs.advance(check);
        else
            ft.advance(check);
    }
    DistanceAnswer a;
    a.expanded = fs.expanded() + ft.expanded();
    if (capped) {
        fs.prune(fs.top());
        ft.prune(ft.top());
    }
    if (!mu) {
        bool exhausted = !capped && !fs.pruned_best() && !ft.pruned_best() &&
                         (symmetric ? (fs.empty() || ft.empty()) : (fs.empty() && ft.empty()));
        a.kind = exhausted ? AnswerKind::Unreachable : AnswerKind::BudgetExhausted;
        return a;
    }
    a.value = mu;
    a.witness = fs.path_to(*meet);
    for (auto& st : [&] {
             auto p = ft.path_to(*meet);
             std::reverse(p.begin(), p.end());
             return p;
         }())
        a.witness.push_back(reversed(st));
    a.kind = unaffected(q, *mu, fs.pruned_best(), ft.pruned_best()) ? AnswerKind::Exact
                                                                     : AnswerKind::UpperBoundOnly;
    return a;
}

}  // namespace

DistanceAnswer reduction_distance(const StepRelation& rel, const Term& s, const Term& t,
                                  const SearchBudget& budget) {
    const Quantale& q = rel.quantale();
    require_total(rel, s, t);
    if (s == t) return identity_answer(q);
    StepOptions opts{subterm_pool({s, t})};
    Frontier f(rel, s, false, budget, opts);
    DistanceAnswer a;
    bool capped = false;
    for (;;) {
        if (f.empty()) break;
        if (f.expanded() >= budget.max_expanded_terms) {
            capped = true;
            f.prune(f.top());
            break;
        }
        auto u = f.advance([](const Term&) {});
        if (u && *u == t) {
            a.value = f.find(t)->w;
            a.witness = f.path_to(t);
            a.kind = unaffected(q, *a.value, f.pruned_best()) ? AnswerKind::Exact : AnswerKind::UpperBoundOnly;
            a.expanded = f.expanded();
            return a;
        }
    }
    a.expanded = f.expanded();
    if (const auto* n = f.find(t)) {
        a.kind = AnswerKind::UpperBoundOnly;
        a.value = n->w;
        a.witness = f.path_to(t);
    } else {
        a.kind = (capped || f.pruned_best()) ? AnswerKind::BudgetExhausted : AnswerKind::Unreachable;
    }
    return a;
}

DistanceAnswer convertibility_distance(const StepRelation& rel, const Term& s, const Term& t,
                                       const SearchBudget& budget, const ConvertOptions& opts) {
    require_total(rel, s, t);
    if (s == t) return identity_answer(rel.quantale());
    if (opts.church_rosser) {
        DistanceAnswer v = valley_distance(rel, s, t, budget);
        if (v.kind == AnswerKind::Exact || v.kind == AnswerKind::Unreachable) {
            v.note = "valley search, equal to convertibility by the Church-Rosser property";
            return v;
        }
    }
    return meet_search(rel, s, t, budget, true);
}

DistanceAnswer valley_distance(const StepRelation& rel, const Term& s, const Term& t, const SearchBudget& budget) {
    require_total(rel, s, t);
    if (s == t) return identity_answer(rel.quantale());
    return meet_search(rel, s, t, budget, false);
}

bool validate_witness(const StepRelation& rel, const Term& s, const Term& t, const DistanceAnswer& a) {
    if (!a.value) return a.witness.empty();
    const Quantale& q = rel.quantale();
    StepOptions opts{subterm_pool({s, t})};
    Term cur = s;
    for (const auto& st : a.witness) {
        if (!(st.source == cur)) return false;
        if (!rel.replay(st, opts)) return false;
        cur = st.target;
    }
    return cur == t && total_weight(q, a.witness) == *a.value;
}

Tri reachability(const StepRelation& rel, const Term& s, const Term& t, const SearchBudget& budget) {
    auto a = convertibility_distance(rel, s, t, budget);
    if (a.value && !(*a.value == rel.quantale().bottom())) return Tri::Yes;
    if (a.kind == AnswerKind::Unreachable) return Tri::No;
    return Tri::Unknown;
}

Tri epsilon_reachability(const StepRelation& rel, const Term& s, const Term& t, const QValue& eps,
                         const SearchBudget& budget) {
    const Quantale& q = rel.quantale();
    SearchBudget b = budget;
    b.weight_cutoff = b.weight_cutoff ? q.meet(*b.weight_cutoff, eps) : eps;
    auto a = convertibility_distance(rel, s, t, b);
    if (a.value && q.leq(eps, *a.value)) return Tri::Yes;
    if (a.kind == AnswerKind::Unreachable || (a.kind == AnswerKind::Exact && a.value && !q.leq(eps, *a.value)))
        return Tri::No;
    return Tri::Unknown;
}

NormalizeResult normalize(const StepRelation& rel, const Term& t, Strategy strategy, const SearchBudget& budget) {
    const Quantale& q = rel.quantale();
    rel.system().signature().check(t);
    StepOptions opts{subterm_pool({t})};
    NormalizeResult out;
    if (strategy == Strategy::All) {
        Frontier f(rel, t, false, budget, opts);
        std::vector<Term> normals;
        bool capped = false;
        while (!f.empty()) {
            if (f.expanded() >= budget.max_expanded_terms) {
                capped = true;
                break;
            }
            f.advance([](const Term&) {}, [&](const Term& u, bool normal) {
                if (normal) normals.push_back(u);
            });
        }
        std::sort(normals.begin(), normals.end());
        for (const auto& n : normals) out.forms.emplace_back(n, f.find(n)->w);
        out.complete = !capped && !f.pruned_best();
        return out;
    }
    Term cur = t;
    QValue acc = q.unit();
    for (std::size_t i = 0; i < std::min(budget.max_expanded_terms, budget.max_depth); ++i) {
        auto steps = rel.forward(cur, opts);
        if (steps.empty()) {
            out.forms.emplace_back(cur, acc);
            out.complete = true;
            return out;
        }
        std::vector<Position> redexes;
        for (const auto& st : steps) redexes.push_back(st.position);
        auto prefix = [](const Position& a, const Position& b) {
            return a.size() < b.size() && std::equal(a.begin(), a.end(), b.begin());
        };
        std::optional<Position> chosen;
        for (const auto& p : redexes) {
            bool ok = std::none_of(redexes.begin(), redexes.end(), [&](const Position& o) {
                return strategy == Strategy::LeftmostInnermost ? prefix(p, o) : prefix(o, p);
            });
            if (ok && (!chosen || p < *chosen)) chosen = p;
        }
        const RewriteStep* pick = nullptr;
        for (const auto& st : steps) {
            if (st.position != *chosen) continue;
            if (!pick || (st.rule == pick->rule && q.lt(pick->weight, st.weight))) pick = &st;
        }
        acc = q.tensor(acc, pick->weight);
        out.path.push_back(*pick);
        cur = pick->target;
    }
    return out;
}

std::string answer_json(const StepRelation& rel, const DistanceAnswer& a, bool pretty) {
    const Quantale& q = rel.quantale();
    nlohmann::json j;
    j["kind"] = answer_kind_name(a.kind);
    j["value"] = a.value ? nlohmann::json(q.format(*a.value)) : nlohmann::json(nullptr);
    j["witness"] = nlohmann::json::array();
    for (const auto& st : a.witness) {
        nlohmann::json s;
        s["direction"] = st.backward ? "backward" : "forward";
        s["position"] = st.position;
        s["rule"] = st.rule;
        s["weight"] = q.format(st.weight);
        s["from"] = rel.system().print(st.source);
        s["to"] = rel.system().print(st.target);
        j["witness"].push_back(std::move(s));
    }
    if (!a.note.empty()) j["note"] = a.note;
    j["expanded"] = a.expanded;
    return j.dump(pretty ? 2 : -1);
}

}  // namespace qrw
