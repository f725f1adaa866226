#pragma once

#include "qrw/graded.hpp"
#include "qrw/qtrs.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qrw {

struct SearchBudget {
    std::size_t max_expanded_terms = 200000;
    std::size_t max_depth = 64;
    /// Branches whose accumulated weight is quantale-below the cutoff are dropped.
    std::optional<QValue> weight_cutoff;
    /// 0 disables the bound; pruning by size counts against exactness like depth pruning.
    std::size_t max_term_size = 0;
};

enum class AnswerKind { Exact, UpperBoundOnly, Unreachable, BudgetExhausted };
std::string answer_kind_name(AnswerKind k);

struct DistanceAnswer {
    AnswerKind kind = AnswerKind::BudgetExhausted;
    std::optional<QValue> value;
    /// Steps from s to t; backward steps run against the rule orientation.
    std::vector<RewriteStep> witness;
    std::size_t expanded = 0;
    std::string note;
};

/// Forward and backward one-step relation of a plain or graded system.
class StepRelation {
public:
    StepRelation(const RewriteSystem& sys) : sys_(&sys) {}  // NOLINT implicit
    StepRelation(const GradedSystem& g) : sys_(&g.system()), graded_(&g) {}  // NOLINT implicit

    const Quantale& quantale() const { return sys_->quantale(); }
    const RewriteSystem& system() const { return *sys_; }
    std::vector<RewriteStep> forward(const Term& t, const StepOptions& opts) const;
    std::vector<RewriteStep> backward(const Term& t, const StepOptions& opts) const;
    /// Replays a step through the one-step relation.
    bool replay(const RewriteStep& step, const StepOptions& opts) const;

private:
    const RewriteSystem* sys_;
    const GradedSystem* graded_ = nullptr;
};

/// Checks that a witness chains from s to t, replays step by step and has the claimed total.
bool validate_witness(const StepRelation& rel, const Term& s, const Term& t, const DistanceAnswer& a);

DistanceAnswer reduction_distance(const StepRelation& rel, const Term& s, const Term& t,
                                  const SearchBudget& budget = {});

struct ConvertOptions {
    /// Set only when the system carries a confluence certificate; conversions then reduce to valleys.
    bool church_rosser = false;
};

DistanceAnswer convertibility_distance(const StepRelation& rel, const Term& s, const Term& t,
                                       const SearchBudget& budget = {}, const ConvertOptions& opts = {});
DistanceAnswer valley_distance(const StepRelation& rel, const Term& s, const Term& t,
                               const SearchBudget& budget = {});

enum class Tri { Yes, No, Unknown };
std::string tri_name(Tri t);

Tri reachability(const StepRelation& rel, const Term& s, const Term& t, const SearchBudget& budget = {});
Tri epsilon_reachability(const StepRelation& rel, const Term& s, const Term& t, const QValue& eps,
                         const SearchBudget& budget = {});

enum class Strategy { LeftmostInnermost, LeftmostOutermost, All };

struct NormalizeResult {
    std::vector<std::pair<Term, QValue>> forms;
    /// False when the budget ran out before every branch reached a normal form.
    bool complete = false;
    std::vector<RewriteStep> path;
};

NormalizeResult normalize(const StepRelation& rel, const Term& t, Strategy strategy, const SearchBudget& budget = {});

/// {kind, value, witness: [{direction, position, rule, weight}]}
std::string answer_json(const StepRelation& rel, const DistanceAnswer& a, bool pretty = false);

}  // namespace qrw
