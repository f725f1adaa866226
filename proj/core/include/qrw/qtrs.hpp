#pragma once

#include "qrw/quantale.hpp"
#include "qrw/term.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace qrw {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SideCondition {
    enum class Cmp { Lt, Le, Gt, Ge, Eq, Ne };
    IndexExpr left;
    Cmp cmp = Cmp::Lt;
    IndexExpr right;

    /// nullopt when a parameter is unbound.
    std::optional<bool> holds(const ParamEnv& env) const;
    std::string str() const;
};

/// Finite parameter grid for schema instantiation; per-parameter overrides fall back to the default.
struct ParamGrid {
    std::vector<Rational> values;
    std::map<std::string, std::vector<Rational>> per_param;

    bool empty() const { return values.empty() && per_param.empty(); }
    /// nullptr when the parameter has no grid.
    const std::vector<Rational>* values_for(const std::string& param) const;
};

/// A rule weight is a quantale literal or an index expression over the rule's parameters.
using WeightSpec = std::variant<QValue, IndexExpr>;

struct Rule {
    std::string id;
    Term lhs;
    Term rhs;
    WeightSpec weight;
    std::vector<SideCondition> conditions;
    /// Owning component when the system is a sum.
    std::string component;

    std::set<std::string> params() const;
    /// Parameters not bound by a bare index of the lhs.
    std::set<std::string> unbound_params() const;
    /// Variables of the rhs that do not occur in the lhs.
    std::set<std::string> fresh_variables() const;
    bool is_schema() const { return !params().empty(); }
    bool variable_lhs() const { return lhs.is_var(); }

    std::optional<QValue> weight_at(const Quantale& q, const ParamEnv& env) const;
    bool conditions_hold(const ParamEnv& env) const;
};

class RewriteSystem {
public:
    RewriteSystem() = default;
    /// Validates arities, weights and parameter usage; throws ConfigError or IllFormedTerm.
    RewriteSystem(const Quantale& q, Signature sig, std::vector<Rule> rules, ParamGrid grid = {},
                  std::string name = {});

    const Quantale& quantale() const { return *q_; }
    const Signature& signature() const { return sig_; }
    const std::vector<Rule>& rules() const { return rules_; }
    const ParamGrid& grid() const { return grid_; }
    const std::string& name() const { return name_; }
    const Rule* find_rule(const std::string& id) const;

    bool linear() const { return linear_; }
    bool left_linear() const { return left_linear_; }

    /// Components when built with sum().
    const std::vector<std::shared_ptr<const RewriteSystem>>& components() const { return parts_; }

    std::string print(const Term& t) const { return sig_.print(t); }

private:
    friend RewriteSystem sum(const RewriteSystem&, const RewriteSystem&);
    const Quantale* q_ = &Quantale::get(QuantaleKind::Lawvere);
    Signature sig_;
    std::vector<Rule> rules_;
    ParamGrid grid_;
    std::string name_;
    bool linear_ = true;
    bool left_linear_ = true;
    std::vector<std::shared_ptr<const RewriteSystem>> parts_;
};

struct RewriteStep {
    Term source;
    Term target;
    QValue weight;
    Position position;
    std::string rule;
    Substitution subst;
    ParamEnv params;
    /// Set for steps taken against the rule orientation (convertibility).
    bool backward = false;
};

/// Terms used to instantiate rhs variables absent from the lhs; empty means "fresh variable".
struct StepOptions {
    std::vector<Term> pool;
};

std::vector<Term> subterm_pool(const std::vector<Term>& terms);

std::vector<RewriteStep> one_step(const RewriteSystem& sys, const Term& t, const StepOptions& opts = {});
/// Steps u → t read backwards: each result has source = t and target = u.
std::vector<RewriteStep> backward_step(const RewriteSystem& sys, const Term& t, const StepOptions& opts = {});
/// Re-checks the structural equations of a step against the system.
bool validate_step(const RewriteSystem& sys, const RewriteStep& step);

struct CriticalPeak {
    Term source;
    Term left;
    QValue left_weight;
    Term right;
    QValue right_weight;
    Position position;
    /// Rule applied at `position` (inner) and at the root (outer).
    std::string inner_rule;
    std::string outer_rule;
    ParamEnv inner_params;
    ParamEnv outer_params;
};

struct RuleInstance {
    Rule rule;
    ParamEnv params;
};

/// Rules instantiated over the grid; rules without parameters are returned unchanged.
/// Throws ConfigError when a parameter has no grid.
std::vector<RuleInstance> instantiate_rules(const RewriteSystem& sys);
std::vector<CriticalPeak> critical_pairs(const RewriteSystem& sys);
std::vector<CriticalPeak> cross_critical_pairs(const RewriteSystem& a, const RewriteSystem& b);

/// Best-weight forward reachability with parent links, bounded by depth, size and weight.
struct Reachable {
    struct Entry {
        QValue weight;
        std::size_t depth = 0;
        std::optional<RewriteStep> via;
    };
    std::unordered_map<Term, Entry, TermHash> nodes;
    bool truncated = false;

    /// Steps from the start term to `t`, in order.
    std::vector<RewriteStep> path_to(const Term& t) const;
};

struct ExploreLimits {
    std::size_t max_depth = 6;
    std::size_t max_nodes = 200000;
    std::optional<QValue> cutoff;
};

/// Called on every settled term; returning true ends the exploration early.
using SettleHook = std::function<bool(const Term&, const QValue&)>;

Reachable explore(const RewriteSystem& sys, const Term& start, const ExploreLimits& limits,
                  const StepOptions& opts = {}, const SettleHook& stop = nullptr);

struct JoinVerdict {
    bool joinable = false;
    std::optional<QValue> best_valley;
    std::optional<Term> meet;
    std::vector<RewriteStep> left_path;
    std::vector<RewriteStep> right_path;
};

JoinVerdict join_check(const RewriteSystem& sys, const CriticalPeak& peak, std::size_t depth_budget);

struct StrongClosureVerdict {
    bool holds = false;
    JoinVerdict first;   // left →⁼ u *← right
    JoinVerdict second;  // left →* v ⁼← right
};

StrongClosureVerdict strongly_closed_check(const RewriteSystem& sys, const CriticalPeak& peak,
                                           std::size_t depth_budget);

/// Union of disjoint systems; throws ConfigError on a shared symbol name.
RewriteSystem sum(const RewriteSystem& a, const RewriteSystem& b);

enum class SnVerdict { NotTerminating, TerminatingOnExplored, Inconclusive };

struct SnProbe {
    SnVerdict verdict = SnVerdict::Inconclusive;
    std::size_t explored = 0;
    std::vector<Term> cycle;
};

SnProbe sn_probe(const RewriteSystem& sys, const std::vector<Term>& seeds, std::size_t max_nodes = 20000);

enum class Certificate { CriticalPairsAndSN, StrongClosure, HindleyRosen, Inconclusive };
std::string certificate_label(Certificate c);

struct PeakReport {
    CriticalPeak peak;
    std::optional<JoinVerdict> join;
    std::optional<StrongClosureVerdict> strong;
};

struct ConfluenceOptions {
    std::vector<Term> seeds;
    std::size_t depth_budget = 6;
    std::size_t sn_budget = 20000;
};

struct ConfluenceReport {
    Certificate certificate = Certificate::Inconclusive;
    bool linear = false;
    bool left_linear = false;
    bool linearity_relaxed = false;
    SnProbe sn;
    std::vector<PeakReport> peaks;
    bool all_joinable = false;
    bool all_strongly_closed = false;
    std::size_t cross_peaks = 0;
    std::vector<std::pair<std::string, Certificate>> components;
    std::vector<std::string> notes;
};

ConfluenceReport confluence_report(const RewriteSystem& sys, const ConfluenceOptions& opts = {});

}  // namespace qrw
