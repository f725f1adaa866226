#pragma once

#include "qrw/qtrs.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace qrw {

/// Change-of-base endomap. On the Lawvere family every sensitivity folds to a scalar ε ↦ c·ε.
class Sensitivity {
public:
    enum class Kind { Identity, ConstUnit, Scalar, Compose, Tensor };

    static Sensitivity identity();
    static Sensitivity const_unit();
    /// Scalars are only meaningful on the Lawvere family; c must be finite and non-negative.
    static Sensitivity scalar(Rational c);
    /// (outer ∘ inner)(ε) = outer(inner(ε)).
    static Sensitivity compose(const Quantale& q, const Sensitivity& outer, const Sensitivity& inner);
    static Sensitivity tensor(const Quantale& q, const Sensitivity& a, const Sensitivity& b);

    Kind kind() const { return kind_; }
    QValue apply(const Quantale& q, const QValue& v) const;
    /// Normal form on the Lawvere family.
    std::optional<Rational> as_scalar(const Quantale& q) const;
    std::string str(const Quantale& q) const;

    /// Exact on the Lawvere family, sampled elsewhere (`sampled` reports which).
    static bool equal(const Quantale& q, const Sensitivity& a, const Sensitivity& b, bool* sampled = nullptr);

private:
    Sensitivity fold(const Quantale& q) const;
    Kind kind_ = Kind::Identity;
    Rational c_ = 1;
    std::shared_ptr<const std::vector<Sensitivity>> kids_;
};

/// Grades of one symbol; scalar expressions may refer to the symbol's own indices by name.
struct SymbolGrades {
    std::vector<std::string> index_names;
    std::vector<std::variant<Sensitivity, IndexExpr>> args;
};

class GradedSignature {
public:
    void set(const std::string& symbol, SymbolGrades grades) { grades_[symbol] = std::move(grades); }
    const SymbolGrades* find(const std::string& symbol) const;
    const std::map<std::string, SymbolGrades>& all() const { return grades_; }
    /// Grade of argument i (0-based) of a concrete node; ungraded symbols default to 𝟏.
    Sensitivity grade(const Quantale& q, const Term& node, std::size_t i) const;

private:
    std::map<std::string, SymbolGrades> grades_;
};

class GradedSystem {
public:
    GradedSystem() = default;
    GradedSystem(RewriteSystem sys, GradedSignature grades);

    const RewriteSystem& system() const { return sys_; }
    const GradedSignature& grades() const { return grades_; }
    const Quantale& quantale() const { return sys_.quantale(); }

private:
    RewriteSystem sys_;
    GradedSignature grades_;
};

/// A term with a distinguished hole position.
struct Context {
    Term term;
    Position hole;
};

/// Composite grade along any valid position (the hole may hold any subterm).
Sensitivity path_degree(const GradedSystem& g, const Term& t, const Position& p);
/// Throws InvalidPosition unless p addresses a variable.
Sensitivity degree_at_position(const GradedSystem& g, const Term& t, const Position& p);
/// Tensor over the positions of x.
Sensitivity degree_of_variable(const GradedSystem& g, const Term& t, const std::string& x);
/// Structural recursion deg_x(f(t⃗)) = ⊗ φᵢ ∘ deg_x(tᵢ), kept independent of the positional version.
Sensitivity degree_of_variable_recursive(const GradedSystem& g, const Term& t, const std::string& x);
Sensitivity context_degree(const GradedSystem& g, const Context& c);

struct BalanceEntry {
    std::string rule;
    ParamEnv params;
    std::string variable;
    Sensitivity lhs;
    Sensitivity rhs;
    bool equal = false;
    bool sampled = false;
};

struct BalanceReport {
    bool balanced = true;
    std::vector<BalanceEntry> entries;
};

BalanceReport balanced_check(const GradedSystem& g);

std::vector<RewriteStep> graded_one_step(const GradedSystem& g, const Term& t, const StepOptions& opts = {});
std::vector<RewriteStep> graded_backward_step(const GradedSystem& g, const Term& t, const StepOptions& opts = {});

/// Best weight per reachable term among multi-step derivations with at most `width` contractions.
std::map<Term, QValue> multi_step(const GradedSystem& g, const Term& t, std::size_t width);

struct OrthogonalityReport {
    bool orthogonal = false;
    bool left_linear = false;
    std::vector<std::string> nonlinear_rules;
    std::vector<CriticalPeak> peaks;
};

OrthogonalityReport orthogonality_check(const GradedSystem& g);

struct DiamondViolation {
    Term source, left, right;
    QValue left_weight, right_weight;
    std::optional<QValue> best_valley;
};

struct DiamondReport {
    std::size_t seeds = 0;
    std::size_t peaks = 0;
    std::vector<DiamondViolation> violations;
};

/// Throws ConfigError unless the system is orthogonal.
DiamondReport multistep_diamond_probe(const GradedSystem& g, const Term& t, std::size_t depth,
                                      std::size_t width = 4);

struct SubstitutionSample {
    Term e;
    Substitution v;
};

struct SubstitutionReport {
    std::size_t checked = 0;
    std::vector<std::string> failures;
};

SubstitutionReport substitution_lemma_probe(const GradedSystem& g, const std::vector<SubstitutionSample>& samples,
                                            std::size_t width = 3);

}  // namespace qrw
