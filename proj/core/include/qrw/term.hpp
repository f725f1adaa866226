#pragma once

#include "qrw/rational.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrw {

class InvalidPosition : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

class IllFormedTerm : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

using ParamEnv = std::map<std::string, Rational>;

/// Index of an indexed symbol such as +_{1/2} or !_{n+m}. Concrete terms only hold constants.
class IndexExpr {
public:
    enum class Op { Const, Param, Add, Sub, Mul, Div, Abs };

    IndexExpr() = default;
    IndexExpr(Rational value) : op_(Op::Const), value_(std::move(value)) {}  // NOLINT implicit
    static IndexExpr param(std::string name);
    static IndexExpr binary(Op op, IndexExpr a, IndexExpr b);
    static IndexExpr abs(IndexExpr a);

    Op op() const { return op_; }
    bool is_const() const { return op_ == Op::Const; }
    bool is_param() const { return op_ == Op::Param; }
    const Rational& value() const { return value_; }
    const std::string& name() const { return name_; }
    const std::vector<IndexExpr>& operands() const;

    /// nullopt when a parameter is unbound or a division by zero occurs.
    std::optional<Rational> eval(const ParamEnv& env) const;
    /// Replaces bound parameters and folds constant subexpressions.
    IndexExpr substitute(const ParamEnv& env) const;
    void collect_params(std::set<std::string>& out) const;

    std::string str() const;
    std::size_t hash() const;
    friend bool operator==(const IndexExpr& a, const IndexExpr& b);
    friend bool operator<(const IndexExpr& a, const IndexExpr& b);

private:
    Op op_ = Op::Const;
    Rational value_ = 0;
    std::string name_;
    std::shared_ptr<const std::vector<IndexExpr>> operands_;
};

class Term;
using Position = std::vector<int>;
using Substitution = std::map<std::string, Term>;

/// Immutable first-order term: a variable or an (indexed) function symbol applied to arguments.
class Term {
public:
    Term() = default;
    static Term var(std::string name);
    static Term app(std::string name, std::vector<Term> args = {}, std::vector<IndexExpr> indices = {});

    bool valid() const { return node_ != nullptr; }
    bool is_var() const { return node_->is_var; }
    const std::string& name() const { return node_->name; }
    const std::vector<IndexExpr>& indices() const { return node_->indices; }
    const std::vector<Term>& args() const { return node_->args; }
    std::size_t arity() const { return node_->args.size(); }
    std::size_t size() const { return node_->size; }
    std::size_t depth() const { return node_->depth; }
    std::size_t hash() const { return node_->hash; }
    /// True when every index in the term is a constant.
    bool concrete() const { return node_->concrete; }
    bool ground() const { return node_->ground; }

    /// Prefix syntax, e.g. f_{1/2}(x,g(y)).
    std::string str() const;

    friend bool operator==(const Term& a, const Term& b);
    friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
    /// Canonical total order used for deterministic tie-breaking.
    friend bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }
    static int compare(const Term& a, const Term& b);

private:
    struct Node {
        bool is_var = false;
        std::string name;
        std::vector<IndexExpr> indices;
        std::vector<Term> args;
        std::size_t hash = 0;
        std::size_t size = 1;
        std::size_t depth = 1;
        bool concrete = true;
        bool ground = true;
    };
    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct TermHash {
    std::size_t operator()(const Term& t) const { return t.hash(); }
};

std::string position_str(const Position& p);

const Term& subterm_at(const Term& t, const Position& p);
Term replace_at(const Term& t, const Position& p, const Term& s);
/// Pre-order, λ first.
std::vector<Position> positions(const Term& t);
std::vector<Position> function_positions(const Term& t);
std::vector<Position> variable_positions(const Term& t, const std::string& x);
std::set<std::string> variables(const Term& t);
/// Variables in order of first occurrence.
std::vector<std::string> variable_list(const Term& t);
bool is_linear(const Term& t);
bool occurs(const std::string& x, const Term& t);

Term apply_substitution(const Term& t, const Substitution& s);
Term substitute_indices(const Term& t, const ParamEnv& env);
void collect_index_params(const Term& t, std::set<std::string>& out);
/// σ then ρ: x ↦ (xσ)ρ, plus the bindings of ρ for variables outside dom σ.
Substitution compose(const Substitution& sigma, const Substitution& rho);
std::string substitution_str(const Substitution& s);

/// Result of matching a pattern whose indices may be parameter expressions.
struct SchemaMatch {
    Substitution subst;
    ParamEnv params;
};

/// Matching that leaves compound index expressions unresolved: each deferred pair must evaluate equal.
struct PartialMatch {
    Substitution subst;
    ParamEnv params;
    std::vector<std::pair<IndexExpr, Rational>> deferred;
};

std::optional<PartialMatch> match_partial(const Term& pattern, const Term& subject);
/// Syntactic matching; index parameters bind, compound index expressions are checked after binding.
std::optional<SchemaMatch> match_schema(const Term& pattern, const Term& subject);
std::optional<Substitution> match(const Term& pattern, const Term& subject);
/// Robinson unification with occurs check; the result is idempotent.
std::optional<Substitution> unify(const Term& a, const Term& b);

/// Produces fresh variables by a monotone counter suffix, avoiding a given set.
class Renamer {
public:
    explicit Renamer(std::set<std::string> avoid = {}) : avoid_(std::move(avoid)) {}
    void avoid(const std::set<std::string>& names) { avoid_.insert(names.begin(), names.end()); }
    std::string fresh(const std::string& base);
    /// Renames all variables of the given terms consistently.
    std::vector<Term> rename(const std::vector<Term>& terms);

private:
    std::set<std::string> avoid_;
    std::size_t counter_ = 0;
};

std::vector<Term> rename_apart(const std::vector<Term>& terms, const std::set<std::string>& avoid);

/// Symbol declaration; index_count > 0 marks an indexed family.
struct SymbolDecl {
    std::string name;
    int arity = 0;
    int index_count = 0;
    bool infix = false;
};

class Signature {
public:
    void add(const SymbolDecl& d);
    const SymbolDecl* find(const std::string& name) const;
    bool contains(const std::string& name) const { return find(name) != nullptr; }
    const std::vector<SymbolDecl>& symbols() const { return decls_; }
    bool disjoint(const Signature& other) const;
    /// Throws IllFormedTerm naming the first offending node.
    void check(const Term& t) const;
    /// Infix-aware printing; round-trips through the DSL parser.
    std::string print(const Term& t) const;

private:
    void print_to(const Term& t, std::string& out, bool right_operand) const;
    std::vector<SymbolDecl> decls_;
    std::map<std::string, std::size_t> by_name_;
};

}  // namespace qrw
