#include "qrw/term.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace qrw {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t hash_string(const std::string& s) { return std::hash<std::string>()(s); }

}  // namespace

// ---- IndexExpr -------------------------------------------------------------

IndexExpr IndexExpr::param(std::string name) {
    IndexExpr e;
    e.op_ = Op::Param;
    e.name_ = std::move(name);
    return e;
}

IndexExpr IndexExpr::binary(Op op, IndexExpr a, IndexExpr b) {
    IndexExpr e;
    e.op_ = op;
    e.operands_ = std::make_shared<const std::vector<IndexExpr>>(std::vector<IndexExpr>{std::move(a), std::move(b)});
    return e;
}

IndexExpr IndexExpr::abs(IndexExpr a) {
    IndexExpr e;
    e.op_ = Op::Abs;
    e.operands_ = std::make_shared<const std::vector<IndexExpr>>(std::vector<IndexExpr>{std::move(a)});
    return e;
}

const std::vector<IndexExpr>& IndexExpr::operands() const {
    static const std::vector<IndexExpr> none;
    return operands_ ? *operands_ : none;
}

std::optional<Rational> IndexExpr::eval(const ParamEnv& env) const {
    switch (op_) {
    case Op::Const:
        return value_;
    case Op::Param: {
        auto it = env.find(name_);
        if (it == env.end()) return std::nullopt;
        return it->second;
    }
    case Op::Abs: {
        auto a = operands()[0].eval(env);
        if (!a) return std::nullopt;
        return *a < 0 ? Rational(-*a) : *a;
    }
    default:
        break;
    }
    auto a = operands()[0].eval(env);
    auto b = operands()[1].eval(env);
    if (!a || !b) return std::nullopt;
    switch (op_) {
    case Op::Add: return Rational(*a + *b);
    case Op::Sub: return Rational(*a - *b);
    case Op::Mul: return Rational(*a * *b);
    case Op::Div:
        if (*b == 0) return std::nullopt;
        return Rational(*a / *b);
    default: return std::nullopt;
    }
}

IndexExpr IndexExpr::substitute(const ParamEnv& env) const {
    if (op_ == Op::Const) return *this;
    if (auto v = eval(env)) return IndexExpr(*v);
    if (op_ == Op::Param) return *this;
    IndexExpr e = *this;
    std::vector<IndexExpr> ops;
    for (const auto& o : operands()) ops.push_back(o.substitute(env));
    e.operands_ = std::make_shared<const std::vector<IndexExpr>>(std::move(ops));
    return e;
}

void IndexExpr::collect_params(std::set<std::string>& out) const {
    if (op_ == Op::Param) out.insert(name_);
    for (const auto& o : operands()) o.collect_params(out);
}

std::string IndexExpr::str() const {
    auto wrap = [](const IndexExpr& e) {
        bool atomic = e.op_ == Op::Const || e.op_ == Op::Param || e.op_ == Op::Abs;
        if (e.op_ == Op::Const && (e.value_ < 0 || !is_integer(e.value_))) atomic = false;
        return atomic ? e.str() : "(" + e.str() + ")";
    };
    switch (op_) {
    case Op::Const: return to_string(value_);
    case Op::Param: return name_;
    case Op::Abs: return "abs(" + operands()[0].str() + ")";
    case Op::Add: return wrap(operands()[0]) + "+" + wrap(operands()[1]);
    case Op::Sub: return wrap(operands()[0]) + "-" + wrap(operands()[1]);
    case Op::Mul: return wrap(operands()[0]) + "*" + wrap(operands()[1]);
    case Op::Div: return wrap(operands()[0]) + "/" + wrap(operands()[1]);
    }
    return {};
}

std::size_t IndexExpr::hash() const {
    std::size_t h = static_cast<std::size_t>(op_);
    if (op_ == Op::Const) return mix(h, hash_rational(value_));
    if (op_ == Op::Param) return mix(h, hash_string(name_));
    for (const auto& o : operands()) h = mix(h, o.hash());
    return h;
}

bool operator==(const IndexExpr& a, const IndexExpr& b) {
    if (a.op_ != b.op_) return false;
    if (a.op_ == IndexExpr::Op::Const) return a.value_ == b.value_;
    if (a.op_ == IndexExpr::Op::Param) return a.name_ == b.name_;
    return a.operands() == b.operands();
}

bool operator<(const IndexExpr& a, const IndexExpr& b) {
    if (a.op_ != b.op_) return a.op_ < b.op_;
    if (a.op_ == IndexExpr::Op::Const) return a.value_ < b.value_;
    if (a.op_ == IndexExpr::Op::Param) return a.name_ < b.name_;
    return std::lexicographical_compare(a.operands().begin(), a.operands().end(), b.operands().begin(),
                                        b.operands().end());
}

// ---- Term ------------------------------------------------------------------

Term Term::var(std::string name) {
    auto n = std::make_shared<Node>();
    n->is_var = true;
    n->name = std::move(name);
    n->hash = mix(0x51ed27ULL, hash_string(n->name));
    n->ground = false;
    return Term(std::move(n));
}

Term Term::app(std::string name, std::vector<Term> args, std::vector<IndexExpr> indices) {
    auto n = std::make_shared<Node>();
    n->name = std::move(name);
    std::size_t h = mix(0x3c6ef372ULL, hash_string(n->name));
    for (const auto& i : indices) {
        h = mix(h, i.hash());
        if (!i.is_const()) n->concrete = false;
    }
    for (const auto& a : args) {
        h = mix(h, a.hash());
        n->size += a.size();
        n->depth = std::max(n->depth, a.depth() + 1);
        n->concrete = n->concrete && a.concrete();
        n->ground = n->ground && a.ground();
    }
    n->hash = h;
    n->indices = std::move(indices);
    n->args = std::move(args);
    return Term(std::move(n));
}

bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash() || a.size() != b.size()) return false;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    return x.is_var == y.is_var && x.name == y.name && x.indices == y.indices && x.args == y.args;
}

int Term::compare(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return 0;
    if (a.is_var() != b.is_var()) return a.is_var() ? -1 : 1;
    if (int c = a.name().compare(b.name()); c != 0) return c < 0 ? -1 : 1;
    if (a.indices() != b.indices()) return a.indices() < b.indices() ? -1 : 1;
    if (a.arity() != b.arity()) return a.arity() < b.arity() ? -1 : 1;
    for (std::size_t i = 0; i < a.arity(); ++i)
        if (int c = compare(a.args()[i], b.args()[i]); c != 0) return c;
    return 0;
}

std::string Term::str() const {
    if (is_var()) return name();
    std::string s = name();
    if (!indices().empty()) {
        s += "_{";
        for (std::size_t i = 0; i < indices().size(); ++i) {
            if (i) s += ",";
            s += indices()[i].str();
        }
        s += "}";
    }
    if (!args().empty()) {
        s += "(";
        for (std::size_t i = 0; i < args().size(); ++i) {
            if (i) s += ",";
            s += args()[i].str();
        }
        s += ")";
    }
    return s;
}

// ---- positions -------------------------------------------------------------

std::string position_str(const Position& p) {
    if (p.empty()) return "λ";
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ".";
        s += std::to_string(p[i]);
    }
    return s;
}

const Term& subterm_at(const Term& t, const Position& p) {
    const Term* cur = &t;
    for (int i : p) {
        if (cur->is_var() || i < 1 || static_cast<std::size_t>(i) > cur->arity())
            throw InvalidPosition("position " + position_str(p) + " is not valid in " + t.str());
        cur = &cur->args()[static_cast<std::size_t>(i - 1)];
    }
    return *cur;
}

namespace {

Term replace_rec(const Term& t, const Position& p, std::size_t k, const Term& s) {
    if (k == p.size()) return s;
    int i = p[k];
    if (t.is_var() || i < 1 || static_cast<std::size_t>(i) > t.arity())
        throw InvalidPosition("position " + position_str(p) + " is not valid");
    std::vector<Term> args = t.args();
    args[static_cast<std::size_t>(i - 1)] = replace_rec(args[static_cast<std::size_t>(i - 1)], p, k + 1, s);
    return Term::app(t.name(), std::move(args), t.indices());
}

void positions_rec(const Term& t, Position& cur, std::vector<Position>& out, bool functions_only) {
    if (!functions_only || !t.is_var()) out.push_back(cur);
    if (t.is_var()) return;
    for (std::size_t i = 0; i < t.arity(); ++i) {
        cur.push_back(static_cast<int>(i + 1));
        positions_rec(t.args()[i], cur, out, functions_only);
        cur.pop_back();
    }
}

void variables_rec(const Term& t, std::vector<std::string>& out, std::set<std::string>& seen) {
    if (t.ground()) return;
    if (t.is_var()) {
        if (seen.insert(t.name()).second) out.push_back(t.name());
        return;
    }
    for (const auto& a : t.args()) variables_rec(a, out, seen);
}

void count_vars(const Term& t, std::map<std::string, int>& counts) {
    if (t.ground()) return;
    if (t.is_var()) {
        ++counts[t.name()];
        return;
    }
    for (const auto& a : t.args()) count_vars(a, counts);
}

}  // namespace

Term replace_at(const Term& t, const Position& p, const Term& s) {
    return replace_rec(t, p, 0, s);
}

std::vector<Position> positions(const Term& t) {
    std::vector<Position> out;
    Position cur;
    positions_rec(t, cur, out, false);
    return out;
}

std::vector<Position> function_positions(const Term& t) {
    std::vector<Position> out;
    Position cur;
    positions_rec(t, cur, out, true);
    return out;
}

std::vector<Position> variable_positions(const Term& t, const std::string& x) {
    std::vector<Position> out;
    for (auto& p : positions(t)) {
        const Term& s = subterm_at(t, p);
        if (s.is_var() && s.name() == x) out.push_back(p);
    }
    return out;
}

std::set<std::string> variables(const Term& t) {
    auto list = variable_list(t);
    return {list.begin(), list.end()};
}

std::vector<std::string> variable_list(const Term& t) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    variables_rec(t, out, seen);
    return out;
}

bool is_linear(const Term& t) {
    std::map<std::string, int> counts;
    count_vars(t, counts);
    return std::all_of(counts.begin(), counts.end(), [](const auto& kv) { return kv.second == 1; });
}

bool occurs(const std::string& x, const Term& t) {
    if (t.ground()) return false;
    if (t.is_var()) return t.name() == x;
    return std::any_of(t.args().begin(), t.args().end(), [&](const Term& a) { return occurs(x, a); });
}

// ---- substitution ----------------------------------------------------------

Term apply_substitution(const Term& t, const Substitution& s) {
    if (t.ground() || s.empty()) return t;
    if (t.is_var()) {
        auto it = s.find(t.name());
        return it == s.end() ? t : it->second;
    }
    std::vector<Term> args;
    args.reserve(t.arity());
    bool changed = false;
    for (const auto& a : t.args()) {
        args.push_back(apply_substitution(a, s));
        changed = changed || !(args.back() == a);
    }
    if (!changed) return t;
    return Term::app(t.name(), std::move(args), t.indices());
}

Term substitute_indices(const Term& t, const ParamEnv& env) {
    if (t.is_var() || (t.concrete() && t.ground() && t.indices().empty() && t.arity() == 0)) return t;
    if (t.concrete()) return t;
    std::vector<IndexExpr> idx;
    for (const auto& i : t.indices()) idx.push_back(i.substitute(env));
    std::vector<Term> args;
    for (const auto& a : t.args()) args.push_back(substitute_indices(a, env));
    return Term::app(t.name(), std::move(args), std::move(idx));
}

void collect_index_params(const Term& t, std::set<std::string>& out) {
    if (t.is_var() || t.concrete()) return;
    for (const auto& i : t.indices()) i.collect_params(out);
    for (const auto& a : t.args()) collect_index_params(a, out);
}

Substitution compose(const Substitution& sigma, const Substitution& rho) {
    Substitution out;
    for (const auto& [x, t] : sigma) {
        Term image = apply_substitution(t, rho);
        if (!(image.is_var() && image.name() == x)) out.emplace(x, std::move(image));
    }
    for (const auto& [x, t] : rho)
        if (!sigma.count(x) && !(t.is_var() && t.name() == x)) out.emplace(x, t);
    return out;
}

std::string substitution_str(const Substitution& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& [x, t] : s) {
        if (!first) out += ", ";
        first = false;
        out += x + "↦" + t.str();
    }
    return out + "}";
}

// ---- matching --------------------------------------------------------------

namespace {

bool match_rec(const Term& p, const Term& s, PartialMatch& m) {
    if (p.is_var()) {
        auto [it, inserted] = m.subst.emplace(p.name(), s);
        return inserted || it->second == s;
    }
    if (s.is_var() || p.name() != s.name() || p.arity() != s.arity() ||
        p.indices().size() != s.indices().size())
        return false;
    for (std::size_t i = 0; i < p.indices().size(); ++i) {
        const IndexExpr& pi = p.indices()[i];
        const IndexExpr& si = s.indices()[i];
        if (pi.is_const() || !si.is_const()) {
            if (!(pi == si)) return false;
        } else if (pi.is_param()) {
            auto [it, inserted] = m.params.emplace(pi.name(), si.value());
            if (!inserted && it->second != si.value()) return false;
        } else {
            m.deferred.emplace_back(pi, si.value());
        }
    }
    for (std::size_t i = 0; i < p.arity(); ++i)
        if (!match_rec(p.args()[i], s.args()[i], m)) return false;
    return true;
}

}  // namespace

std::optional<PartialMatch> match_partial(const Term& pattern, const Term& subject) {
    PartialMatch m;
    if (!match_rec(pattern, subject, m)) return std::nullopt;
    return m;
}

std::optional<SchemaMatch> match_schema(const Term& pattern, const Term& subject) {
    auto m = match_partial(pattern, subject);
    if (!m) return std::nullopt;
    for (const auto& [e, v] : m->deferred) {
        auto got = e.eval(m->params);
        if (!got || *got != v) return std::nullopt;
    }
    return SchemaMatch{std::move(m->subst), std::move(m->params)};
}

std::optional<Substitution> match(const Term& pattern, const Term& subject) {
    auto m = match_schema(pattern, subject);
    if (!m) return std::nullopt;
    return std::move(m->subst);
}

// ---- unification -----------------------------------------------------------

namespace {

Term walk(const Term& t, const Substitution& s) {
    Term cur = t;
    while (cur.is_var()) {
        auto it = s.find(cur.name());
        if (it == s.end()) break;
        cur = it->second;
    }
    return cur;
}

bool occurs_walk(const std::string& x, const Term& t, const Substitution& s) {
    Term w = walk(t, s);
    if (w.is_var()) return w.name() == x;
    return std::any_of(w.args().begin(), w.args().end(), [&](const Term& a) { return occurs_walk(x, a, s); });
}

Term resolve(const Term& t, const Substitution& s) {
    Term w = walk(t, s);
    if (w.is_var() || w.ground()) return w;
    std::vector<Term> args;
    for (const auto& a : w.args()) args.push_back(resolve(a, s));
    return Term::app(w.name(), std::move(args), w.indices());
}

}  // namespace

std::optional<Substitution> unify(const Term& a, const Term& b) {
    Substitution s;
    std::vector<std::pair<Term, Term>> work{{a, b}};
    while (!work.empty()) {
        auto [x, y] = work.back();
        work.pop_back();
        x = walk(x, s);
        y = walk(y, s);
        if (x == y) continue;
        if (x.is_var() || y.is_var()) {
            if (!x.is_var()) std::swap(x, y);
            if (occurs_walk(x.name(), y, s)) return std::nullopt;
            s.emplace(x.name(), y);
            continue;
        }
        if (x.name() != y.name() || x.arity() != y.arity() || x.indices() != y.indices()) return std::nullopt;
        for (std::size_t i = 0; i < x.arity(); ++i) work.emplace_back(x.args()[i], y.args()[i]);
    }
    Substitution out;
    for (const auto& [v, t] : s) out.emplace(v, resolve(t, s));
    return out;
}

// ---- renaming --------------------------------------------------------------

std::string Renamer::fresh(const std::string& base) {
    std::string stem = base;
    while (!stem.empty() && std::isdigit(static_cast<unsigned char>(stem.back()))) stem.pop_back();
    if (stem.empty()) stem = "v";
    for (;;) {
        std::string name = stem + std::to_string(counter_++);
        if (avoid_.insert(name).second) return name;
    }
}

std::vector<Term> Renamer::rename(const std::vector<Term>& terms) {
    Substitution s;
    for (const auto& t : terms)
        for (const auto& x : variable_list(t))
            if (!s.count(x)) s.emplace(x, Term::var(fresh(x)));
    std::vector<Term> out;
    for (const auto& t : terms) out.push_back(apply_substitution(t, s));
    return out;
}

std::vector<Term> rename_apart(const std::vector<Term>& terms, const std::set<std::string>& avoid) {
    Renamer r(avoid);
    for (const auto& t : terms) r.avoid(variables(t));
    return r.rename(terms);
}

// ---- signature -------------------------------------------------------------

void Signature::add(const SymbolDecl& d) {
    if (auto it = by_name_.find(d.name); it != by_name_.end()) {
        const auto& old = decls_[it->second];
        if (old.arity != d.arity || old.index_count != d.index_count)
            throw IllFormedTerm("symbol " + d.name + " redeclared with a different arity");
        return;
    }
    by_name_.emplace(d.name, decls_.size());
    decls_.push_back(d);
}

const SymbolDecl* Signature::find(const std::string& name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? nullptr : &decls_[it->second];
}

bool Signature::disjoint(const Signature& other) const {
    return std::none_of(decls_.begin(), decls_.end(), [&](const SymbolDecl& d) { return other.contains(d.name); });
}

void Signature::check(const Term& t) const {
    if (t.is_var()) return;
    const SymbolDecl* d = find(t.name());
    if (!d) throw IllFormedTerm("unknown symbol " + t.name());
    if (static_cast<std::size_t>(d->arity) != t.arity())
        throw IllFormedTerm("symbol " + t.name() + " expects " + std::to_string(d->arity) + " arguments, got " +
                            std::to_string(t.arity()));
    if (static_cast<std::size_t>(d->index_count) != t.indices().size())
        throw IllFormedTerm("symbol " + t.name() + " expects " + std::to_string(d->index_count) + " indices");
    for (const auto& a : t.args()) check(a);
}

std::string Signature::print(const Term& t) const {
    std::string out;
    print_to(t, out, false);
    return out;
}

void Signature::print_to(const Term& t, std::string& out, bool right_operand) const {
    if (t.is_var()) {
        out += t.name();
        return;
    }
    std::string head = t.name();
    if (!t.indices().empty()) {
        head += "_{";
        for (std::size_t i = 0; i < t.indices().size(); ++i) {
            if (i) head += ",";
            head += t.indices()[i].str();
        }
        head += "}";
    }
    const SymbolDecl* d = find(t.name());
    if (d && d->infix && t.arity() == 2) {
        if (right_operand) out += "(";
        print_to(t.args()[0], out, false);
        out += " " + head + " ";
        print_to(t.args()[1], out, true);
        if (right_operand) out += ")";
        return;
    }
    out += head;
    if (t.arity() == 0) return;
    out += "(";
    for (std::size_t i = 0; i < t.arity(); ++i) {
        if (i) out += ", ";
        print_to(t.args()[i], out, false);
    }
    out += ")";
}

}  // namespace qrw
