#include "qrw/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace qrw::dsl {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message, const std::string& source)
    : std::runtime_error((source.empty() ? "line " : source + ":") + std::to_string(line) + ":" +
                         std::to_string(column) + ": " + message),
      line_(line), column_(column), message_(message), source_(source) {}

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '\''; }
bool is_op_char(char c) {
    static const std::string ops = "+*.|!&~^<>=%$?@\\";
    return ops.find(c) != std::string::npos;
}

IndexExpr fold(IndexExpr e) {
    if (auto v = e.eval({})) return IndexExpr(*v);
    return e;
}

/// One line of input with a read position.
class Cursor {
public:
    Cursor(std::string_view text, std::size_t line) : s_(text), line_(line) {}

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, pos_ + 1, msg); }
    [[noreturn]] void fail_at(std::size_t pos, const std::string& msg) const { throw ParseError(line_, pos + 1, msg); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool at_end() {
        skip_ws();
        return pos_ >= s_.size();
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    char peek_raw() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    bool accept(std::string_view tok) {
        skip_ws();
        if (s_.substr(pos_, tok.size()) != tok) return false;
        pos_ += tok.size();
        return true;
    }
    void expect(std::string_view tok) {
        if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
    }
    bool peek_keyword(std::string_view kw) {
        skip_ws();
        if (s_.substr(pos_, kw.size()) != kw) return false;
        std::size_t end = pos_ + kw.size();
        return end >= s_.size() || !is_ident_char(s_[end]);
    }
    bool accept_keyword(std::string_view kw) {
        if (!peek_keyword(kw)) return false;
        pos_ += kw.size();
        return true;
    }
    std::string ident() {
        skip_ws();
        if (!is_ident_start(peek_raw())) fail("expected identifier");
        std::size_t b = pos_;
        while (pos_ < s_.size() && is_ident_char(s_[pos_])) ++pos_;
        return std::string(s_.substr(b, pos_ - b));
    }
    std::string word() {
        skip_ws();
        std::size_t b = pos_;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (b == pos_) fail("unexpected end of line");
        return std::string(s_.substr(b, pos_ - b));
    }
    std::string until(char stop) {
        skip_ws();
        std::size_t b = pos_;
        while (pos_ < s_.size() && s_[pos_] != stop) ++pos_;
        if (pos_ >= s_.size()) fail(std::string("expected '") + stop + "'");
        std::string out(s_.substr(b, pos_ - b));
        while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
        return out;
    }
    Rational number() {
        skip_ws();
        std::size_t b = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ < s_.size() && s_[pos_] == '.' && pos_ + 1 < s_.size() &&
            std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
        if (b == pos_) fail("expected number");
        auto r = parse_rational(s_.substr(b, pos_ - b));
        if (!r) fail_at(b, "bad number");
        return *r;
    }
    std::size_t pos() const { return pos_; }
    std::size_t line() const { return line_; }
    std::string_view rest() const { return s_.substr(pos_); }
    void advance(std::size_t n) { pos_ += n; }

    // index expressions: + - over * / over unary minus, abs() and parentheses

    IndexExpr expr() {
        IndexExpr e = product();
        for (;;) {
            skip_ws();
            char c = peek_raw();
            if (c != '+' && c != '-') return e;
            ++pos_;
            e = fold(IndexExpr::binary(c == '+' ? IndexExpr::Op::Add : IndexExpr::Op::Sub, e, product()));
        }
    }

private:
    IndexExpr product() {
        IndexExpr e = unary();
        for (;;) {
            skip_ws();
            char c = peek_raw();
            if (c != '*' && c != '/') return e;
            ++pos_;
            std::size_t at = pos_;
            IndexExpr rhs = unary();
            if (c == '/' && rhs.is_const() && rhs.value() == 0) fail_at(at, "division by zero");
            e = fold(IndexExpr::binary(c == '*' ? IndexExpr::Op::Mul : IndexExpr::Op::Div, e, rhs));
        }
    }
    IndexExpr unary() {
        if (accept("-")) return fold(IndexExpr::binary(IndexExpr::Op::Sub, Rational(0), unary()));
        return primary();
    }
    IndexExpr primary() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            IndexExpr e = expr();
            expect(")");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return IndexExpr(number());
        if (is_ident_start(c)) {
            std::string name = ident();
            if (name == "abs") {
                expect("(");
                IndexExpr e = expr();
                expect(")");
                return fold(IndexExpr::abs(e));
            }
            return IndexExpr::param(name);
        }
        fail("expected index expression");
    }

    std::string_view s_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

class TermParser {
public:
    TermParser(Cursor& c, const Signature& sig) : c_(c), sig_(sig) {}

    Term term() {
        Term t = operand();
        for (;;) {
            c_.skip_ws();
            if (!is_op_char(c_.peek_raw())) return t;
            const SymbolDecl* d = match_op();
            if (!d || !d->infix) return t;
            c_.advance(d->name.size());
            auto idx = indices(*d, false);
            t = Term::app(d->name, {t, operand()}, std::move(idx));
        }
    }

private:
    const SymbolDecl* match_op() {
        const SymbolDecl* best = nullptr;
        for (const auto& d : sig_.symbols())
            if (!d.name.empty() && is_op_char(d.name[0]) && c_.rest().substr(0, d.name.size()) == d.name &&
                (!best || d.name.size() > best->name.size()))
                best = &d;
        return best;
    }

    std::vector<IndexExpr> indices(const SymbolDecl& d, bool sugar) {
        std::vector<IndexExpr> out;
        std::size_t at = c_.pos();
        char next = c_.peek_raw();
        if (next == '_') {
            c_.advance(1);
            char c = c_.peek_raw();
            if (c == '{') {
                c_.advance(1);
                do out.push_back(c_.expr());
                while (c_.accept(","));
                c_.expect("}");
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                out.emplace_back(c_.number());
            } else if (is_ident_start(c)) {
                out.push_back(IndexExpr::param(c_.ident()));
            } else {
                c_.fail("expected index after '_'");
            }
        } else if (sugar && (std::isdigit(static_cast<unsigned char>(next)) || is_ident_start(next)) &&
                   d.index_count == 1) {
            if (std::isdigit(static_cast<unsigned char>(next))) out.emplace_back(c_.number());
            else out.push_back(IndexExpr::param(c_.ident()));
        }
        if (static_cast<int>(out.size()) != d.index_count)
            c_.fail_at(at, "symbol " + d.name + " takes " + std::to_string(d.index_count) + " indices, got " +
                               std::to_string(out.size()));
        return out;
    }

    std::vector<Term> arguments(const SymbolDecl& d, std::size_t at) {
        std::vector<Term> args;
        if (d.arity == 0) return args;
        if (!c_.accept("(")) c_.fail("expected '(' after " + d.name);
        do args.push_back(term());
        while (c_.accept(","));
        c_.expect(")");
        if (static_cast<int>(args.size()) != d.arity)
            c_.fail_at(at, "symbol " + d.name + " has arity " + std::to_string(d.arity) + ", got " +
                               std::to_string(args.size()) + " arguments");
        return args;
    }

    Term operand() {
        char c = c_.peek();
        std::size_t at = c_.pos();
        if (c == '(') {
            c_.advance(1);
            Term t = term();
            c_.expect(")");
            return t;
        }
        if (is_ident_start(c)) {
            std::string name = c_.ident();
            if (const SymbolDecl* d = sig_.find(name)) {
                auto idx = indices(*d, false);
                return Term::app(name, arguments(*d, at), std::move(idx));
            }
            char next = c_.peek_raw();
            if (next == '(' || next == '_' || !std::islower(static_cast<unsigned char>(name[0])))
                c_.fail_at(at, "unknown symbol " + name);
            return Term::var(name);
        }
        if (is_op_char(c)) {
            const SymbolDecl* d = match_op();
            if (!d) c_.fail("unknown operator");
            c_.advance(d->name.size());
            auto idx = indices(*d, true);
            if (d->arity == 1) return Term::app(d->name, {operand()}, std::move(idx));
            return Term::app(d->name, arguments(*d, at), std::move(idx));
        }
        if (c == '\0') c_.fail("expected term");
        c_.fail(std::string("unexpected '") + c + "'");
    }

    Cursor& c_;
    const Signature& sig_;
};

const std::map<std::string, SideCondition::Cmp>& comparisons() {
    static const std::map<std::string, SideCondition::Cmp> m{
        {"<=", SideCondition::Cmp::Le}, {">=", SideCondition::Cmp::Ge}, {"==", SideCondition::Cmp::Eq},
        {"!=", SideCondition::Cmp::Ne}, {"<", SideCondition::Cmp::Lt},  {">", SideCondition::Cmp::Gt},
    };
    return m;
}

SideCondition::Cmp comparison(Cursor& c) {
    for (const char* tok : {"<=", ">=", "==", "!=", "<", ">"})
        if (c.accept(tok)) return comparisons().at(tok);
    c.fail("expected comparison");
}

std::string comparison_text(SideCondition::Cmp cmp) {
    for (const auto& [k, v] : comparisons())
        if (v == cmp) return k;
    return "?";
}

std::vector<Rational> grid_values(Cursor& c) {
    std::vector<Rational> out;
    while (!c.at_end()) {
        std::size_t at = c.pos();
        std::string w = c.word();
        auto r = parse_rational(w);
        if (!r) c.fail_at(at, "bad grid value '" + w + "'");
        out.push_back(*r);
    }
    if (out.empty()) c.fail("empty grid");
    return out;
}

struct PendingRule {
    Rule rule;
    std::size_t line;
};

class FileParser {
public:
    SystemFile run(std::string_view text) {
        std::size_t line_no = 0;
        std::size_t begin = 0;
        while (begin <= text.size()) {
            std::size_t end = text.find('\n', begin);
            if (end == std::string_view::npos) end = text.size();
            std::string_view line = text.substr(begin, end - begin);
            ++line_no;
            if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            Cursor c(line, line_no);
            if (!c.at_end()) directive(c);
            begin = end + 1;
        }
        return finish();
    }

private:
    void directive(Cursor& c) {
        std::size_t at = c.pos();
        std::string kw = c.ident();
        if (kw == "system") {
            name_ = c.word();
        } else if (kw == "quantale") {
            if (!rules_.empty()) c.fail_at(at, "quantale must be declared before rules");
            std::size_t qat = c.pos();
            std::string q = c.word();
            try {
                q_ = &Quantale::by_name(q);
            } catch (const std::invalid_argument&) {
                c.fail_at(qat, "unknown quantale '" + q + "'");
            }
        } else if (kw == "grid") {
            c.skip_ws();
            if (is_ident_start(c.peek_raw())) {
                std::string param = c.ident();
                c.expect(":");
                if (grid_.per_param.count(param)) c.fail_at(at, "grid for " + param + " given twice");
                grid_.per_param[param] = grid_values(c);
            } else {
                if (!grid_.values.empty()) c.fail_at(at, "default grid given twice");
                grid_.values = grid_values(c);
            }
        } else if (kw == "symbol") {
            symbol(c);
        } else if (kw == "rule") {
            rule(c);
        } else {
            c.fail_at(at, "unknown directive '" + kw + "'");
        }
        if (!c.at_end()) c.fail("unexpected trailing input");
    }

    void symbol(Cursor& c) {
        c.skip_ws();
        std::size_t at = c.pos();
        std::string name;
        if (is_ident_start(c.peek_raw())) {
            name = c.ident();
        } else {
            while (is_op_char(c.peek_raw())) {
                name += c.peek_raw();
                c.advance(1);
            }
        }
        if (name.empty()) c.fail("expected symbol name");
        if (sig_.contains(name)) c.fail_at(at, "symbol " + name + " declared twice");
        c.expect("/");
        Rational ar = c.number();
        if (!is_integer(ar) || ar < 0 || ar > 64) c.fail("bad arity");
        SymbolDecl d{name, static_cast<int>(ar.convert_to<long>()), 0, false};
        std::vector<std::string> index_names;
        std::optional<std::vector<std::variant<Sensitivity, IndexExpr>>> grades;
        std::size_t grades_at = 0;
        while (!c.at_end()) {
            if (c.accept_keyword("infix")) {
                d.infix = true;
            } else if (c.accept_keyword("indices")) {
                if (!index_names.empty()) c.fail("indices given twice");
                do index_names.push_back(c.ident());
                while (c.accept(","));
            } else if (c.accept_keyword("grades")) {
                grades_at = c.pos();
                grades.emplace();
                c.expect("[");
                if (!c.accept("]")) {
                    do grades->push_back(grade(c));
                    while (c.accept(","));
                    c.expect("]");
                }
            } else {
                c.fail("expected infix, indices or grades");
            }
        }
        if (d.infix && d.arity != 2) c.fail_at(at, "infix symbol " + name + " must have arity 2");
        if (!is_ident_start(name[0]) && d.arity > 2) c.fail_at(at, "operator symbols have arity at most 2");
        d.index_count = static_cast<int>(index_names.size());
        if (grades) {
            if (static_cast<int>(grades->size()) != d.arity)
                c.fail_at(grades_at, "symbol " + name + " has arity " + std::to_string(d.arity) + " but " +
                                         std::to_string(grades->size()) + " grades");
            std::set<std::string> allowed(index_names.begin(), index_names.end());
            for (const auto& g : *grades)
                if (auto* e = std::get_if<IndexExpr>(&g)) {
                    std::set<std::string> ps;
                    e->collect_params(ps);
                    for (const auto& p : ps)
                        if (!allowed.count(p)) c.fail_at(grades_at, "grade refers to unknown index " + p);
                }
            grades_.set(name, {index_names, *grades});
        }
        sig_.add(d);
    }

    std::variant<Sensitivity, IndexExpr> grade(Cursor& c) {
        if (c.accept_keyword("id")) return Sensitivity::identity();
        if (c.accept_keyword("unit")) return Sensitivity::const_unit();
        std::size_t at = c.pos();
        IndexExpr e = c.expr();
        if (e.is_const()) {
            if (e.value() < 0) c.fail_at(at, "negative grade");
            return Sensitivity::scalar(e.value());
        }
        return e;
    }

    void rule(Cursor& c) {
        c.skip_ws();
        std::size_t at = c.pos();
        std::string id = c.until(':');
        if (id.empty() || id.find_first_of(" \t") != std::string::npos) c.fail_at(at, "bad rule id");
        for (const auto& r : rules_)
            if (r.rule.id == id) c.fail_at(at, "duplicate rule id " + id);
        c.expect(":");
        TermParser tp(c, sig_);
        Rule r;
        r.id = id;
        r.lhs = tp.term();
        c.expect("-[");
        c.skip_ws();
        if (c.accept("{")) {
            std::size_t wat = c.pos();
            IndexExpr e = c.expr();
            c.expect("}");
            if (e.is_const()) r.weight = literal(c, wat, to_string(e.value()));
            else r.weight = e;
        } else {
            std::size_t wat = c.pos();
            r.weight = literal(c, wat, c.until(']'));
        }
        c.expect("]->");
        r.rhs = tp.term();
        if (c.accept_keyword("where")) {
            do {
                SideCondition sc;
                sc.left = c.expr();
                sc.cmp = comparison(c);
                sc.right = c.expr();
                r.conditions.push_back(std::move(sc));
            } while (c.accept(","));
        }
        rules_.push_back({std::move(r), c.line()});
    }

    QValue literal(Cursor& c, std::size_t at, const std::string& text) {
        try {
            return q_->parse(text);
        } catch (const DomainError&) {
            c.fail_at(at, "bad weight '" + text + "' for quantale " + q_->name());
        }
    }

    SystemFile finish() {
        std::vector<Rule> rules;
        for (const auto& p : rules_) {
            rules.push_back(p.rule);
            try {
                RewriteSystem(*q_, sig_, rules, grid_, name_);
            } catch (const std::exception& e) {
                throw ParseError(p.line, 1, e.what());
            }
        }
        SystemFile out{RewriteSystem(*q_, sig_, rules, grid_, name_), std::nullopt};
        if (!grades_.all().empty()) out.graded = GradedSystem(out.system, grades_);
        return out;
    }

    std::string name_;
    const Quantale* q_ = &Quantale::get(QuantaleKind::Lawvere);
    ParamGrid grid_;
    Signature sig_;
    GradedSignature grades_;
    std::vector<PendingRule> rules_;
};

std::string grid_line(const std::vector<Rational>& values) {
    std::string out;
    for (const auto& v : values) out += " " + to_string(v);
    return out;
}

std::string emit_impl(const RewriteSystem& sys, const GradedSignature* grades) {
    const Quantale& q = sys.quantale();
    std::ostringstream out;
    if (!sys.name().empty()) out << "system " << sys.name() << "\n";
    out << "quantale " << q.name() << "\n";
    if (!sys.grid().values.empty()) out << "grid" << grid_line(sys.grid().values) << "\n";
    for (const auto& [p, vals] : sys.grid().per_param) out << "grid " << p << ":" << grid_line(vals) << "\n";
    out << "\n";
    for (const auto& d : sys.signature().symbols()) {
        out << "symbol " << d.name << "/" << d.arity;
        if (d.infix) out << " infix";
        const SymbolGrades* g = grades ? grades->find(d.name) : nullptr;
        std::vector<std::string> names;
        if (g && static_cast<int>(g->index_names.size()) == d.index_count) names = g->index_names;
        else
            for (int i = 0; i < d.index_count; ++i) names.push_back("i" + std::to_string(i + 1));
        for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : " indices ") << names[i];
        if (g) {
            out << " grades [";
            for (std::size_t i = 0; i < g->args.size(); ++i) {
                if (i) out << ", ";
                if (auto* e = std::get_if<IndexExpr>(&g->args[i])) {
                    out << e->str();
                    continue;
                }
                const auto& s = std::get<Sensitivity>(g->args[i]);
                switch (s.kind()) {
                case Sensitivity::Kind::Identity: out << "id"; break;
                case Sensitivity::Kind::ConstUnit: out << "unit"; break;
                default: {
                    auto c = s.as_scalar(Quantale::get(QuantaleKind::Lawvere));
                    if (!c) throw ConfigError("grade of " + d.name + " has no DSL form");
                    out << to_string(*c);
                }
                }
            }
            out << "]";
        }
        out << "\n";
    }
    out << "\n";
    for (const auto& r : sys.rules()) {
        out << "rule " << r.id << ": " << sys.print(r.lhs) << " -[";
        if (auto* v = std::get_if<QValue>(&r.weight)) out << q.format(*v);
        else out << "{" << std::get<IndexExpr>(r.weight).str() << "}";
        out << "]-> " << sys.print(r.rhs);
        for (std::size_t i = 0; i < r.conditions.size(); ++i) {
            const auto& sc = r.conditions[i];
            out << (i ? ", " : " where ") << sc.left.str() << " " << comparison_text(sc.cmp) << " " << sc.right.str();
        }
        out << "\n";
    }
    return out.str();
}

bool same_grade(const std::variant<Sensitivity, IndexExpr>& a, const std::variant<Sensitivity, IndexExpr>& b) {
    if (a.index() != b.index()) return false;
    if (auto* e = std::get_if<IndexExpr>(&a)) return *e == std::get<IndexExpr>(b);
    const auto& sa = std::get<Sensitivity>(a);
    const auto& sb = std::get<Sensitivity>(b);
    if (sa.kind() != sb.kind()) return false;
    const Quantale& l = Quantale::get(QuantaleKind::Lawvere);
    return sa.as_scalar(l) == sb.as_scalar(l);
}

}  // namespace

SystemFile parse_system(std::string_view text) { return FileParser().run(text); }

SystemFile load_system(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_system(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.column(), e.message(), path.string());
    }
}

Term parse_term(const Signature& sig, std::string_view text) {
    Cursor c(text, 1);
    TermParser tp(c, sig);
    Term t = tp.term();
    if (!c.at_end()) c.fail("unexpected trailing input");
    return t;
}

std::string emit(const RewriteSystem& sys) { return emit_impl(sys, nullptr); }
std::string emit(const GradedSystem& g) { return emit_impl(g.system(), &g.grades()); }

bool structurally_equal(const RewriteSystem& a, const RewriteSystem& b) {
    if (a.name() != b.name() || a.quantale().kind() != b.quantale().kind()) return false;
    if (a.grid().values != b.grid().values || a.grid().per_param != b.grid().per_param) return false;
    const auto& sa = a.signature().symbols();
    const auto& sb = b.signature().symbols();
    if (sa.size() != sb.size()) return false;
    for (std::size_t i = 0; i < sa.size(); ++i)
        if (sa[i].name != sb[i].name || sa[i].arity != sb[i].arity || sa[i].index_count != sb[i].index_count ||
            sa[i].infix != sb[i].infix)
            return false;
    if (a.rules().size() != b.rules().size()) return false;
    for (std::size_t i = 0; i < a.rules().size(); ++i) {
        const Rule& x = a.rules()[i];
        const Rule& y = b.rules()[i];
        if (x.id != y.id || !(x.lhs == y.lhs) || !(x.rhs == y.rhs) || x.weight != y.weight) return false;
        if (x.conditions.size() != y.conditions.size()) return false;
        for (std::size_t j = 0; j < x.conditions.size(); ++j) {
            const auto& p = x.conditions[j];
            const auto& r = y.conditions[j];
            if (p.cmp != r.cmp || !(p.left == r.left) || !(p.right == r.right)) return false;
        }
    }
    return true;
}

bool structurally_equal(const GradedSystem& a, const GradedSystem& b) {
    if (!structurally_equal(a.system(), b.system())) return false;
    const auto& ga = a.grades().all();
    const auto& gb = b.grades().all();
    if (ga.size() != gb.size()) return false;
    for (const auto& [sym, g] : ga) {
        auto it = gb.find(sym);
        if (it == gb.end() || g.index_names != it->second.index_names || g.args.size() != it->second.args.size())
            return false;
        for (std::size_t i = 0; i < g.args.size(); ++i)
            if (!same_grade(g.args[i], it->second.args[i])) return false;
    }
    return true;
}

}  // namespace qrw::dsl
