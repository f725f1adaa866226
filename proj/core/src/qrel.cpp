#include "qrw/qrel.hpp"

#include <sstream>

namespace qrw {

FiniteQRel::FiniteQRel(const Quantale& q, std::vector<std::string> carrier) : q_(&q) {
    for (auto& n : carrier) add_node(n);
}

std::size_t FiniteQRel::add_node(const std::string& name) {
    auto [it, inserted] = index_.emplace(name, nodes_.size());
    if (inserted) nodes_.push_back(name);
    return it->second;
}

std::size_t FiniteQRel::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::out_of_range("node '" + name + "' not in carrier");
    return it->second;
}

void FiniteQRel::set(const std::string& a, const std::string& b, const QValue& v) {
    std::size_t i = add_node(a);
    std::size_t j = add_node(b);
    set(i, j, v);
}

void FiniteQRel::set(std::size_t a, std::size_t b, const QValue& v) {
    q_->check(v);
    if (v == q_->bottom())
        edges_.erase({a, b});
    else
        edges_[{a, b}] = v;
}

QValue FiniteQRel::get(std::size_t a, std::size_t b) const {
    auto it = edges_.find({a, b});
    return it == edges_.end() ? q_->bottom() : it->second;
}

QValue FiniteQRel::get(const std::string& a, const std::string& b) const {
    auto ia = index_.find(a);
    auto ib = index_.find(b);
    if (ia == index_.end() || ib == index_.end()) return q_->bottom();
    return get(ia->second, ib->second);
}

bool FiniteQRel::leq(const FiniteQRel& other) const {
    if (q_ != other.q_) throw DomainError("relations over different quantales");
    for (const auto& [e, v] : edges_)
        if (!q_->leq(v, other.get(nodes_[e.first], nodes_[e.second]))) return false;
    return true;
}

std::string FiniteQRel::to_text() const {
    std::ostringstream out;
    out << "quantale " << q_->name() << "\n";
    for (const auto& n : nodes_) out << "node " << n << "\n";
    for (const auto& [e, v] : edges_)
        out << nodes_[e.first] << " " << nodes_[e.second] << " " << q_->format(v) << "\n";
    return out.str();
}

FiniteQRel FiniteQRel::from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    const Quantale* q = nullptr;
    std::vector<std::string> pending;
    FiniteQRel* rel = nullptr;
    std::optional<FiniteQRel> out;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> words;
        for (std::string w; ls >> w;) words.push_back(w);
        if (words.empty()) continue;
        if (words[0] == "quantale" && words.size() == 2) {
            q = &Quantale::by_name(words[1]);
            out.emplace(*q);
            rel = &*out;
            continue;
        }
        if (!rel) throw std::invalid_argument("line " + std::to_string(lineno) + ": missing quantale header");
        if (words[0] == "node" && words.size() == 2) {
            rel->add_node(words[1]);
        } else if (words.size() == 3) {
            rel->set(words[0], words[1], q->parse(words[2]));
        } else {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": expected 'src dst weight'");
        }
    }
    if (!out) throw std::invalid_argument("missing quantale header");
    return std::move(*out);
}

std::string FiniteQRel::to_dot() const {
    std::ostringstream out;
    out << "digraph R {\n";
    for (std::size_t i = 0; i < nodes_.size(); ++i) out << "  n" << i << " [label=\"" << nodes_[i] << "\"];\n";
    for (const auto& [e, v] : edges_)
        out << "  n" << e.first << " -> n" << e.second << " [label=\"" << q_->format(v) << "\"];\n";
    out << "}\n";
    return out.str();
}

namespace {

/// Dense view over a shared carrier.
struct Dense {
    const Quantale* q;
    std::vector<std::string> nodes;
    std::vector<QValue> cells;
    std::size_t n() const { return nodes.size(); }
    QValue& at(std::size_t i, std::size_t j) { return cells[i * nodes.size() + j]; }
    const QValue& at(std::size_t i, std::size_t j) const { return cells[i * nodes.size() + j]; }
};

std::vector<std::string> merged_carrier(const FiniteQRel& r, const FiniteQRel& s) {
    std::vector<std::string> nodes = r.carrier();
    for (const auto& n : s.carrier())
        if (!r.has_node(n)) nodes.push_back(n);
    return nodes;
}

Dense dense(const FiniteQRel& r, const std::vector<std::string>& nodes) {
    Dense d{&r.quantale(), nodes, std::vector<QValue>(nodes.size() * nodes.size(), r.quantale().bottom())};
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < nodes.size(); ++i) pos[nodes[i]] = i;
    for (const auto& [e, v] : r.edges()) d.at(pos.at(r.carrier()[e.first]), pos.at(r.carrier()[e.second])) = v;
    return d;
}

FiniteQRel sparse(const Dense& d) {
    FiniteQRel r(*d.q, d.nodes);
    for (std::size_t i = 0; i < d.n(); ++i)
        for (std::size_t j = 0; j < d.n(); ++j)
            if (!(d.at(i, j) == d.q->bottom())) r.set(i, j, d.at(i, j));
    return r;
}

void same_quantale(const FiniteQRel& r, const FiniteQRel& s) {
    if (&r.quantale() != &s.quantale()) throw DomainError("relations over different quantales");
}

Dense dense_compose(const Dense& a, const Dense& b) {
    const Quantale& q = *a.q;
    Dense out{a.q, a.nodes, std::vector<QValue>(a.cells.size(), q.bottom())};
    for (std::size_t i = 0; i < a.n(); ++i)
        for (std::size_t k = 0; k < a.n(); ++k) {
            const QValue& x = a.at(i, k);
            if (x == q.bottom()) continue;
            for (std::size_t j = 0; j < a.n(); ++j) {
                const QValue& y = b.at(k, j);
                if (y == q.bottom()) continue;
                out.at(i, j) = q.join(out.at(i, j), q.tensor(x, y));
            }
        }
    return out;
}

}  // namespace

FiniteQRel compose(const FiniteQRel& r, const FiniteQRel& s) {
    same_quantale(r, s);
    auto nodes = merged_carrier(r, s);
    return sparse(dense_compose(dense(r, nodes), dense(s, nodes)));
}

FiniteQRel transpose(const FiniteQRel& r) {
    FiniteQRel out(r.quantale(), r.carrier());
    for (const auto& [e, v] : r.edges()) out.set(e.second, e.first, v);
    return out;
}

FiniteQRel identity(const Quantale& q, const std::vector<std::string>& carrier) {
    FiniteQRel out(q, carrier);
    for (std::size_t i = 0; i < out.size(); ++i) out.set(i, i, q.unit());
    return out;
}

FiniteQRel join(const FiniteQRel& r, const FiniteQRel& s) {
    same_quantale(r, s);
    FiniteQRel out(r.quantale(), merged_carrier(r, s));
    const Quantale& q = r.quantale();
    for (const auto& [e, v] : r.edges()) out.set(r.carrier()[e.first], r.carrier()[e.second], v);
    for (const auto& [e, v] : s.edges()) {
        const auto& a = s.carrier()[e.first];
        const auto& b = s.carrier()[e.second];
        out.set(a, b, q.join(out.get(a, b), v));
    }
    return out;
}

FiniteQRel iterate(const FiniteQRel& r, int n) {
    if (n < 0) throw std::invalid_argument("iterate: negative exponent");
    FiniteQRel acc = identity(r.quantale(), r.carrier());
    for (int i = 0; i < n; ++i) acc = compose(r, acc);
    return acc;
}

FiniteQRel reflexive_closure(const FiniteQRel& r) {
    return join(r, identity(r.quantale(), r.carrier()));
}

FiniteQRel star(const FiniteQRel& r) {
    const Quantale& q = r.quantale();
    q.require_lawverian("star");
    Dense d = dense(r, r.carrier());
    for (std::size_t i = 0; i < d.n(); ++i) d.at(i, i) = q.unit();
    for (std::size_t k = 0; k < d.n(); ++k)
        for (std::size_t i = 0; i < d.n(); ++i) {
            if (d.at(i, k) == q.bottom()) continue;
            for (std::size_t j = 0; j < d.n(); ++j) {
                if (d.at(k, j) == q.bottom()) continue;
                d.at(i, j) = q.join(d.at(i, j), q.tensor(d.at(i, k), d.at(k, j)));
            }
        }
    return sparse(d);
}

FiniteQRel equivalence_closure(const FiniteQRel& r) {
    return star(join(r, transpose(r)));
}

FiniteQRel box(const FiniteQRel& r) {
    const Quantale& q = r.quantale();
    FiniteQRel out(q, r.carrier());
    for (const auto& [e, v] : r.edges())
        if (v == q.unit()) out.set(e.first, e.second, v);
    return out;
}

bool commutes_check(const FiniteQRel& r, const FiniteQRel& s) {
    same_quantale(r, s);
    r.quantale().require_lawverian("commutes_check");
    return compose(transpose(r), s).leq(compose(s, transpose(r)));
}

bool diamond_check(const FiniteQRel& r) { return commutes_check(r, r); }

bool locally_confluent_check(const FiniteQRel& r) {
    FiniteQRel rs = star(r);
    return compose(transpose(r), r).leq(compose(rs, transpose(rs)));
}

bool confluent_check(const FiniteQRel& r) { return diamond_check(star(r)); }

bool church_rosser_check(const FiniteQRel& r) {
    FiniteQRel rs = star(r);
    return equivalence_closure(r) == compose(rs, transpose(rs));
}

bool strongly_confluent_check(const FiniteQRel& r) {
    FiniteQRel rs = star(r);
    return compose(transpose(r), r).leq(compose(reflexive_closure(r), transpose(rs)));
}

bool strongly_closed_check(const FiniteQRel& r) {
    FiniteQRel rs = star(r);
    FiniteQRel peak = compose(transpose(r), r);
    return peak.leq(compose(reflexive_closure(r), transpose(rs))) &&
           peak.leq(compose(rs, transpose(reflexive_closure(r))));
}

bool strongly_normalizing_check(const FiniteQRel& r) {
    // Kahn's algorithm: a cycle leaves nodes with positive in-degree.
    std::vector<std::size_t> indeg(r.size(), 0);
    std::vector<std::vector<std::size_t>> succ(r.size());
    for (const auto& [e, v] : r.edges()) {
        succ[e.first].push_back(e.second);
        ++indeg[e.second];
    }
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < r.size(); ++i)
        if (indeg[i] == 0) ready.push_back(i);
    std::size_t seen = 0;
    while (!ready.empty()) {
        std::size_t n = ready.back();
        ready.pop_back();
        ++seen;
        for (auto m : succ[n])
            if (--indeg[m] == 0) ready.push_back(m);
    }
    return seen == r.size();
}

std::set<std::string> normal_forms(const FiniteQRel& r) {
    std::vector<bool> has_out(r.size(), false);
    for (const auto& [e, v] : r.edges()) has_out[e.first] = true;
    std::set<std::string> out;
    for (std::size_t i = 0; i < r.size(); ++i)
        if (!has_out[i]) out.insert(r.carrier()[i]);
    return out;
}

bool weakly_normalizing_check(const FiniteQRel& r) {
    auto nfs = normal_forms(r);
    FiniteQRel rs = star(r);
    for (std::size_t i = 0; i < r.size(); ++i) {
        bool ok = false;
        for (const auto& nf : nfs)
            if (!(rs.get(r.carrier()[i], nf) == r.quantale().bottom())) {
                ok = true;
                break;
            }
        if (!ok) return false;
    }
    return true;
}

HindleyRosenReport hindley_rosen_check(const FiniteQRel& r, const FiniteQRel& s) {
    HindleyRosenReport rep;
    rep.stars_commute = commutes_check(star(r), star(s));
    rep.r_confluent = confluent_check(r);
    rep.s_confluent = confluent_check(s);
    rep.union_confluent = confluent_check(join(r, s));
    if (rep.stars_commute && rep.r_confluent && rep.s_confluent && !rep.union_confluent)
        throw InternalSoundnessError("Hindley-Rosen premises hold but the union is not confluent");
    return rep;
}

}  // namespace qrw
