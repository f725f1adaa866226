#pragma once

#include "qrw/quantale.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qrw {

class InternalSoundnessError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Finite-carrier quantale-valued relation. Bottom edges are never stored.
class FiniteQRel {
public:
    using Edge = std::pair<std::size_t, std::size_t>;

    explicit FiniteQRel(const Quantale& q, std::vector<std::string> carrier = {});

    const Quantale& quantale() const { return *q_; }
    const std::vector<std::string>& carrier() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    const std::map<Edge, QValue>& edges() const { return edges_; }

    std::size_t add_node(const std::string& name);
    bool has_node(const std::string& name) const { return index_.count(name) > 0; }
    std::size_t index_of(const std::string& name) const;

    /// Sets R(a,b); assigning bottom removes the edge. Endpoints join the carrier.
    void set(const std::string& a, const std::string& b, const QValue& v);
    void set(std::size_t a, std::size_t b, const QValue& v);
    QValue get(const std::string& a, const std::string& b) const;
    QValue get(std::size_t a, std::size_t b) const;

    /// Pointwise order, nodes matched by name.
    bool leq(const FiniteQRel& other) const;
    friend bool operator==(const FiniteQRel& a, const FiniteQRel& b) { return a.leq(b) && b.leq(a); }

    std::string to_text() const;
    static FiniteQRel from_text(const std::string& text);
    std::string to_dot() const;

private:
    const Quantale* q_;
    std::vector<std::string> nodes_;
    std::map<std::string, std::size_t> index_;
    std::map<Edge, QValue> edges_;
};

FiniteQRel compose(const FiniteQRel& r, const FiniteQRel& s);
FiniteQRel transpose(const FiniteQRel& r);
FiniteQRel identity(const Quantale& q, const std::vector<std::string>& carrier);
FiniteQRel join(const FiniteQRel& r, const FiniteQRel& s);
FiniteQRel iterate(const FiniteQRel& r, int n);
FiniteQRel reflexive_closure(const FiniteQRel& r);
FiniteQRel star(const FiniteQRel& r);
FiniteQRel equivalence_closure(const FiniteQRel& r);
FiniteQRel box(const FiniteQRel& r);

bool diamond_check(const FiniteQRel& r);
bool commutes_check(const FiniteQRel& r, const FiniteQRel& s);
bool locally_confluent_check(const FiniteQRel& r);
bool confluent_check(const FiniteQRel& r);
bool church_rosser_check(const FiniteQRel& r);
bool strongly_confluent_check(const FiniteQRel& r);
bool strongly_closed_check(const FiniteQRel& r);

bool strongly_normalizing_check(const FiniteQRel& r);
std::set<std::string> normal_forms(const FiniteQRel& r);
bool weakly_normalizing_check(const FiniteQRel& r);

struct HindleyRosenReport {
    bool stars_commute = false;
    bool r_confluent = false;
    bool s_confluent = false;
    bool union_confluent = false;
};

/// Throws InternalSoundnessError if the premises hold and the conclusion fails.
HindleyRosenReport hindley_rosen_check(const FiniteQRel& r, const FiniteQRel& s);

}  // namespace qrw
