#pragma once

#include "qrw/qrel.hpp"

#include <random>
#include <string>

namespace qrw::testing {

/// Random Lawvere relation on n nodes; weights from {0, 1/2, 1, 2}, edges present with probability `density`.
inline FiniteQRel random_lawvere_relation(std::size_t n, double density, bool acyclic, std::mt19937_64& rng) {
    const Quantale& q = Quantale::get(QuantaleKind::Lawvere);
    static const Rational weights[] = {Rational(0), Rational(1, 2), Rational(1), Rational(2)};
    std::vector<std::string> nodes;
    for (std::size_t i = 0; i < n; ++i) nodes.push_back("n" + std::to_string(i));
    FiniteQRel r(q, nodes);
    std::bernoulli_distribution edge(density);
    std::uniform_int_distribution<int> w(0, 3);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (acyclic && b <= a) continue;
            if (edge(rng)) r.set(a, b, q.make(weights[w(rng)]));
        }
    return r;
}

}  // namespace qrw::testing
