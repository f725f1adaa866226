#pragma once

#include "qrw/quantale.hpp"

#include <functional>
#include <random>
#include <string>
#include <vector>

namespace qrw::testing {

/// Values drawn from a small exact pool, with the lattice extremes over-represented.
inline QValue sample_value(const Quantale& q, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, 9);
    int r = pick(rng);
    if (r == 0) return q.bottom();
    if (r == 1) return q.top();
    if (r == 2) return q.unit();
    switch (q.kind()) {
    case QuantaleKind::Boolean: return r % 2 ? q.top() : q.bottom();
    case QuantaleKind::NatInf: return q.make(std::uniform_int_distribution<int>(0, 12)(rng));
    case QuantaleKind::Lawvere:
    case QuantaleKind::StrongLawvere: {
        static const int dens[] = {1, 2, 3, 4, 6};
        int d = dens[std::uniform_int_distribution<int>(0, 4)(rng)];
        return q.make(Rational(std::uniform_int_distribution<int>(0, 4 * d)(rng), d));
    }
    default: {
        static const int dens[] = {1, 2, 3, 4, 5, 8};
        int d = dens[std::uniform_int_distribution<int>(0, 5)(rng)];
        return q.make(Rational(std::uniform_int_distribution<int>(0, d)(rng), d));
    }
    }
}

struct LawOutcome {
    std::string law;
    std::size_t samples = 0;
    std::size_t failures = 0;
    std::string counterexample;
};

/// Runs every quantale law the instance claims on `samples` random draws each.
inline std::vector<LawOutcome> check_quantale_laws(const Quantale& q, std::size_t samples, std::mt19937_64& rng) {
    using Law = std::function<bool(const QValue&, const QValue&, const QValue&)>;
    std::vector<std::pair<std::string, Law>> laws{
        {"leq reflexive", [&](auto& a, auto&, auto&) { return q.leq(a, a); }},
        {"leq antisymmetric", [&](auto& a, auto& b, auto&) { return !(q.leq(a, b) && q.leq(b, a)) || a == b; }},
        {"leq transitive",
         [&](auto& a, auto& b, auto& c) { return !(q.leq(a, b) && q.leq(b, c)) || q.leq(a, c); }},
        {"leq total", [&](auto& a, auto& b, auto&) { return !q.totally_ordered() || q.leq(a, b) || q.leq(b, a); }},
        {"bottom and top bound",
         [&](auto& a, auto&, auto&) { return q.leq(q.bottom(), a) && q.leq(a, q.top()); }},
        {"join is least upper bound",
         [&](auto& a, auto& b, auto& c) {
             QValue j = q.join(a, b);
             bool upper = q.leq(a, j) && q.leq(b, j);
             return upper && (!(q.leq(a, c) && q.leq(b, c)) || q.leq(j, c));
         }},
        {"meet is greatest lower bound",
         [&](auto& a, auto& b, auto& c) {
             QValue m = q.meet(a, b);
             bool lower = q.leq(m, a) && q.leq(m, b);
             return lower && (!(q.leq(c, a) && q.leq(c, b)) || q.leq(c, m));
         }},
        {"tensor associative",
         [&](auto& a, auto& b, auto& c) { return q.tensor(q.tensor(a, b), c) == q.tensor(a, q.tensor(b, c)); }},
        {"tensor commutative", [&](auto& a, auto& b, auto&) { return q.tensor(a, b) == q.tensor(b, a); }},
        {"tensor unit", [&](auto& a, auto&, auto&) { return q.tensor(a, q.unit()) == a; }},
        {"tensor monotone",
         [&](auto& a, auto& b, auto& c) { return !q.leq(a, b) || q.leq(q.tensor(a, c), q.tensor(b, c)); }},
        {"tensor distributes over joins",
         [&](auto& a, auto& b, auto& c) {
             return q.tensor(a, q.join(b, c)) == q.join(q.tensor(a, b), q.tensor(a, c));
         }},
        {"bottom annihilates", [&](auto& a, auto&, auto&) { return q.tensor(a, q.bottom()) == q.bottom(); }},
        {"residuation adjunction",
         [&](auto& a, auto& b, auto& c) { return q.leq(q.tensor(a, b), c) == q.leq(b, q.residual(a, c)); }},
        {"integral", [&](auto&, auto&, auto&) { return !q.integral() || q.unit() == q.top(); }},
        {"cointegral",
         [&](auto& a, auto& b, auto&) {
             return !q.cointegral() || !(q.tensor(a, b) == q.bottom()) || a == q.bottom() || b == q.bottom();
         }},
        {"idempotent", [&](auto& a, auto&, auto&) { return !q.idempotent() || q.tensor(a, a) == a; }},
        {"format round-trips", [&](auto& a, auto&, auto&) { return q.parse(q.format(a)) == a; }},
    };
    std::vector<LawOutcome> out;
    for (const auto& [name, law] : laws) {
        LawOutcome o{name, samples, 0, {}};
        for (std::size_t i = 0; i < samples; ++i) {
            QValue a = sample_value(q, rng), b = sample_value(q, rng), c = sample_value(q, rng);
            if (!law(a, b, c)) {
                if (!o.failures)
                    o.counterexample = q.format(a) + ", " + q.format(b) + ", " + q.format(c);
                ++o.failures;
            }
        }
        out.push_back(std::move(o));
    }
    return out;
}

}  // namespace qrw::testing
