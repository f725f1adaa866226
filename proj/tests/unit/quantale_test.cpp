#include "qrw/quantale.hpp"
#include "support/laws.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace qrw;

namespace {

const Quantale& Q(QuantaleKind k) { return Quantale::get(k); }
Rational r(long n, long d = 1) { return Rational(n, d); }

class QuantaleLaws : public ::testing::TestWithParam<QuantaleKind> {};

TEST_P(QuantaleLaws, HoldOnThousandSamples) {
    const Quantale& q = Q(GetParam());
    std::mt19937_64 rng(0x5eed + static_cast<int>(GetParam()));
    for (const auto& o : qrw::testing::check_quantale_laws(q, 1000, rng)) {
        EXPECT_EQ(o.failures, 0u) << q.name() << " " << o.law << ": " << o.counterexample;
        EXPECT_GE(o.samples, 1000u) << o.law;
    }
}

TEST_P(QuantaleLaws, ParseFormatRoundTrip) {
    const Quantale& q = Q(GetParam());
    for (auto v : {q.bottom(), q.top(), q.unit()}) EXPECT_EQ(q.parse(q.format(v)), v);
}

INSTANTIATE_TEST_SUITE_P(AllKinds, QuantaleLaws, ::testing::ValuesIn(Quantale::all_kinds()),
                         [](const auto& info) {
                             std::string n = Quantale::get(info.param).name();
                             std::replace(n.begin(), n.end(), '-', '_');
                             return n;
                         });

TEST(Lawvere, TensorIsAdditionAndJoinIsMin) {
    const Quantale& q = Q(QuantaleKind::Lawvere);
    EXPECT_EQ(q.tensor(q.make(r(1, 2)), q.make(r(1, 4))), q.make(r(3, 4)));
    EXPECT_EQ(q.join(q.make(2), q.make(5)), q.make(2));
    EXPECT_EQ(q.meet(q.make(2), q.make(5)), q.make(5));
    EXPECT_TRUE(q.leq(q.make(3), q.make(1)));
    EXPECT_FALSE(q.leq(q.make(1), q.make(3)));
    EXPECT_EQ(q.tensor(q.infinity(), q.make(1)), q.infinity());
    EXPECT_EQ(q.bottom(), q.infinity());
    EXPECT_EQ(q.unit(), q.make(0));
}

TEST(Lawvere, ResidualIsTruncatedDifference) {
    const Quantale& q = Q(QuantaleKind::Lawvere);
    std::vector<Rational> xs{0, r(1, 3), r(1, 2), 1, r(5, 2), 7};
    for (const auto& a : xs)
        for (const auto& b : xs) EXPECT_EQ(q.residual(q.make(a), q.make(b)), q.make(std::max<Rational>(b - a, 0)));
    EXPECT_EQ(q.residual(q.infinity(), q.make(3)), q.make(0));
    EXPECT_EQ(q.residual(q.make(3), q.infinity()), q.infinity());
}

TEST(StrongLawvere, TensorIsMax) {
    const Quantale& q = Q(QuantaleKind::StrongLawvere);
    EXPECT_EQ(q.tensor(q.make(r(1, 2)), q.make(2)), q.make(2));
    EXPECT_TRUE(q.idempotent());
    EXPECT_EQ(q.residual(q.make(1), q.make(3)), q.make(3));
    EXPECT_EQ(q.residual(q.make(3), q.make(1)), q.make(0));
}

TEST(NatInf, RejectsFractions) {
    const Quantale& q = Q(QuantaleKind::NatInf);
    EXPECT_THROW(q.make(r(1, 2)), DomainError);
    EXPECT_THROW(q.parse("0.5"), DomainError);
    EXPECT_EQ(q.tensor(q.make(2), q.make(3)), q.make(5));
}

TEST(Fuzzy, TensorsMatchTNorms) {
    const Quantale& p = Q(QuantaleKind::FuzzyProduct);
    const Quantale& l = Q(QuantaleKind::FuzzyLukasiewicz);
    const Quantale& g = Q(QuantaleKind::FuzzyGodel);
    std::vector<Rational> xs{0, r(1, 4), r(1, 2), r(2, 3), 1};
    for (const auto& a : xs)
        for (const auto& b : xs) {
            EXPECT_EQ(p.tensor(p.make(a), p.make(b)), p.make(a * b));
            EXPECT_EQ(l.tensor(l.make(a), l.make(b)), l.make(std::max<Rational>(a + b - 1, 0)));
            EXPECT_EQ(g.tensor(g.make(a), g.make(b)), g.make(std::min(a, b)));
            EXPECT_EQ(l.residual(l.make(a), l.make(b)), l.make(std::min<Rational>(1 - a + b, 1)));
            EXPECT_EQ(g.residual(g.make(a), g.make(b)), g.make(a <= b ? Rational(1) : b));
            EXPECT_EQ(p.residual(p.make(a), p.make(b)), p.make(a == 0 ? Rational(1) : std::min<Rational>(b / a, 1)));
        }
    EXPECT_THROW(p.make(2), DomainError);
    EXPECT_FALSE(l.cointegral());
}

TEST(Boolean, Literals) {
    const Quantale& q = Q(QuantaleKind::Boolean);
    EXPECT_EQ(q.parse("top"), q.top());
    EXPECT_EQ(q.parse("false"), q.bottom());
    EXPECT_EQ(q.format(q.tensor(q.top(), q.bottom())), "bot");
    EXPECT_THROW(q.parse("maybe"), DomainError);
}

TEST(Quantale, ByName) {
    for (auto k : Quantale::all_kinds()) EXPECT_EQ(Quantale::by_name(Q(k).name()).kind(), k);
    EXPECT_THROW(Quantale::by_name("tropical"), std::invalid_argument);
}

TEST(Quantale, MixedKindsRejected) {
    const Quantale& a = Q(QuantaleKind::Lawvere);
    const Quantale& b = Q(QuantaleKind::FuzzyGodel);
    EXPECT_THROW(a.tensor(a.make(1), b.make(1)), DomainError);
}

TEST(Rational, ParsesDecimalsAndFractions) {
    EXPECT_EQ(*parse_rational("0.25"), r(1, 4));
    EXPECT_EQ(*parse_rational("-3/6"), r(-1, 2));
    EXPECT_FALSE(parse_rational("1/0"));
    EXPECT_FALSE(parse_rational("x"));
    EXPECT_EQ(to_string(r(6, 4)), "3/2");
}

}  // namespace
