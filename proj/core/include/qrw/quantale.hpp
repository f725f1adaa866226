#pragma once

#include "qrw/rational.hpp"

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qrw {

/// Raised when values of different instances meet, or a value leaves its carrier.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when an operation needs a Lawverian quantale and gets another one.
class NotLawverianError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class QuantaleKind {
    Boolean,
    Lawvere,
    StrongLawvere,
    NatInf,
    FuzzyProduct,
    FuzzyLukasiewicz,
    FuzzyGodel,
};

/// Element of one quantale instance. The Lawvere family uses exact rationals plus infinity.
class QValue {
public:
    QValue() = default;

    QuantaleKind kind() const { return kind_; }
    bool is_infinite() const { return infinite_; }
    /// Underlying number; meaningless when is_infinite().
    const Rational& number() const { return number_; }

    friend bool operator==(const QValue& a, const QValue& b) {
        return a.kind_ == b.kind_ && a.infinite_ == b.infinite_ &&
               (a.infinite_ || a.number_ == b.number_);
    }

    std::size_t hash() const;

private:
    friend class Quantale;
    QValue(QuantaleKind k, bool inf, Rational r) : kind_(k), infinite_(inf), number_(std::move(r)) {}

    QuantaleKind kind_ = QuantaleKind::Lawvere;
    bool infinite_ = false;
    Rational number_ = 0;
};

class Quantale {
public:
    static const Quantale& get(QuantaleKind kind);
    /// CLI names: bool, lawvere, strong-lawvere, nat-inf, fuzzy-product, fuzzy-lukasiewicz, fuzzy-godel.
    static const Quantale& by_name(std::string_view name);
    static const std::vector<QuantaleKind>& all_kinds();

    QuantaleKind kind() const { return kind_; }
    const std::string& name() const { return name_; }

    bool leq(const QValue& a, const QValue& b) const;
    bool lt(const QValue& a, const QValue& b) const { return leq(a, b) && !(a == b); }
    QValue tensor(const QValue& a, const QValue& b) const;
    QValue join(const QValue& a, const QValue& b) const;
    QValue join(std::span<const QValue> values) const;
    QValue join(std::initializer_list<QValue> values) const {
        return join(std::span<const QValue>(values.begin(), values.size()));
    }
    QValue meet(const QValue& a, const QValue& b) const;
    QValue residual(const QValue& a, const QValue& b) const;

    QValue unit() const;
    QValue bottom() const;
    QValue top() const;

    bool idempotent() const { return kind_ == QuantaleKind::Boolean || kind_ == QuantaleKind::StrongLawvere ||
                                      kind_ == QuantaleKind::FuzzyGodel; }
    bool totally_ordered() const { return true; }
    bool integral() const { return true; }
    bool cointegral() const { return kind_ != QuantaleKind::FuzzyLukasiewicz; }
    bool lawverian() const { return integral() && cointegral(); }
    /// Order is reversed numeric order (Lawvere, strong Lawvere, NatInf).
    bool distance_like() const {
        return kind_ == QuantaleKind::Lawvere || kind_ == QuantaleKind::StrongLawvere ||
               kind_ == QuantaleKind::NatInf;
    }

    /// Builds a value from a number; throws DomainError outside the carrier.
    QValue make(const Rational& r) const;
    QValue infinity() const;
    bool contains(const Rational& r) const;

    QValue parse(std::string_view text) const;
    std::string format(const QValue& v) const;

    void require_lawverian(std::string_view what) const;
    void check(const QValue& v) const;

private:
    Quantale(QuantaleKind k, std::string name) : kind_(k), name_(std::move(name)) {}
    bool numeric_le(const QValue& a, const QValue& b) const;

    QuantaleKind kind_;
    std::string name_;
};

}  // namespace qrw
