#include "qrw/quantale.hpp"

#include <algorithm>
#include <array>

namespace qrw {

std::size_t QValue::hash() const {
    std::size_t h = static_cast<std::size_t>(kind_) * 0x9e3779b97f4a7c15ULL;
    if (infinite_) return h ^ 0xabcdefULL;
    return h ^ hash_rational(number_);
}

const std::vector<QuantaleKind>& Quantale::all_kinds() {
    static const std::vector<QuantaleKind> kinds{
        QuantaleKind::Boolean,      QuantaleKind::Lawvere,          QuantaleKind::StrongLawvere,
        QuantaleKind::NatInf,       QuantaleKind::FuzzyProduct,     QuantaleKind::FuzzyLukasiewicz,
        QuantaleKind::FuzzyGodel,
    };
    return kinds;
}

const Quantale& Quantale::get(QuantaleKind kind) {
    static const std::array<Quantale, 7> instances{
        Quantale(QuantaleKind::Boolean, "bool"),
        Quantale(QuantaleKind::Lawvere, "lawvere"),
        Quantale(QuantaleKind::StrongLawvere, "strong-lawvere"),
        Quantale(QuantaleKind::NatInf, "nat-inf"),
        Quantale(QuantaleKind::FuzzyProduct, "fuzzy-product"),
        Quantale(QuantaleKind::FuzzyLukasiewicz, "fuzzy-lukasiewicz"),
        Quantale(QuantaleKind::FuzzyGodel, "fuzzy-godel"),
    };
    return instances[static_cast<std::size_t>(kind)];
}

const Quantale& Quantale::by_name(std::string_view name) {
    for (auto k : all_kinds())
        if (get(k).name() == name) return get(k);
    throw std::invalid_argument("unknown quantale '" + std::string(name) + "'");
}

void Quantale::check(const QValue& v) const {
    if (v.kind() != kind_) throw DomainError("value from another quantale passed to " + name_);
}

void Quantale::require_lawverian(std::string_view what) const {
    if (!lawverian())
        throw NotLawverianError(std::string(what) + " requires a Lawverian quantale; " + name_ +
                                " is not cointegral");
}

bool Quantale::contains(const Rational& r) const {
    switch (kind_) {
    case QuantaleKind::Boolean:
        return r == 0 || r == 1;
    case QuantaleKind::Lawvere:
    case QuantaleKind::StrongLawvere:
        return r >= 0;
    case QuantaleKind::NatInf:
        return r >= 0 && is_integer(r);
    default:
        return r >= 0 && r <= 1;
    }
}

QValue Quantale::make(const Rational& r) const {
    if (!contains(r)) throw DomainError(to_string(r) + " is not an element of " + name_);
    return QValue(kind_, false, r);
}

QValue Quantale::infinity() const {
    if (!distance_like()) throw DomainError(name_ + " has no infinity element");
    return QValue(kind_, true, 0);
}

QValue Quantale::unit() const {
    return distance_like() ? QValue(kind_, false, 0) : QValue(kind_, false, 1);
}

QValue Quantale::top() const { return unit(); }

QValue Quantale::bottom() const {
    return distance_like() ? QValue(kind_, true, 0) : QValue(kind_, false, 0);
}

bool Quantale::numeric_le(const QValue& a, const QValue& b) const {
    if (b.is_infinite()) return true;
    if (a.is_infinite()) return false;
    return a.number() <= b.number();
}

bool Quantale::leq(const QValue& a, const QValue& b) const {
    check(a);
    check(b);
    return distance_like() ? numeric_le(b, a) : numeric_le(a, b);
}

QValue Quantale::join(const QValue& a, const QValue& b) const {
    return leq(a, b) ? b : a;
}

QValue Quantale::meet(const QValue& a, const QValue& b) const {
    return leq(a, b) ? a : b;
}

QValue Quantale::join(std::span<const QValue> values) const {
    QValue acc = bottom();
    for (const auto& v : values) acc = join(acc, v);
    return acc;
}

QValue Quantale::tensor(const QValue& a, const QValue& b) const {
    check(a);
    check(b);
    switch (kind_) {
    case QuantaleKind::Lawvere:
    case QuantaleKind::NatInf:
        if (a.is_infinite() || b.is_infinite()) return bottom();
        return QValue(kind_, false, a.number() + b.number());
    case QuantaleKind::StrongLawvere:
        return numeric_le(a, b) ? b : a;
    case QuantaleKind::Boolean:
    case QuantaleKind::FuzzyGodel:
        return numeric_le(a, b) ? a : b;
    case QuantaleKind::FuzzyProduct:
        return QValue(kind_, false, a.number() * b.number());
    case QuantaleKind::FuzzyLukasiewicz: {
        Rational s = a.number() + b.number() - 1;
        return QValue(kind_, false, s > 0 ? s : Rational(0));
    }
    }
    return bottom();
}

QValue Quantale::residual(const QValue& a, const QValue& b) const {
    check(a);
    check(b);
    switch (kind_) {
    case QuantaleKind::Lawvere:
    case QuantaleKind::NatInf:
        if (a.is_infinite()) return top();
        if (b.is_infinite()) return bottom();
        return QValue(kind_, false, b.number() > a.number() ? Rational(b.number() - a.number()) : Rational(0));
    case QuantaleKind::StrongLawvere:
        return numeric_le(b, a) ? top() : b;
    case QuantaleKind::Boolean:
    case QuantaleKind::FuzzyGodel:
        return numeric_le(a, b) ? top() : b;
    case QuantaleKind::FuzzyProduct:
        if (numeric_le(a, b)) return top();
        return QValue(kind_, false, b.number() / a.number());
    case QuantaleKind::FuzzyLukasiewicz: {
        Rational r = 1 - a.number() + b.number();
        return QValue(kind_, false, r < 1 ? r : Rational(1));
    }
    }
    return bottom();
}

QValue Quantale::parse(std::string_view text) const {
    if (kind_ == QuantaleKind::Boolean) {
        if (text == "top" || text == "true" || text == "1") return top();
        if (text == "bot" || text == "false" || text == "0") return bottom();
        throw DomainError("bad boolean literal '" + std::string(text) + "'");
    }
    if (text == "inf") return infinity();
    auto r = parse_rational(text);
    if (!r) throw DomainError("bad numeric literal '" + std::string(text) + "'");
    return make(*r);
}

std::string Quantale::format(const QValue& v) const {
    check(v);
    if (kind_ == QuantaleKind::Boolean) return v.number() == 1 ? "top" : "bot";
    if (v.is_infinite()) return "inf";
    return to_string(v.number());
}

}  // namespace qrw
