#include "qrw/rational.hpp"

#include <boost/container_hash/hash.hpp>

#include <cctype>

namespace qrw {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

boost::multiprecision::cpp_int parse_int(std::string_view s) {
    return boost::multiprecision::cpp_int(std::string(s));
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    Rational value;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto num = text.substr(0, slash);
        auto den = text.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) return std::nullopt;
        auto d = parse_int(den);
        if (d == 0) return std::nullopt;
        value = Rational(parse_int(num), d);
    } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
        auto whole = text.substr(0, dot);
        auto frac = text.substr(dot + 1);
        if (whole.empty()) whole = "0";
        if (!all_digits(whole) || !all_digits(frac)) return std::nullopt;
        boost::multiprecision::cpp_int scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        value = Rational(parse_int(whole)) + Rational(parse_int(frac), scale);
    } else {
        if (!all_digits(text)) return std::nullopt;
        value = Rational(parse_int(text));
    }
    return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& r) {
    return r.str();
}

std::size_t hash_rational(const Rational& r) {
    return boost::hash<Rational>()(r);
}

}  // namespace qrw
