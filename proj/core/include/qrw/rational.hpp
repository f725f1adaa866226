#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace qrw {

using Rational = boost::multiprecision::cpp_rational;

/// Parses `3`, `-2`, `1/2` or `0.25`. Returns nullopt on malformed text.
std::optional<Rational> parse_rational(std::string_view text);

std::string to_string(const Rational& r);

std::size_t hash_rational(const Rational& r);

inline bool is_integer(const Rational& r) {
    return boost::multiprecision::denominator(r) == 1;
}

}  // namespace qrw
