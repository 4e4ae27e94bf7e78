#pragma once

// Exact arithmetic used throughout the toolkit. Coordinates, distances and
// scales are rationals; boundary matrices use unbounded integers.

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace polytower {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p", "p/q" or "-p/q". Throws std::invalid_argument on malformed
/// text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" text ("p" when the denominator is one).
std::string format_rational(const Rational& value);

inline Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

}  // namespace polytower
