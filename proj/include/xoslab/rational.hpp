#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace xoslab {

/// Exact rational, always in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return Rational(num, den);
}

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& r);

double to_double(const Rational& r);

/// Parses "p", "p/q" or a plain decimal such as "0.002" exactly.
Rational parse_rational(const std::string& text);

}  // namespace xoslab
