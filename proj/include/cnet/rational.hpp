#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace cnet {

// Exact arithmetic for reliabilities, similarities and weights. Graph topology
// (argmax, ties, thresholds) is decided on these values, never on doubles.
using Rational = boost::multiprecision::cpp_rational;

// Accepts integers, fractions ("1/3"), and decimals with optional exponent
// ("0.25", "-1.5e-2"). Decimal input is converted exactly: "0.1" is 1/10.
Rational parse_rational(std::string_view text);

double to_double(const Rational& value);

// Fixed-point rendering, rounded half away from zero.
std::string format_fixed(const Rational& value, int decimals);

// "p/q" or "p" when the denominator is 1.
std::string to_fraction_string(const Rational& value);

} // namespace cnet
