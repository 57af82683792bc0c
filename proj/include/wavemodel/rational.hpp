#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace wavemodel {

/// Arbitrary-precision exact rational number.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

/// Parses "p/q", an integer, or a decimal with optional exponent ("-1.25e-3")
/// into an exact rational. Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// Formats as "p/q" with q > 0 (integers become "p/1"). Round-trips through
/// parse_rational bit-exactly.
std::string format_rational(const Rational& value);

double to_double(const Rational& value);

/// Exact conversion: every finite double is a dyadic rational.
Rational rational_from_double(double value);

/// Exact square root if `value` is the square of a rational, else false.
bool exact_sqrt(const Rational& value, Rational& root);

}  // namespace wavemodel
