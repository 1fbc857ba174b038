#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace csmaline {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact rational value of a finite double.
Rational to_rational(double x);

/// Parses "p/q", an integer, or a decimal literal such as "11.68" exactly.
Rational parse_rational(const std::string& text);

double to_double(const Rational& q);

}  // namespace csmaline
