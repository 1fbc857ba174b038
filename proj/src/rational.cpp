#include "csmaline/rational.hpp"

#include "csmaline/error.hpp"

#include <cmath>

namespace csmaline {

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw InvalidArgument("to_rational: non-finite value");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  const double frac = std::frexp(x, &exp);  // x = frac * 2^exp, 0.5 <= |frac| < 1
  const auto mant = static_cast<long long>(std::ldexp(frac, 53));
  exp -= 53;
  BigInt num(mant);
  if (exp >= 0) return Rational(num << exp);
  return Rational(num, BigInt(1) << -exp);
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw InvalidArgument("parse_rational: empty string");
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    return Rational(parse_rational(text.substr(0, slash)) / parse_rational(text.substr(slash + 1)));
  }
  std::string digits;
  int frac_digits = 0;
  bool seen_point = false;
  std::size_t pos = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else {
      // exponents and other forms fall back to the binary value
      return to_rational(std::stod(text));
    }
  }
  if (digits.empty()) throw InvalidArgument("parse_rational: no digits in '" + text + "'");
  BigInt num(digits);
  BigInt den = boost::multiprecision::pow(BigInt(10), frac_digits);
  Rational q(num, den);
  return negative ? Rational(-q) : q;
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace csmaline
