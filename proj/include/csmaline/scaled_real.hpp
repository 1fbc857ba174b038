#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace csmaline {

// Non-negative real with an extended binary exponent: value = mantissa * 2^exponent.
// Rescaling is by exact powers of two, so as long as nothing overflows a plain
// double the exponent stays 0 and arithmetic is bit-identical to double arithmetic.
class ScaledReal {
 public:
  static constexpr double kRescaleAbove = 1e300;
  static constexpr int kShift = 996;  // 2^996 ~ 6.7e299

  constexpr ScaledReal() = default;
  constexpr ScaledReal(double value) : mantissa_(value) {}  // NOLINT(implicit)
  ScaledReal(double mantissa, std::int64_t exponent) : mantissa_(mantissa), exponent_(exponent) {
    normalize();
  }

  static ScaledReal from_log(double log_value) {
    const double e2 = std::floor(log_value / std::numbers::ln2);
    const double frac = log_value - e2 * std::numbers::ln2;
    return ScaledReal(std::exp(frac), static_cast<std::int64_t>(e2));
  }

  [[nodiscard]] double mantissa() const { return mantissa_; }
  [[nodiscard]] std::int64_t exponent() const { return exponent_; }
  [[nodiscard]] double log_scale() const { return static_cast<double>(exponent_) * std::numbers::ln2; }
  [[nodiscard]] double log() const { return std::log(mantissa_) + log_scale(); }

  /// Plain double; may be +inf or 0 when out of range.
  [[nodiscard]] double to_double() const {
    return exponent_ == 0 ? mantissa_ : std::ldexp(mantissa_, static_cast<int>(clamp_exp(exponent_)));
  }

  friend ScaledReal operator+(ScaledReal a, ScaledReal b) {
    if (a.mantissa_ == 0.0) return b;
    if (b.mantissa_ == 0.0) return a;
    if (a.exponent_ < b.exponent_) std::swap(a, b);
    const std::int64_t d = b.exponent_ - a.exponent_;
    ScaledReal r;
    r.mantissa_ = a.mantissa_ + (d == 0 ? b.mantissa_ : std::ldexp(b.mantissa_, static_cast<int>(clamp_exp(d))));
    r.exponent_ = a.exponent_;
    r.normalize();
    return r;
  }

  friend ScaledReal operator*(ScaledReal a, ScaledReal b) {
    ScaledReal r;
    r.mantissa_ = a.mantissa_ * b.mantissa_;
    r.exponent_ = a.exponent_ + b.exponent_;
    if (std::isinf(r.mantissa_)) {
      r.mantissa_ = std::ldexp(a.mantissa_, -kShift) * b.mantissa_;
      r.exponent_ += kShift;
    }
    r.normalize();
    return r;
  }

  ScaledReal& operator+=(ScaledReal o) { return *this = *this + o; }
  ScaledReal& operator*=(ScaledReal o) { return *this = *this * o; }

  /// a / b as a plain double (the usual use: ratios whose scales cancel).
  friend double ratio(ScaledReal a, ScaledReal b) {
    const double m = a.mantissa_ / b.mantissa_;
    const std::int64_t d = a.exponent_ - b.exponent_;
    return d == 0 ? m : std::ldexp(m, static_cast<int>(clamp_exp(d)));
  }

 private:
  static std::int64_t clamp_exp(std::int64_t e) {
    return e < -4000 ? -4000 : (e > 4000 ? 4000 : e);
  }

  void normalize() {
    while (mantissa_ > kRescaleAbove) {
      mantissa_ = std::ldexp(mantissa_, -kShift);
      exponent_ += kShift;
    }
    while (exponent_ > 0 && mantissa_ != 0.0 && mantissa_ < 1.0 / kRescaleAbove) {
      mantissa_ = std::ldexp(mantissa_, kShift);
      exponent_ -= kShift;
    }
  }

  double mantissa_ = 0.0;
  std::int64_t exponent_ = 0;
};

}  // namespace csmaline
