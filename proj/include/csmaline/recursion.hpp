#pragma once

#include "csmaline/exact.hpp"
#include "csmaline/model.hpp"
#include "csmaline/rational.hpp"
#include "csmaline/scaled_real.hpp"

#include <optional>
#include <span>
#include <vector>

namespace csmaline {

/// Normalization constants Z_0..Z_m of the prefix lines 1..i:
///   Z_i = 1 (i <= 0), Z_i = Z_{i-1} + rho_i Z_{i-beta-1}.
/// Values are extended-exponent reals; Z_i for negative i reads as 1.
class ZSequence {
 public:
  ZSequence(int beta, std::vector<ScaledReal> values, std::optional<std::vector<ScaledReal>> dvalues = {});

  [[nodiscard]] int beta() const { return beta_; }
  [[nodiscard]] int upto() const { return static_cast<int>(values_.size()) - 1; }

  [[nodiscard]] ScaledReal at(int i) const { return i <= 0 ? ScaledReal(1.0) : values_.at(static_cast<std::size_t>(i)); }
  [[nodiscard]] double value(int i) const { return at(i).to_double(); }
  /// Accumulated log of the rescaling applied at index i (0 unless Z_i > 1e300).
  [[nodiscard]] double logscale(int i) const { return at(i).log_scale(); }
  [[nodiscard]] double log_value(int i) const { return at(i).log(); }

  [[nodiscard]] bool has_derivative() const { return dvalues_.has_value(); }
  /// dZ_i/dsigma for equal rates (0 for i <= 0).
  [[nodiscard]] ScaledReal derivative_at(int i) const;

  [[nodiscard]] std::span<const ScaledReal> values() const { return values_; }

 private:
  int beta_;
  std::vector<ScaledReal> values_;
  std::optional<std::vector<ScaledReal>> dvalues_;
};

ZSequence z_sequence(std::span<const double> rho, int beta, int upto);
ZSequence z_sequence(std::span<const ScaledReal> rho, int beta, int upto);

/// Equal rates sigma, carrying dZ_i/dsigma via dZ_i = dZ_{i-1} + Z_{i-beta-1} + sigma dZ_{i-beta-1}.
ZSequence z_sequence_equal(double sigma, int beta, int upto);

std::vector<Rational> z_sequence_rational(const std::vector<Rational>& rho, int beta, int upto);

/// Z_{k:n} for k = 1..n+1 of the suffix lines (index k-1 in the result; last entry is 1).
std::vector<ScaledReal> suffix_z(std::span<const ScaledReal> rho, int beta);

/// Throughput from the normalization constants. Symmetric rate vectors use the
/// single forward pass theta_i = rho_i Z_{i-beta-1} Z_{n-i-beta} / Z_n; otherwise
/// a forward and a backward pass give theta_i = rho_i Z_{1:i-beta-1} Z_{i+beta+1:n} / Z_{1:n}.
ThroughputVector throughput_recursive(const LineNetworkConfig& config);
ThroughputVector throughput_recursive(std::span<const ScaledReal> rho, int beta);
ThroughputVector throughput_recursive(std::span<const double> rho, int beta);

/// Forces the two-pass route even for symmetric rates (used to cross-check both).
ThroughputVector throughput_two_pass(std::span<const ScaledReal> rho, int beta);

struct ClosedFormsBeta1 {
  double chebyshev_value;
  double binomial_value;
};

/// Z_i for beta = 1 through the Chebyshev-U form and the binomial sum.
ClosedFormsBeta1 z_closed_forms_beta1(double sigma, int i);

/// (sigma/n) (dZ_n/dsigma) / Z_n.
double avg_throughput_equal(double sigma, int beta, int n);
Rational avg_throughput_equal_rational(const Rational& sigma, int beta, int n);

}  // namespace csmaline
