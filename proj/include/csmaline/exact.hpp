#pragma once

#include "csmaline/model.hpp"
#include "csmaline/rational.hpp"

#include <vector>

namespace csmaline {

/// Brute-force oracle: product-form distribution summed over the enumerated state space.

enum class Arithmetic {
  Auto,      // exact rationals when K <= kRationalStateLimit, doubles otherwise
  Float,
  Rational,
};

inline constexpr std::size_t kRationalStateLimit = 100000;

struct StationaryDistribution {
  StateSpace space;
  std::vector<double> probs;  // aligned with space.masks()
  double z;                   // normalization constant Z_n
  bool exact;                 // computed in rational arithmetic
};

StationaryDistribution stationary_distribution(const LineNetworkConfig& config,
                                               Arithmetic arithmetic = Arithmetic::Auto,
                                               EnumerationLimits limits = {});

using ThroughputVector = std::vector<double>;

/// theta = X * Pi.
ThroughputVector throughput_exact(const LineNetworkConfig& config, Arithmetic arithmetic = Arithmetic::Auto,
                                  EnumerationLimits limits = {});

struct RationalDistribution {
  StateSpace space;
  std::vector<Rational> probs;
  Rational z;
};

RationalDistribution stationary_distribution_rational(int beta, const std::vector<Rational>& rho,
                                                      EnumerationLimits limits = {});
std::vector<Rational> throughput_exact_rational(int beta, const std::vector<Rational>& rho,
                                                EnumerationLimits limits = {});

/// Exact rates of a config: doubles are taken at their exact binary value,
/// fair rates are built from the exact alpha.
std::vector<Rational> rational_rates(const LineNetworkConfig& config);

}  // namespace csmaline
