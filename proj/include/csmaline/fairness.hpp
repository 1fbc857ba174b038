#pragma once

#include "csmaline/model.hpp"
#include "csmaline/rational.hpp"
#include "csmaline/scaled_real.hpp"

#include <vector>

namespace csmaline {

/// Fair activation rates rho_i = alpha (1+alpha)^(gamma(i) - gamma(1)).
class FairRateVector {
 public:
  FairRateVector(double alpha, std::vector<int> offsets, std::vector<ScaledReal> rho);

  [[nodiscard]] double alpha() const { return alpha_; }
  [[nodiscard]] int size() const { return static_cast<int>(rho_.size()); }
  /// gamma(i) - gamma(1), 0-based by node.
  [[nodiscard]] const std::vector<int>& offsets() const { return offsets_; }
  [[nodiscard]] const std::vector<ScaledReal>& scaled() const { return rho_; }
  /// Plain doubles; +inf where (1+alpha)^k overflows.
  [[nodiscard]] std::vector<double> rho() const;

 private:
  double alpha_;
  std::vector<int> offsets_;
  std::vector<ScaledReal> rho_;
};

FairRateVector fair_rates(int n, int beta, double alpha);

/// Same rates in exact arithmetic.
std::vector<Rational> fair_rates_rational(int n, int beta, const Rational& alpha);

/// Common per-node throughput alpha / (1 + (beta+1) alpha) under fair rates.
double fair_throughput(double alpha, int beta);
Rational fair_throughput_rational(const Rational& alpha, int beta);

struct TrafficExpansion {
  double light_second_order;  // alpha + (gamma(i)-gamma(1)) alpha^2
  int heavy_leading_exponent;  // gamma(i)-gamma(1)+1
};

TrafficExpansion traffic_expansions(int n, int beta, double alpha, int i);

struct FairnessCheck {
  double max_deviation_recursive = 0.0;
  bool exact_checked = false;
  double max_deviation_exact = 0.0;

  [[nodiscard]] double max_deviation() const {
    return exact_checked && max_deviation_exact > max_deviation_recursive ? max_deviation_exact
                                                                          : max_deviation_recursive;
  }
};

/// max_i |theta_i - alpha/(1+(beta+1)alpha)| via the recursion, plus the
/// enumeration oracle when the state space is small enough.
/// Equal-rate configs are accepted as a negative control (target uses sigma as alpha).
FairnessCheck verify_fairness(const LineNetworkConfig& config);

}  // namespace csmaline
