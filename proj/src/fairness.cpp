#include "csmaline/fairness.hpp"

#include "csmaline/error.hpp"
#include "csmaline/exact.hpp"
#include "csmaline/recursion.hpp"

#include <algorithm>
#include <cmath>

namespace csmaline {

FairRateVector::FairRateVector(double alpha, std::vector<int> offsets, std::vector<ScaledReal> rho)
    : alpha_(alpha), offsets_(std::move(offsets)), rho_(std::move(rho)) {}

std::vector<double> FairRateVector::rho() const {
  std::vector<double> out;
  out.reserve(rho_.size());
  for (const auto& r : rho_) out.push_back(r.to_double());
  return out;
}

FairRateVector fair_rates(int n, int beta, double alpha) {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  if (beta < 0) throw InvalidArgument("beta must be >= 0");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be positive");
  const int g1 = neighbor_count(n, beta, 1);
  const int max_offset = std::max(0, neighbor_count(n, beta, (n + 1) / 2) - g1);
  // powers (1+alpha)^k by repeated multiplication, identical for every node sharing k
  std::vector<ScaledReal> power(static_cast<std::size_t>(max_offset) + 1);
  power[0] = ScaledReal(alpha);
  for (int k = 1; k <= max_offset; ++k) power[static_cast<std::size_t>(k)] = power[static_cast<std::size_t>(k - 1)] * ScaledReal(1.0 + alpha);

  std::vector<int> offsets;
  std::vector<ScaledReal> rho;
  for (int i = 1; i <= n; ++i) {
    const int k = neighbor_count(n, beta, i) - g1;
    offsets.push_back(k);
    rho.push_back(power[static_cast<std::size_t>(k)]);
  }
  return {alpha, std::move(offsets), std::move(rho)};
}

std::vector<Rational> fair_rates_rational(int n, int beta, const Rational& alpha) {
  if (alpha <= 0) throw InvalidArgument("alpha must be positive");
  const int g1 = neighbor_count(n, beta, 1);
  std::vector<Rational> rho;
  for (int i = 1; i <= n; ++i) {
    Rational r = alpha;
    for (int k = 0; k < neighbor_count(n, beta, i) - g1; ++k) r *= Rational(1 + alpha);
    rho.push_back(r);
  }
  return rho;
}

double fair_throughput(double alpha, int beta) {
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  if (std::isinf(alpha)) return 1.0 / (beta + 1);
  return alpha / (1.0 + (beta + 1) * alpha);
}

Rational fair_throughput_rational(const Rational& alpha, int beta) {
  return Rational(alpha / (1 + (beta + 1) * alpha));
}

TrafficExpansion traffic_expansions(int n, int beta, double alpha, int i) {
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  const int k = neighbor_count(n, beta, i) - neighbor_count(n, beta, 1);
  return {alpha + k * alpha * alpha, k + 1};
}

FairnessCheck verify_fairness(const LineNetworkConfig& config) {
  double target = 0.0;
  if (const auto* f = std::get_if<FairRates>(&config.rates())) {
    target = fair_throughput(f->alpha, config.beta());
  } else if (const auto* e = std::get_if<EqualRates>(&config.rates())) {
    target = fair_throughput(e->sigma, config.beta());
  } else {
    throw InvalidArgument("verify_fairness needs fair (or equal, as a control) rates");
  }
  FairnessCheck check;
  for (double t : throughput_recursive(config)) {
    check.max_deviation_recursive = std::max(check.max_deviation_recursive, std::abs(t - target));
  }
  if (feasible_state_count(config.n(), config.beta()) <= 100000 && config.n() <= EnumerationLimits{}.max_nodes) {
    check.exact_checked = true;
    for (double t : throughput_exact(config, Arithmetic::Float)) {
      check.max_deviation_exact = std::max(check.max_deviation_exact, std::abs(t - target));
    }
  }
  return check;
}

}  // namespace csmaline
