#include "csmaline/exact.hpp"

#include "csmaline/error.hpp"
#include "csmaline/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace csmaline {

namespace {

bool use_rationals(Arithmetic a, std::size_t k, const std::vector<double>& rho) {
  if (a == Arithmetic::Float) return false;
  const bool finite = std::all_of(rho.begin(), rho.end(), [](double v) { return std::isfinite(v); });
  if (a == Arithmetic::Rational) {
    if (!finite) throw InvalidArgument("rational arithmetic needs finite rates");
    return true;
  }
  return finite && k <= kRationalStateLimit;
}

Rational state_weight(std::uint64_t mask, const std::vector<Rational>& rho) {
  Rational w(1);
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if ((mask >> i) & 1u) w *= rho[i];
  }
  return w;
}

}  // namespace

std::vector<Rational> rational_rates(const LineNetworkConfig& config) {
  if (const auto* f = std::get_if<FairRates>(&config.rates())) {
    return fair_rates_rational(config.n(), config.beta(), to_rational(f->alpha));
  }
  std::vector<Rational> out;
  for (double r : config.activation_rates()) out.push_back(to_rational(r));
  return out;
}

RationalDistribution stationary_distribution_rational(int beta, const std::vector<Rational>& rho,
                                                      EnumerationLimits limits) {
  for (const auto& r : rho) {
    if (r <= 0) throw InvalidArgument("rates must be positive");
  }
  StateSpace space = enumerate_states(static_cast<int>(rho.size()), beta, limits);
  std::vector<Rational> w;
  w.reserve(space.size());
  Rational z(0);
  for (std::uint64_t m : space.masks()) {
    w.push_back(state_weight(m, rho));
    z += w.back();
  }
  for (auto& x : w) x /= z;
  return {std::move(space), std::move(w), std::move(z)};
}

std::vector<Rational> throughput_exact_rational(int beta, const std::vector<Rational>& rho, EnumerationLimits limits) {
  for (const auto& r : rho) {
    if (r <= 0) throw InvalidArgument("rates must be positive");
  }
  const StateSpace space = enumerate_states(static_cast<int>(rho.size()), beta, limits);
  std::vector<Rational> active_weight(rho.size(), Rational(0));
  Rational z(0);
  for (std::uint64_t m : space.masks()) {
    const Rational w = state_weight(m, rho);
    z += w;
    for (std::size_t i = 0; i < rho.size(); ++i) {
      if ((m >> i) & 1u) active_weight[i] += w;
    }
  }
  for (auto& t : active_weight) t /= z;
  return active_weight;
}

StationaryDistribution stationary_distribution(const LineNetworkConfig& config, Arithmetic arithmetic,
                                               EnumerationLimits limits) {
  const auto rho = config.activation_rates();
  const std::size_t predicted = feasible_state_count(config.n(), config.beta());
  if (use_rationals(arithmetic, predicted, rho)) {
    auto exact = stationary_distribution_rational(config.beta(), rational_rates(config), limits);
    std::vector<double> probs;
    probs.reserve(exact.probs.size());
    for (const auto& p : exact.probs) probs.push_back(to_double(p));
    return {std::move(exact.space), std::move(probs), to_double(exact.z), true};
  }

  StateSpace space = enumerate_states(config, limits);
  // log-weights keep extreme rates finite; the sum runs in descending magnitude
  std::vector<double> logw;
  logw.reserve(space.size());
  for (std::uint64_t m : space.masks()) {
    double lw = 0.0;
    for (int i = 0; i < config.n(); ++i) {
      if ((m >> i) & 1u) lw += std::log(rho[static_cast<std::size_t>(i)]);
    }
    logw.push_back(lw);
  }
  const double shift = *std::max_element(logw.begin(), logw.end());
  std::vector<double> w;
  w.reserve(logw.size());
  for (std::size_t k = 0; k < logw.size(); ++k) {
    // multiply the rates directly when nothing overflows, to stay bit-comparable with rational results
    double direct = 1.0;
    for (int i = 0; i < config.n(); ++i) {
      if ((space.masks()[k] >> i) & 1u) direct *= rho[static_cast<std::size_t>(i)];
    }
    w.push_back(shift < 700.0 ? direct : std::exp(logw[k] - shift));
  }
  std::vector<double> sorted = w;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const double scaled_z = std::accumulate(sorted.begin(), sorted.end(), 0.0);
  std::vector<double> probs;
  probs.reserve(w.size());
  for (double x : w) probs.push_back(x / scaled_z);
  const double z = shift < 700.0 ? scaled_z : std::exp(std::log(scaled_z) + shift);
  return {std::move(space), std::move(probs), z, false};
}

ThroughputVector throughput_exact(const LineNetworkConfig& config, Arithmetic arithmetic, EnumerationLimits limits) {
  if (use_rationals(arithmetic, feasible_state_count(config.n(), config.beta()), config.activation_rates())) {
    ThroughputVector out;
    for (const auto& t : throughput_exact_rational(config.beta(), rational_rates(config), limits)) {
      out.push_back(to_double(t));
    }
    return out;
  }
  const auto dist = stationary_distribution(config, Arithmetic::Float, limits);
  const int n = config.n();
  std::vector<std::vector<double>> parts(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < dist.space.size(); ++k) {
    const std::uint64_t m = dist.space.masks()[k];
    for (int i = 0; i < n; ++i) {
      if ((m >> i) & 1u) parts[static_cast<std::size_t>(i)].push_back(dist.probs[k]);
    }
  }
  ThroughputVector theta;
  for (auto& p : parts) {
    std::sort(p.begin(), p.end(), std::greater<>());
    theta.push_back(std::accumulate(p.begin(), p.end(), 0.0));
  }
  return theta;
}

}  // namespace csmaline
