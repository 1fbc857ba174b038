#include "csmaline/recursion.hpp"

#include "csmaline/error.hpp"
#include "csmaline/fairness.hpp"

#include <boost/math/special_functions/binomial.hpp>

#include <cmath>

namespace csmaline {

namespace {

void check_args(int beta, int upto, std::size_t available) {
  if (beta < 0) throw InvalidArgument("beta must be >= 0");
  if (upto < 0) throw InvalidArgument("upto must be >= 0");
  if (static_cast<std::size_t>(upto) > available) throw InvalidArgument("upto exceeds the number of rates");
}

std::vector<ScaledReal> to_scaled(std::span<const double> rho) {
  std::vector<ScaledReal> out;
  out.reserve(rho.size());
  for (double r : rho) {
    if (!(r > 0.0)) throw InvalidArgument("rates must be positive");
    out.emplace_back(r);
  }
  return out;
}

bool mirror_symmetric(std::span<const ScaledReal> rho) {
  const std::size_t n = rho.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    const auto& a = rho[i];
    const auto& b = rho[n - 1 - i];
    if (a.mantissa() != b.mantissa() || a.exponent() != b.exponent()) return false;
  }
  return true;
}

}  // namespace

ZSequence::ZSequence(int beta, std::vector<ScaledReal> values, std::optional<std::vector<ScaledReal>> dvalues)
    : beta_(beta), values_(std::move(values)), dvalues_(std::move(dvalues)) {}

ScaledReal ZSequence::derivative_at(int i) const {
  if (!dvalues_) throw InvalidArgument("ZSequence carries no derivative");
  return i <= 0 ? ScaledReal(0.0) : dvalues_->at(static_cast<std::size_t>(i));
}

ZSequence z_sequence(std::span<const ScaledReal> rho, int beta, int upto) {
  check_args(beta, upto, rho.size());
  std::vector<ScaledReal> z(static_cast<std::size_t>(upto) + 1);
  z[0] = ScaledReal(1.0);
  auto zat = [&](int k) { return k <= 0 ? ScaledReal(1.0) : z[static_cast<std::size_t>(k)]; };
  // For 1 <= i <= beta+1 the same update gives 1 + rho_1 + ... + rho_i because Z_{i-beta-1} = 1.
  for (int i = 1; i <= upto; ++i) {
    z[static_cast<std::size_t>(i)] = zat(i - 1) + rho[static_cast<std::size_t>(i - 1)] * zat(i - beta - 1);
  }
  return {beta, std::move(z)};
}

ZSequence z_sequence(std::span<const double> rho, int beta, int upto) {
  const auto scaled = to_scaled(rho);
  return z_sequence(std::span<const ScaledReal>(scaled), beta, upto);
}

ZSequence z_sequence_equal(double sigma, int beta, int upto) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  check_args(beta, upto, static_cast<std::size_t>(upto));
  const ScaledReal s(sigma);
  std::vector<ScaledReal> z(static_cast<std::size_t>(upto) + 1);
  std::vector<ScaledReal> dz(static_cast<std::size_t>(upto) + 1);
  z[0] = ScaledReal(1.0);
  dz[0] = ScaledReal(0.0);
  auto zat = [&](int k) { return k <= 0 ? ScaledReal(1.0) : z[static_cast<std::size_t>(k)]; };
  auto dzat = [&](int k) { return k <= 0 ? ScaledReal(0.0) : dz[static_cast<std::size_t>(k)]; };
  for (int i = 1; i <= upto; ++i) {
    const auto back = zat(i - beta - 1);
    z[static_cast<std::size_t>(i)] = zat(i - 1) + s * back;
    dz[static_cast<std::size_t>(i)] = dzat(i - 1) + back + s * dzat(i - beta - 1);
  }
  return {beta, std::move(z), std::move(dz)};
}

std::vector<Rational> z_sequence_rational(const std::vector<Rational>& rho, int beta, int upto) {
  check_args(beta, upto, rho.size());
  std::vector<Rational> z(static_cast<std::size_t>(upto) + 1, Rational(1));
  auto zat = [&](int k) -> const Rational& {
    static const Rational one(1);
    return k <= 0 ? one : z[static_cast<std::size_t>(k)];
  };
  for (int i = 1; i <= upto; ++i) {
    z[static_cast<std::size_t>(i)] = zat(i - 1) + rho[static_cast<std::size_t>(i - 1)] * zat(i - beta - 1);
  }
  return z;
}

std::vector<ScaledReal> suffix_z(std::span<const ScaledReal> rho, int beta) {
  const int n = static_cast<int>(rho.size());
  // b[k-1] = Z_{k:n}; entries past n read as 1
  std::vector<ScaledReal> b(static_cast<std::size_t>(n) + 1, ScaledReal(1.0));
  auto bat = [&](int k) { return k > n ? ScaledReal(1.0) : b[static_cast<std::size_t>(k - 1)]; };
  for (int k = n; k >= 1; --k) {
    b[static_cast<std::size_t>(k - 1)] = bat(k + 1) + rho[static_cast<std::size_t>(k - 1)] * bat(k + beta + 1);
  }
  return b;
}

ThroughputVector throughput_two_pass(std::span<const ScaledReal> rho, int beta) {
  const int n = static_cast<int>(rho.size());
  const auto forward = z_sequence(rho, beta, n);
  const auto backward = suffix_z(rho, beta);
  auto bat = [&](int k) { return k > n ? ScaledReal(1.0) : backward[static_cast<std::size_t>(k - 1)]; };
  ThroughputVector theta;
  theta.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    const ScaledReal num = rho[static_cast<std::size_t>(i - 1)] * forward.at(i - beta - 1) * bat(i + beta + 1);
    theta.push_back(ratio(num, forward.at(n)));
  }
  return theta;
}

ThroughputVector throughput_recursive(std::span<const ScaledReal> rho, int beta) {
  if (rho.empty()) throw InvalidArgument("need at least one node");
  if (beta < 0) throw InvalidArgument("beta must be >= 0");
  if (!mirror_symmetric(rho)) return throughput_two_pass(rho, beta);
  const int n = static_cast<int>(rho.size());
  const auto z = z_sequence(rho, beta, n);
  ThroughputVector theta;
  theta.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    const ScaledReal num = rho[static_cast<std::size_t>(i - 1)] * z.at(i - beta - 1) * z.at(n - i - beta);
    theta.push_back(ratio(num, z.at(n)));
  }
  return theta;
}

ThroughputVector throughput_recursive(std::span<const double> rho, int beta) {
  const auto scaled = to_scaled(rho);
  return throughput_recursive(std::span<const ScaledReal>(scaled), beta);
}

ThroughputVector throughput_recursive(const LineNetworkConfig& config) {
  if (const auto* f = std::get_if<FairRates>(&config.rates())) {
    const auto rates = fair_rates(config.n(), config.beta(), f->alpha);
    return throughput_recursive(std::span<const ScaledReal>(rates.scaled()), config.beta());
  }
  const auto rho = config.activation_rates();
  return throughput_recursive(std::span<const double>(rho), config.beta());
}

ClosedFormsBeta1 z_closed_forms_beta1(double sigma, int i) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  if (i < 0) throw InvalidArgument("i must be >= 0");
  // With sqrt(-1/(4 sigma)) = 1/(2 sqrt(-sigma)) the imaginary units cancel:
  // Z_i = sigma^{(i+1)/2} V_{i+1}(y), y = 1/(2 sqrt(sigma)), where V_k(y) = i^{-k} U_k(i y)
  // obeys V_{k+1} = 2y V_k + V_{k-1}, V_0 = 1, V_1 = 2y.
  const double y = 0.5 / std::sqrt(sigma);
  double v_prev = 1.0;
  double v = 2.0 * y;
  for (int k = 1; k < i + 1; ++k) {
    const double next = 2.0 * y * v + v_prev;
    v_prev = v;
    v = next;
  }
  const double chebyshev = std::pow(sigma, 0.5 * (i + 1)) * v;

  double binomial = 0.0;
  for (int j = 0; j <= (i + 1) / 2; ++j) {
    binomial += boost::math::binomial_coefficient<double>(static_cast<unsigned>(i + 1 - j), static_cast<unsigned>(j)) *
                std::pow(sigma, j);
  }
  return {chebyshev, binomial};
}

double avg_throughput_equal(double sigma, int beta, int n) {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  const auto z = z_sequence_equal(sigma, beta, n);
  return sigma / n * ratio(z.derivative_at(n), z.at(n));
}

Rational avg_throughput_equal_rational(const Rational& sigma, int beta, int n) {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  if (sigma <= 0) throw InvalidArgument("sigma must be positive");
  std::vector<Rational> z(static_cast<std::size_t>(n) + 1, Rational(1));
  std::vector<Rational> dz(static_cast<std::size_t>(n) + 1, Rational(0));
  auto zat = [&](int k) { return k <= 0 ? Rational(1) : z[static_cast<std::size_t>(k)]; };
  auto dzat = [&](int k) { return k <= 0 ? Rational(0) : dz[static_cast<std::size_t>(k)]; };
  for (int i = 1; i <= n; ++i) {
    const Rational back = zat(i - beta - 1);
    z[static_cast<std::size_t>(i)] = zat(i - 1) + sigma * back;
    dz[static_cast<std::size_t>(i)] = dzat(i - 1) + back + sigma * dzat(i - beta - 1);
  }
  return Rational(sigma * dz[static_cast<std::size_t>(n)] / (n * z[static_cast<std::size_t>(n)]));
}

}  // namespace csmaline
