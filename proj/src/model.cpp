#include "csmaline/model.hpp"

#include "csmaline/error.hpp"
#include "csmaline/fairness.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

namespace csmaline {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidConfig(std::string(what) + " must be a positive finite number");
  }
}

}  // namespace

LineNetworkConfig::LineNetworkConfig(int n, int beta, RateAssignment rates)
    : n_(n), beta_(beta), rates_(std::move(rates)) {
  if (n < 1) throw InvalidConfig("n must be >= 1");
  if (beta < 0) throw InvalidConfig("beta must be >= 0");
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, EqualRates>) {
          require_positive(r.sigma, "sigma");
        } else if constexpr (std::is_same_v<T, FairRates>) {
          require_positive(r.alpha, "alpha");
        } else {
          if (static_cast<int>(r.rho.size()) != n) throw InvalidConfig("explicit rho must have length n");
          for (double v : r.rho) require_positive(v, "rho_i");
        }
      },
      rates_);
}

LineNetworkConfig LineNetworkConfig::explicit_rates(int beta, std::vector<double> rho) {
  const int n = static_cast<int>(rho.size());
  return {n, beta, ExplicitRates{std::move(rho)}};
}

std::vector<double> LineNetworkConfig::activation_rates() const {
  return std::visit(
      [&](const auto& r) -> std::vector<double> {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, EqualRates>) {
          return std::vector<double>(static_cast<std::size_t>(n_), r.sigma);
        } else if constexpr (std::is_same_v<T, FairRates>) {
          return fair_rates(n_, beta_, r.alpha).rho();
        } else {
          return r.rho;
        }
      },
      rates_);
}

LineNetworkConfig config_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig(std::string("config JSON: ") + e.what());
  }
  if (!j.contains("n") || !j.contains("beta") || !j.contains("rates")) {
    throw InvalidConfig("config JSON needs keys n, beta, rates");
  }
  const int n = j.at("n").get<int>();
  const int beta = j.at("beta").get<int>();
  const auto& r = j.at("rates");
  const auto mode = r.at("mode").get<std::string>();
  if (mode == "equal") return {n, beta, EqualRates{r.at("sigma").get<double>()}};
  if (mode == "fair") return {n, beta, FairRates{r.at("alpha").get<double>()}};
  if (mode == "explicit") return {n, beta, ExplicitRates{r.at("rho").get<std::vector<double>>()}};
  throw InvalidConfig("unknown rates mode '" + mode + "'");
}

std::string config_to_json_text(const LineNetworkConfig& config) {
  nlohmann::json rates;
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, EqualRates>) {
          rates = {{"mode", "equal"}, {"sigma", r.sigma}};
        } else if constexpr (std::is_same_v<T, FairRates>) {
          rates = {{"mode", "fair"}, {"alpha", r.alpha}};
        } else {
          rates = {{"mode", "explicit"}, {"rho", r.rho}};
        }
      },
      config.rates());
  return nlohmann::json{{"n", config.n()}, {"beta", config.beta()}, {"rates", rates}}.dump();
}

int neighbor_count(int n, int beta, int i) {
  if (i < 1 || i > n) {
    throw InvalidArgument("node index " + std::to_string(i) + " out of range 1.." + std::to_string(n));
  }
  return std::min(i - 1, beta) + std::min(n - i, beta);
}

FeasibleState FeasibleState::from_string(const std::string& s) {
  std::uint64_t bits = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] == '1') {
      bits |= std::uint64_t{1} << k;
    } else if (s[k] != '0') {
      throw InvalidArgument("state string must contain only 0/1");
    }
  }
  return {static_cast<int>(s.size()), bits};
}

int FeasibleState::active_count() const { return std::popcount(bits_); }

std::string FeasibleState::to_string() const {
  std::string s(static_cast<std::size_t>(n_), '0');
  for (int k = 0; k < n_; ++k) {
    if ((bits_ >> k) & 1u) s[static_cast<std::size_t>(k)] = '1';
  }
  return s;
}

bool is_feasible(std::uint64_t mask, int beta) {
  // consecutive active nodes must be more than beta positions apart
  while (mask != 0) {
    const int low = std::countr_zero(mask);
    mask &= mask - 1;
    if (mask == 0) break;
    if (std::countr_zero(mask) - low <= beta) return false;
  }
  return true;
}

bool is_feasible(const std::string& bits, int beta) {
  if (bits.size() > 64) throw InvalidArgument("state longer than 64 nodes");
  return is_feasible(FeasibleState::from_string(bits).bits(), beta);
}

std::uint64_t feasible_state_count(int n, int beta) {
  // K(m) = K(m-1) + K(m-beta-1) with K(m) = 1 for m <= 0, saturating at UINT64_MAX
  constexpr std::uint64_t top = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> k(static_cast<std::size_t>(n) + 1, 1);
  for (int m = 1; m <= n; ++m) {
    const std::uint64_t prev = k[static_cast<std::size_t>(m - 1)];
    const std::uint64_t skip = m - beta - 1 >= 0 ? k[static_cast<std::size_t>(m - beta - 1)] : 1;
    k[static_cast<std::size_t>(m)] = prev > top - skip ? top : prev + skip;
  }
  return k[static_cast<std::size_t>(n)];
}

StateSpace::StateSpace(int n, int beta, std::vector<std::uint64_t> masks)
    : n_(n), beta_(beta), masks_(std::move(masks)) {}

std::vector<std::vector<std::uint8_t>> StateSpace::incidence_matrix() const {
  std::vector<std::vector<std::uint8_t>> x(static_cast<std::size_t>(n_), std::vector<std::uint8_t>(masks_.size(), 0));
  for (std::size_t k = 0; k < masks_.size(); ++k) {
    for (int i = 0; i < n_; ++i) x[static_cast<std::size_t>(i)][k] = static_cast<std::uint8_t>((masks_[k] >> i) & 1u);
  }
  return x;
}

bool StateSpace::contains(std::uint64_t mask) const {
  return std::binary_search(masks_.begin(), masks_.end(), mask);
}

StateSpace enumerate_states(int n, int beta, EnumerationLimits limits) {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  if (beta < 0) throw InvalidArgument("beta must be >= 0");
  const std::uint64_t predicted = feasible_state_count(n, beta);
  const std::uint64_t bound = feasible_state_count(limits.max_nodes, 1);
  if (n > limits.max_nodes || n > 64 || predicted > bound) {
    throw EnumerationTooLarge("enumeration of n=" + std::to_string(n) + ", beta=" + std::to_string(beta) + " (" +
                              std::to_string(predicted) + " states) exceeds the cap of " +
                              std::to_string(limits.max_nodes) + " nodes / " + std::to_string(bound) + " states");
  }
  std::vector<std::uint64_t> masks;
  masks.reserve(predicted);
  // Depth-first over the highest active node; each new node sits at least beta+1 above the previous one.
  std::vector<std::pair<std::uint64_t, int>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [mask, next_free] = stack.back();
    stack.pop_back();
    masks.push_back(mask);
    for (int k = next_free; k < n; ++k) stack.emplace_back(mask | (std::uint64_t{1} << k), k + beta + 1);
  }
  std::sort(masks.begin(), masks.end());
  return {n, beta, std::move(masks)};
}

CapacityMatrix::CapacityMatrix(int n, int beta) : n_(n), beta_(beta) {
  if (n < 1 || n > 64) throw InvalidArgument("n must be in 1..64");
  if (beta < 0) throw InvalidArgument("beta must be >= 0");
  if (beta > n - 1) {
    throw InvalidRange("capacity matrix needs beta <= n-1 (got beta=" + std::to_string(beta) +
                       ", n=" + std::to_string(n) + "); use is_feasible directly");
  }
  const std::uint64_t run = beta >= 63 ? ~std::uint64_t{0} : (std::uint64_t{1} << (beta + 1)) - 1;
  for (int r = 0; r < n - beta; ++r) row_masks_.push_back(run << r);
}

int CapacityMatrix::at(int r, int c) const { return static_cast<int>((row_masks_.at(static_cast<std::size_t>(r)) >> c) & 1u); }

bool CapacityMatrix::admits(std::uint64_t mask) const {
  return std::all_of(row_masks_.begin(), row_masks_.end(),
                     [&](std::uint64_t row) { return std::popcount(row & mask) <= 1; });
}

std::string CapacityMatrix::to_string() const {
  std::ostringstream os;
  for (int r = 0; r < rows(); ++r) {
    for (int c = 0; c < n_; ++c) os << at(r, c);
    os << '\n';
  }
  return os.str();
}

CapacityMatrix capacity_matrix(int n, int beta) { return {n, beta}; }

}  // namespace csmaline
