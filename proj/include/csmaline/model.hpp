#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace csmaline {

// Node indices are 1-based in every public signature that takes a node index;
// vectors indexed by node are 0-based (entry k belongs to node k+1).

struct EqualRates {
  double sigma;
};

struct FairRates {
  double alpha;
};

struct ExplicitRates {
  std::vector<double> rho;
};

using RateAssignment = std::variant<EqualRates, FairRates, ExplicitRates>;

/// n nodes on a line, blocking range beta, and how activation rates are chosen.
class LineNetworkConfig {
 public:
  LineNetworkConfig(int n, int beta, RateAssignment rates);

  static LineNetworkConfig equal(int n, int beta, double sigma) { return {n, beta, EqualRates{sigma}}; }
  static LineNetworkConfig fair(int n, int beta, double alpha) { return {n, beta, FairRates{alpha}}; }
  static LineNetworkConfig explicit_rates(int beta, std::vector<double> rho);

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] int beta() const { return beta_; }
  [[nodiscard]] const RateAssignment& rates() const { return rates_; }

  /// Resolved activation rates rho_1..rho_n (may contain +inf for extreme fair alpha).
  [[nodiscard]] std::vector<double> activation_rates() const;

  [[nodiscard]] bool is_equal() const { return std::holds_alternative<EqualRates>(rates_); }
  [[nodiscard]] bool is_fair() const { return std::holds_alternative<FairRates>(rates_); }

 private:
  int n_;
  int beta_;
  RateAssignment rates_;
};

/// Parses {"n":..,"beta":..,"rates":{"mode":"equal"|"fair"|"explicit", ...}}.
LineNetworkConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const LineNetworkConfig& config);

/// Number of nodes within beta hops of node i (1-based).
int neighbor_count(int n, int beta, int i);
inline int neighbor_count(const LineNetworkConfig& config, int i) {
  return neighbor_count(config.n(), config.beta(), i);
}

/// Bit k of the mask is node k+1.
class FeasibleState {
 public:
  FeasibleState() = default;
  FeasibleState(int n, std::uint64_t bits) : n_(n), bits_(bits) {}

  /// Parses "101" (first character is node 1).
  static FeasibleState from_string(const std::string& s);

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] std::uint64_t bits() const { return bits_; }
  [[nodiscard]] bool active(int node) const { return ((bits_ >> (node - 1)) & 1u) != 0; }
  [[nodiscard]] int active_count() const;
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const FeasibleState&, const FeasibleState&) = default;

 private:
  int n_ = 0;
  std::uint64_t bits_ = 0;
};

/// True iff no two ones in the n low bits of mask are at distance 1..beta.
bool is_feasible(std::uint64_t mask, int beta);
bool is_feasible(const std::string& bits, int beta);

struct EnumerationLimits {
  int max_nodes = 28;
};

/// Feasible-state count of an n-node line (transfer recursion).
std::uint64_t feasible_state_count(int n, int beta);

/// All feasible states ordered by mask value (node 1 least significant),
/// e.g. n=3, beta=1: 000, 100, 010, 001, 101.
class StateSpace {
 public:
  StateSpace(int n, int beta, std::vector<std::uint64_t> masks);

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] int beta() const { return beta_; }
  [[nodiscard]] std::size_t size() const { return masks_.size(); }
  [[nodiscard]] std::span<const std::uint64_t> masks() const { return masks_; }
  [[nodiscard]] FeasibleState state(std::size_t k) const { return {n_, masks_[k]}; }

  /// X_{ik}: 1 iff node i (1-based) is active in state k.
  [[nodiscard]] int incidence(int i, std::size_t k) const {
    return static_cast<int>((masks_[k] >> (i - 1)) & 1u);
  }
  [[nodiscard]] std::vector<std::vector<std::uint8_t>> incidence_matrix() const;

  [[nodiscard]] bool contains(std::uint64_t mask) const;

 private:
  int n_;
  int beta_;
  std::vector<std::uint64_t> masks_;
};

StateSpace enumerate_states(int n, int beta, EnumerationLimits limits = {});
inline StateSpace enumerate_states(const LineNetworkConfig& config, EnumerationLimits limits = {}) {
  return enumerate_states(config.n(), config.beta(), limits);
}

/// The (n-beta) x n banded matrix A; {w : A w <= 1} is the feasible set.
class CapacityMatrix {
 public:
  CapacityMatrix(int n, int beta);

  [[nodiscard]] int rows() const { return n_ - beta_; }
  [[nodiscard]] int cols() const { return n_; }
  [[nodiscard]] int at(int r, int c) const;  // 0-based
  [[nodiscard]] std::uint64_t row_mask(int r) const { return row_masks_[r]; }
  [[nodiscard]] bool admits(std::uint64_t mask) const;
  [[nodiscard]] std::string to_string() const;

 private:
  int n_;
  int beta_;
  std::vector<std::uint64_t> row_masks_;
};

CapacityMatrix capacity_matrix(int n, int beta);
inline CapacityMatrix capacity_matrix(const LineNetworkConfig& config) {
  return capacity_matrix(config.n(), config.beta());
}

}  // namespace csmaline
