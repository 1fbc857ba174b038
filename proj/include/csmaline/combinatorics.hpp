#pragma once

#include "csmaline/exact.hpp"
#include "csmaline/rational.hpp"

#include <vector>

namespace csmaline {

/// a(i, l, n): number of feasible states of an n-node line with exactly l active
/// nodes, node i among them. Built for one (n, beta).
class ActiveCountTable {
 public:
  ActiveCountTable(int n, int beta, std::vector<std::vector<BigInt>> counts, std::vector<BigInt> level_sizes);

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] int beta() const { return beta_; }
  [[nodiscard]] int max_level() const { return static_cast<int>(level_sizes_.size()) - 1; }

  /// a(i, l, n) for 1-based i; 0 outside the table.
  [[nodiscard]] const BigInt& count(int i, int l) const;
  /// Number of feasible states with exactly l active nodes.
  [[nodiscard]] const BigInt& level_size(int l) const;

 private:
  int n_;
  int beta_;
  std::vector<std::vector<BigInt>> counts_;  // [i-1][l]
  std::vector<BigInt> level_sizes_;          // [l]
};

/// beta = 1: the activity-conditioning recursions
///   a(i,l,n) = a(i-2,l-1,n-2) + a(i-1,l,n-1)      (node 1, for i >= 2)
///   a(1,l,n) = a(1,l-1,n-2) + a(1,l,n-1)          (node n)
/// with a(0,.,.) = 0; beta >= 2: counted over the enumerated states.
ActiveCountTable active_count_table(int n, int beta, EnumerationLimits limits = {});

/// Always counts over the enumerated states (the oracle for the beta = 1 recursion).
ActiveCountTable active_count_table_enumerated(int n, int beta, EnumerationLimits limits = {});

/// theta_i = Z_n^{-1} sum_l a(i,l,n) sigma^l with Z_n = sum_l (#states at level l) sigma^l.
ThroughputVector throughput_from_counts(const ActiveCountTable& table, double sigma);
std::vector<Rational> throughput_from_counts_rational(const ActiveCountTable& table, const Rational& sigma);

/// Z_n as the level polynomial evaluated at sigma.
double z_from_counts(const ActiveCountTable& table, double sigma);

struct OscillationResult {
  bool symmetric;
  bool alternating_decreasing;
};

/// symmetric: |theta_i - theta_{n-i+1}| <= 1e-12 for all i.
/// alternating_decreasing: d_i = (-1)^i (theta_{i+1} - theta_i) > 0 and strictly
/// decreasing for i = 1 .. ceil(n/2) - 1.
OscillationResult oscillation_check(const ThroughputVector& theta);

}  // namespace csmaline
