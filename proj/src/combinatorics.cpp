#include "csmaline/combinatorics.hpp"

#include "csmaline/error.hpp"

#include <bit>
#include <cmath>

namespace csmaline {

namespace {

const BigInt kZero(0);

std::vector<BigInt> levels_from_counts(const std::vector<std::vector<BigInt>>& counts, int max_level) {
  std::vector<BigInt> levels(static_cast<std::size_t>(max_level) + 1, BigInt(0));
  levels[0] = 1;
  for (int l = 1; l <= max_level; ++l) {
    BigInt total(0);
    for (const auto& row : counts) total += row[static_cast<std::size_t>(l)];
    levels[static_cast<std::size_t>(l)] = total / l;  // each state at level l is seen once per active node
  }
  return levels;
}

}  // namespace

ActiveCountTable::ActiveCountTable(int n, int beta, std::vector<std::vector<BigInt>> counts,
                                   std::vector<BigInt> level_sizes)
    : n_(n), beta_(beta), counts_(std::move(counts)), level_sizes_(std::move(level_sizes)) {}

const BigInt& ActiveCountTable::count(int i, int l) const {
  if (i < 1 || i > n_ || l < 0 || l > max_level()) return kZero;
  return counts_[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(l)];
}

const BigInt& ActiveCountTable::level_size(int l) const {
  if (l < 0 || l > max_level()) return kZero;
  return level_sizes_[static_cast<std::size_t>(l)];
}

ActiveCountTable active_count_table_enumerated(int n, int beta, EnumerationLimits limits) {
  const StateSpace space = enumerate_states(n, beta, limits);
  const int max_level = (n + beta) / (beta + 1);
  std::vector<std::vector<BigInt>> counts(static_cast<std::size_t>(n),
                                          std::vector<BigInt>(static_cast<std::size_t>(max_level) + 1, BigInt(0)));
  std::vector<BigInt> levels(static_cast<std::size_t>(max_level) + 1, BigInt(0));
  for (std::uint64_t m : space.masks()) {
    const int l = std::popcount(m);
    levels[static_cast<std::size_t>(l)] += 1;
    for (int i = 0; i < n; ++i) {
      if ((m >> i) & 1u) counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] += 1;
    }
  }
  return {n, beta, std::move(counts), std::move(levels)};
}

ActiveCountTable active_count_table(int n, int beta, EnumerationLimits limits) {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  if (beta < 0) throw InvalidArgument("beta must be >= 0");
  if (beta != 1) return active_count_table_enumerated(n, beta, limits);

  // tables[m][i][l] for lines of m = 0..n nodes; i runs 0..m with a(0,.,.) = 0
  const int max_level = (n + 1) / 2;
  const auto width = static_cast<std::size_t>(max_level) + 1;
  std::vector<std::vector<std::vector<BigInt>>> tables(static_cast<std::size_t>(n) + 1);
  auto a = [&](int i, int l, int m) -> BigInt {
    if (m < 1 || i < 1 || i > m || l < 1 || l > max_level) return BigInt(0);
    return tables[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)][static_cast<std::size_t>(l)];
  };
  for (int m = 1; m <= n; ++m) {
    auto& t = tables[static_cast<std::size_t>(m)];
    t.assign(static_cast<std::size_t>(m) + 1, std::vector<BigInt>(width, BigInt(0)));
    for (int l = 1; l <= max_level; ++l) {
      // node 1: only {1} when m <= 2, otherwise condition on node m
      t[1][static_cast<std::size_t>(l)] = m <= 2 ? BigInt(l == 1 ? 1 : 0) : a(1, l - 1, m - 2) + a(1, l, m - 1);
      for (int i = 2; i <= m; ++i) {
        BigInt v = a(i - 1, l, m - 1);
        // node 1 active: node 2 blocked, the rest is a line of m-2 nodes (or nothing left)
        if (i >= 3) v += a(i - 2, l - 1, m - 2);
        t[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] = v;
      }
    }
  }
  std::vector<std::vector<BigInt>> counts(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    counts[static_cast<std::size_t>(i - 1)].assign(width, BigInt(0));
    for (int l = 1; l <= max_level; ++l) counts[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(l)] = a(i, l, n);
  }
  auto levels = levels_from_counts(counts, max_level);
  return {n, beta, std::move(counts), std::move(levels)};
}

double z_from_counts(const ActiveCountTable& table, double sigma) {
  double z = 0.0;
  for (int l = table.max_level(); l >= 0; --l) z = z * sigma + table.level_size(l).convert_to<double>();
  return z;
}

ThroughputVector throughput_from_counts(const ActiveCountTable& table, double sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  const double z = z_from_counts(table, sigma);
  ThroughputVector theta;
  for (int i = 1; i <= table.n(); ++i) {
    double num = 0.0;
    for (int l = table.max_level(); l >= 1; --l) num = (num + table.count(i, l).convert_to<double>()) * sigma;
    theta.push_back(num / z);
  }
  return theta;
}

std::vector<Rational> throughput_from_counts_rational(const ActiveCountTable& table, const Rational& sigma) {
  Rational z(0);
  for (int l = table.max_level(); l >= 0; --l) z = z * sigma + Rational(table.level_size(l));
  std::vector<Rational> theta;
  for (int i = 1; i <= table.n(); ++i) {
    Rational num(0);
    for (int l = table.max_level(); l >= 1; --l) num = (num + Rational(table.count(i, l))) * sigma;
    theta.emplace_back(num / z);
  }
  return theta;
}

OscillationResult oscillation_check(const ThroughputVector& theta) {
  const int n = static_cast<int>(theta.size());
  OscillationResult r{true, true};
  for (int i = 0; i < n; ++i) {
    if (std::abs(theta[static_cast<std::size_t>(i)] - theta[static_cast<std::size_t>(n - 1 - i)]) > 1e-12) {
      r.symmetric = false;
    }
  }
  const int last = (n + 1) / 2 - 1;
  if (last < 1) {
    r.alternating_decreasing = false;
    return r;
  }
  double prev = 0.0;
  for (int i = 1; i <= last; ++i) {
    const double diff = theta[static_cast<std::size_t>(i)] - theta[static_cast<std::size_t>(i - 1)];
    const double d = (i % 2 == 0 ? 1.0 : -1.0) * diff;
    if (!(d > 0.0) || (i > 1 && !(d < prev))) {
      r.alternating_decreasing = false;
      break;
    }
    prev = d;
  }
  return r;
}

}  // namespace csmaline
