#pragma once

// Brute force over all 2^n activity vectors in exact rationals. Shares no code
// with the library; every analytical path is checked against it.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using Q = boost::multiprecision::cpp_rational;
using Int = boost::multiprecision::cpp_int;

inline bool feasible(std::uint64_t mask, int n, int beta) {
  for (int i = 0; i < n; ++i) {
    if (!((mask >> i) & 1u)) continue;
    for (int j = i + 1; j < n && j - i <= beta; ++j) {
      if ((mask >> j) & 1u) return false;
    }
  }
  return true;
}

struct Solution {
  Q z;
  std::vector<Q> theta;
  std::vector<Q> weights;  // aligned with masks
  std::vector<std::uint64_t> masks;
};

inline Solution solve(int beta, const std::vector<Q>& rho) {
  const int n = static_cast<int>(rho.size());
  Solution s;
  s.z = 0;
  s.theta.assign(rho.size(), Q(0));
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    if (!feasible(m, n, beta)) continue;
    Q w = 1;
    for (int i = 0; i < n; ++i) {
      if ((m >> i) & 1u) w *= rho[static_cast<std::size_t>(i)];
    }
    s.z += w;
    for (int i = 0; i < n; ++i) {
      if ((m >> i) & 1u) s.theta[static_cast<std::size_t>(i)] += w;
    }
    s.masks.push_back(m);
    s.weights.push_back(w);
  }
  for (auto& t : s.theta) t /= s.z;
  return s;
}

inline std::vector<Q> equal(int n, const Q& sigma) { return std::vector<Q>(static_cast<std::size_t>(n), sigma); }

inline std::vector<Q> exact(const std::vector<double>& rho) {
  std::vector<Q> out;
  for (double r : rho) out.emplace_back(r);  // every double is an exact rational
  return out;
}

/// a(i, l) for 1-based i: feasible states with l active nodes that include node i.
inline std::vector<std::vector<Int>> active_counts(int n, int beta) {
  std::vector<std::vector<Int>> a(static_cast<std::size_t>(n) + 1, std::vector<Int>(static_cast<std::size_t>(n) + 1, Int(0)));
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    if (!feasible(m, n, beta)) continue;
    int l = 0;
    for (int i = 0; i < n; ++i) l += static_cast<int>((m >> i) & 1u);
    for (int i = 0; i < n; ++i) {
      if ((m >> i) & 1u) a[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(l)] += 1;
    }
  }
  return a;
}

inline double to_double(const Q& q) { return q.convert_to<double>(); }

inline double rel_err(double got, double want) {
  const double scale = std::abs(want) > 0.0 ? std::abs(want) : 1.0;
  return std::abs(got - want) / scale;
}

inline std::vector<double> random_rates(std::mt19937_64& g, int n, double lo = 0.05, double hi = 20.0) {
  // log-uniform, so both light and heavy nodes appear
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  std::vector<double> r;
  for (int i = 0; i < n; ++i) r.push_back(std::exp(u(g)));
  return r;
}

}  // namespace oracle
