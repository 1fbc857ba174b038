#pragma once

#include "csmaline/scaled_real.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace csmaline {

using Complex = std::complex<double>;

/// Roots of lambda^{beta+1} - lambda^beta - sigma = 0 with their partial-fraction
/// weights c_j = lambda_j^{beta+1} / ((beta+1) lambda_j - beta), so Z_i = sum_j c_j lambda_j^i.
struct RootSet {
  double sigma;
  int beta;
  std::vector<Complex> roots;   // roots[0] is the dominant real root
  std::vector<Complex> coeffs;  // c_j aligned with roots

  [[nodiscard]] double dominant() const { return roots.front().real(); }
  [[nodiscard]] double max_residual() const;
};

/// Throws ConvergenceFailure if any root misses |p(lambda)| < 1e-10 (1+sigma)
/// or the dominant root is not strictly separated from the rest.
RootSet characteristic_roots(double sigma, int beta);

/// Dominant root only (safeguarded Newton on [1, min(1+sigma, 1+sigma^{1/(beta+1)})]).
double dominant_root(double sigma, int beta);

ScaledReal z_spectral_scaled(const RootSet& roots, int i);
double z_spectral(double sigma, int beta, int i);
/// One-term asymptote c_0 lambda_0^i.
ScaledReal z_asymptote_scaled(const RootSet& roots, int i);

/// Average throughput sigma/n * P/Q written over the roots.
double avg_throughput_finite(double sigma, int beta, int n);
double avg_throughput_finite(const RootSet& roots, int n);

/// n -> infinity limit (lambda_0 - 1) / ((beta+1) lambda_0 - beta).
double avg_throughput_limit(double sigma, int beta);

/// alpha with alpha/(1+(beta+1)alpha) equal to the equal-rate average throughput;
/// divergent when that average reaches 1/(beta+1).
struct MatchedAlpha {
  double alpha;
  bool divergent;
  [[nodiscard]] double value_or_inf() const;
};

/// n empty means the n -> infinity matching alpha = lambda_0 - 1.
MatchedAlpha alpha_matching(double sigma, int beta, std::optional<int> n);

/// Smallest sigma in (0, sigma_max] at which alpha_matching diverges, by bisection; empty if none.
std::optional<double> alpha_asymptote(int beta, int n, double sigma_max, double tolerance = 1e-12);

enum class SeriesKind { Small, Large };

struct SeriesExpansion {
  SeriesKind kind;
  int j;                      // root index
  std::vector<Complex> terms;  // individual series terms (for Large: terms of 1/lambda_j)
  Complex root;               // the implied root lambda_j
  bool in_domain;             // false = evaluated outside the convergence region
};

struct SeriesReport {
  double xi;  // beta^beta / (beta+1)^{beta+1}
  std::vector<SeriesExpansion> small;
  std::vector<SeriesExpansion> large;
};

double series_threshold(int beta);
SeriesReport series_roots(double sigma, int beta, int terms);

}  // namespace csmaline
