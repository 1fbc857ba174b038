#include "csmaline/spectral.hpp"

#include "csmaline/error.hpp"
#include "csmaline/recursion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace csmaline {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

Complex ipow(Complex x, int k) {
  Complex r(1.0, 0.0);
  while (k > 0) {
    if (k & 1) r *= x;
    x *= x;
    k >>= 1;
  }
  return r;
}

double ipow(double x, int k) {
  double r = 1.0;
  while (k > 0) {
    if (k & 1) r *= x;
    x *= x;
    k >>= 1;
  }
  return r;
}

Complex char_poly(Complex x, double sigma, int beta) { return ipow(x, beta) * (x - 1.0) - sigma; }

Complex char_poly_derivative(Complex x, int beta) {
  if (beta == 0) return {1.0, 0.0};
  return ipow(x, beta - 1) * ((beta + 1.0) * x - static_cast<double>(beta));
}

// coefficients low -> high
std::vector<Complex> char_coeffs(double sigma, int beta) {
  std::vector<Complex> a(static_cast<std::size_t>(beta) + 2, Complex(0.0));
  a[0] = -sigma;
  a[static_cast<std::size_t>(beta)] += -1.0;
  a[static_cast<std::size_t>(beta) + 1] = 1.0;
  return a;
}

// divide by (x - root); coefficients low -> high
std::vector<Complex> deflate(const std::vector<Complex>& a, Complex root) {
  const std::size_t m = a.size() - 1;
  std::vector<Complex> q(m);
  Complex carry = a[m];
  for (std::size_t k = m; k-- > 0;) {
    q[k] = carry;
    carry = a[k] + carry * root;
  }
  return q;
}

// Laguerre iteration on the polynomial a (low -> high).
Complex laguerre(const std::vector<Complex>& a, Complex x) {
  const int m = static_cast<int>(a.size()) - 1;
  static constexpr double kFrac[] = {0.0, 0.5, 0.25, 0.75, 0.13, 0.38, 0.62, 0.88, 1.0};
  constexpr int kMaxIter = 800;
  for (int iter = 1; iter <= kMaxIter; ++iter) {
    Complex b = a[static_cast<std::size_t>(m)];
    double err = std::abs(b);
    Complex d(0.0);
    Complex f(0.0);
    const double abx = std::abs(x);
    for (int j = m - 1; j >= 0; --j) {
      f = x * f + d;
      d = x * d + b;
      b = x * b + a[static_cast<std::size_t>(j)];
      err = std::abs(b) + abx * err;
    }
    err *= kEps;
    if (std::abs(b) <= err) return x;
    const Complex g = d / b;
    const Complex g2 = g * g;
    const Complex h = g2 - 2.0 * f / b;
    const Complex sq = std::sqrt(static_cast<double>(m - 1) * (static_cast<double>(m) * h - g2));
    Complex gp = g + sq;
    const Complex gm = g - sq;
    if (std::abs(gp) < std::abs(gm)) gp = gm;
    const Complex dx = std::abs(gp) > 0.0
                           ? static_cast<double>(m) / gp
                           : std::polar(1.0 + abx, static_cast<double>(iter));
    const Complex x1 = x - dx;
    if (x1 == x) return x;
    if (iter % 10 != 0) {
      x = x1;
    } else {
      x -= kFrac[(iter / 10) % 9] * dx;
    }
  }
  throw ConvergenceFailure("Laguerre iteration did not converge");
}

Complex newton_polish(Complex x, double sigma, int beta) {
  for (int iter = 0; iter < 50; ++iter) {
    const Complex fx = char_poly(x, sigma, beta);
    const Complex dfx = char_poly_derivative(x, beta);
    if (std::abs(dfx) == 0.0) break;
    const Complex step = fx / dfx;
    x -= step;
    if (std::abs(step) <= 4.0 * kEps * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

}  // namespace

double RootSet::max_residual() const {
  double r = 0.0;
  for (const auto& x : roots) r = std::max(r, std::abs(char_poly(x, sigma, beta)));
  return r;
}

double dominant_root(double sigma, int beta) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("sigma must be positive and finite");
  if (beta < 0) throw InvalidArgument("beta must be >= 0");
  if (beta == 0) return 1.0 + sigma;
  auto f = [&](double x) { return ipow(x, beta) * (x - 1.0) - sigma; };
  auto df = [&](double x) { return ipow(x, beta - 1) * ((beta + 1.0) * x - beta); };
  double lo = 1.0;
  double hi = std::min(1.0 + sigma, 1.0 + std::pow(sigma, 1.0 / (beta + 1)));
  double x = hi;
  for (int iter = 0; iter < 500; ++iter) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (fx > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    double next = x - fx / df(x);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 2.0 * kEps * x) return next;
    x = next;
  }
  throw ConvergenceFailure("dominant root: Newton did not converge for sigma=" + std::to_string(sigma));
}

RootSet characteristic_roots(double sigma, int beta) {
  const double lambda0 = dominant_root(sigma, beta);
  RootSet set{sigma, beta, {Complex(lambda0, 0.0)}, {}};

  std::vector<Complex> poly = deflate(char_coeffs(sigma, beta), Complex(lambda0, 0.0));
  while (poly.size() > 1) {
    // start inside the disc |x| < lambda0 at a generic point so Laguerre does not stall on the real axis
    Complex x = laguerre(poly, Complex(0.1 * lambda0, 0.3 * lambda0));
    x = newton_polish(x, sigma, beta);
    if (std::abs(x.imag()) <= 1e-14 * std::max(1.0, std::abs(x))) x = Complex(x.real(), 0.0);
    set.roots.push_back(x);
    poly = deflate(poly, x);
  }
  std::sort(set.roots.begin() + 1, set.roots.end(), [](Complex a, Complex b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
    return std::arg(a) > std::arg(b);
  });

  const double tol = 1e-10 * (1.0 + sigma);
  for (const auto& x : set.roots) {
    if (!(std::abs(char_poly(x, sigma, beta)) < tol)) {
      throw ConvergenceFailure("characteristic root residual above tolerance for sigma=" + std::to_string(sigma) +
                               ", beta=" + std::to_string(beta));
    }
  }
  for (std::size_t j = 1; j < set.roots.size(); ++j) {
    if (!(std::abs(set.roots[j]) < lambda0)) throw ConvergenceFailure("dominant root not separated");
    for (std::size_t k = 0; k < j; ++k) {
      if (std::abs(set.roots[j] - set.roots[k]) <= 1e-8) throw ConvergenceFailure("characteristic roots not distinct");
    }
  }
  for (const auto& x : set.roots) {
    set.coeffs.push_back(ipow(x, beta + 1) / ((beta + 1.0) * x - static_cast<double>(beta)));
  }
  return set;
}

ScaledReal z_spectral_scaled(const RootSet& roots, int i) {
  if (i < 0) throw InvalidArgument("i must be >= 0");
  const double lambda0 = roots.dominant();
  Complex sum(0.0);
  for (std::size_t j = 0; j < roots.roots.size(); ++j) sum += roots.coeffs[j] * ipow(roots.roots[j] / lambda0, i);
  if (std::abs(sum.imag()) > 1e-9 * std::abs(sum.real())) {
    throw ConvergenceFailure("spectral Z has a non-negligible imaginary part");
  }
  if (i * std::log(lambda0) < 690.0) return ScaledReal(sum.real() * ipow(lambda0, i));
  return ScaledReal::from_log(i * std::log(lambda0)) * ScaledReal(sum.real());
}

ScaledReal z_asymptote_scaled(const RootSet& roots, int i) {
  const double lambda0 = roots.dominant();
  const double c0 = roots.coeffs.front().real();
  if (i * std::log(lambda0) < 690.0) return ScaledReal(c0 * ipow(lambda0, i));
  return ScaledReal::from_log(i * std::log(lambda0)) * ScaledReal(c0);
}

double z_spectral(double sigma, int beta, int i) { return z_spectral_scaled(characteristic_roots(sigma, beta), i).to_double(); }

double avg_throughput_finite(const RootSet& roots, int n) {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  const int beta = roots.beta;
  const double lambda0 = roots.dominant();
  // P and Q both carry lambda_j^{n+1}; divide through by lambda_0^{n+1}
  Complex p(0.0);
  Complex q(0.0);
  for (const auto& x : roots.roots) {
    const Complex d = (beta + 1.0) * x - static_cast<double>(beta);
    const Complex scaled = ipow(x / lambda0, n + 1);
    p += scaled / d * ((n + beta + 1.0) / d - (beta + 1.0) * x / (d * d));
    q += scaled * ipow(x, beta) / d;
  }
  return roots.sigma / n * p.real() / q.real();
}

double avg_throughput_finite(double sigma, int beta, int n) {
  return avg_throughput_finite(characteristic_roots(sigma, beta), n);
}

double avg_throughput_limit(double sigma, int beta) {
  const double lambda0 = dominant_root(sigma, beta);
  return (lambda0 - 1.0) / ((beta + 1.0) * lambda0 - beta);
}

double MatchedAlpha::value_or_inf() const { return divergent ? std::numeric_limits<double>::infinity() : alpha; }

MatchedAlpha alpha_matching(double sigma, int beta, std::optional<int> n) {
  if (!n) return {dominant_root(sigma, beta) - 1.0, false};
  const double t = avg_throughput_equal(sigma, beta, *n);
  const double gap = 1.0 - (beta + 1.0) * t;
  if (gap <= 0.0) return {std::numeric_limits<double>::infinity(), true};
  return {t / gap, false};
}

std::optional<double> alpha_asymptote(int beta, int n, double sigma_max, double tolerance) {
  if (!alpha_matching(sigma_max, beta, n).divergent) return std::nullopt;
  double lo = 0.0;
  double hi = sigma_max;
  while (hi - lo > tolerance * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= 0.0) break;
    (alpha_matching(mid, beta, n).divergent ? hi : lo) = mid;
  }
  return hi;
}

double series_threshold(int beta) {
  if (beta < 0) throw InvalidArgument("beta must be >= 0");
  if (beta == 0) return 1.0;  // 0^0 / 1^1
  return std::pow(static_cast<double>(beta) / (beta + 1.0), beta) / (beta + 1.0);
}

namespace {

// (x)_{l-1} / l!, accumulated as a product of ratios to avoid Gamma overflow
double pochhammer_over_factorial(double x, int l) {
  double c = 1.0 / l;
  for (int k = 0; k <= l - 2; ++k) c *= (x + k) / (k + 1.0);
  return c;
}

}  // namespace

SeriesReport series_roots(double sigma, int beta, int terms) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  if (beta < 0) throw InvalidArgument("beta must be >= 0");
  if (terms < 1) throw InvalidArgument("terms must be >= 1");
  SeriesReport report;
  report.xi = series_threshold(beta);
  const bool small_ok = sigma <= report.xi;
  const bool large_ok = sigma >= report.xi;

  {
    SeriesExpansion s{SeriesKind::Small, 0, {}, Complex(1.0), small_ok};
    for (int l = 1; l <= terms; ++l) {
      const double sign = (l % 2 == 1) ? 1.0 : -1.0;
      s.terms.emplace_back(sign * pochhammer_over_factorial(static_cast<double>(beta) * l, l) * std::pow(sigma, l));
      s.root += s.terms.back();
    }
    report.small.push_back(std::move(s));
  }
  for (int j = 1; j <= beta; ++j) {
    const Complex w = std::polar(std::pow(sigma, 1.0 / beta), 2.0 * std::numbers::pi * (j - 0.5) / beta);
    SeriesExpansion s{SeriesKind::Small, j, {}, Complex(0.0), small_ok};
    for (int l = 1; l <= terms; ++l) {
      s.terms.push_back(pochhammer_over_factorial(static_cast<double>(l) / beta, l) * ipow(w, l));
      s.root += s.terms.back();
    }
    report.small.push_back(std::move(s));
  }
  for (int j = 0; j <= beta; ++j) {
    const Complex v = std::polar(std::pow(sigma, 1.0 / (beta + 1)), 2.0 * std::numbers::pi * j / (beta + 1));
    const Complex v_inv = 1.0 / v;
    SeriesExpansion s{SeriesKind::Large, j, {}, Complex(0.0), large_ok};
    Complex inverse(0.0);
    for (int l = 1; l <= terms; ++l) {
      s.terms.push_back(pochhammer_over_factorial(-static_cast<double>(l) / (beta + 1), l) * ipow(v_inv, l));
      inverse += s.terms.back();
    }
    s.root = 1.0 / inverse;
    report.large.push_back(std::move(s));
  }
  return report;
}

}  // namespace csmaline
