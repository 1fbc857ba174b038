// Runs every acceptance criterion and prints one PASS/FAIL line each.
#include "csmaline/combinatorics.hpp"
#include "csmaline/error.hpp"
#include "csmaline/exact.hpp"
#include "csmaline/fairness.hpp"
#include "csmaline/recursion.hpp"
#include "csmaline/simulator.hpp"
#include "csmaline/spectral.hpp"
#include "csmaline/sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

using namespace csmaline;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double rel_err(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome triple_path() {
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> u(std::log(0.05), std::log(20.0));
  double worst = 0.0;
  for (int n = 1; n <= 12; ++n) {
    for (int beta = 0; beta <= 4; ++beta) {
      for (int k = 0; k < 50; ++k) {
        std::vector<double> rho(static_cast<std::size_t>(n));
        for (auto& r : rho) r = std::exp(u(g));
        const auto net = LineNetworkConfig::explicit_rates(beta, rho);
        const auto a = throughput_exact(net, Arithmetic::Float);
        const auto b = throughput_recursive(net);
        for (int i = 0; i < n; ++i) worst = std::max(worst, rel_err(b[i], a[i]));
      }
    }
    for (double sigma : {0.1, 1.0, 6.0, 50.0}) {
      const auto net = LineNetworkConfig::equal(n, 1, sigma);
      const auto a = throughput_exact(net, Arithmetic::Float);
      const auto b = throughput_recursive(net);
      const auto c = throughput_from_counts(active_count_table(n, 1), sigma);
      for (int i = 0; i < n; ++i) worst = std::max({worst, rel_err(b[i], a[i]), rel_err(c[i], a[i])});
    }
  }
  return {worst < 1e-10, "max relative error " + fmt("%.2e", worst)};
}

Outcome fairness_grid() {
  double worst = 0.0;
  for (int n = 1; n <= 20; ++n) {
    for (int beta = 0; beta <= n - 1; ++beta) {
      for (double alpha : {0.1, 1.0, 10.0}) {
        worst = std::max(worst, verify_fairness(LineNetworkConfig::fair(n, beta, alpha)).max_deviation_recursive);
      }
    }
  }
  double worst_exact = 0.0;
  for (int n = 1; n <= 10; ++n) {
    for (int beta = 0; beta <= n - 1; ++beta) {
      for (const Rational& alpha : {Rational(1, 10), Rational(1), Rational(10)}) {
        const auto target = fair_throughput_rational(alpha, beta);
        for (const auto& t : throughput_exact_rational(beta, fair_rates_rational(n, beta, alpha))) {
          worst_exact = std::max(worst_exact, std::abs(to_double(t - target)));
        }
      }
    }
  }
  return {worst < 1e-10 && worst_exact < 1e-12,
          "recursion " + fmt("%.2e", worst) + ", exact " + fmt("%.2e", worst_exact)};
}

Outcome fair_constants() {
  double worst = 0.0;
  for (int n = 1; n <= 20; ++n) {
    for (int beta = 0; beta <= n - 1; ++beta) {
      for (double alpha : {0.1, 1.0, 10.0}) {
        const auto v = fair_rates(n, beta, alpha);
        const auto z = z_sequence(std::span<const ScaledReal>(v.scaled()), beta, n);
        for (int i = 0; i <= n - beta; ++i) worst = std::max(worst, rel_err(z.value(i), std::pow(1 + alpha, i)));
      }
    }
  }
  return {worst < 1e-12, "max relative error " + fmt("%.2e", worst)};
}

Outcome fig5_pairing() {
  const auto avg = avg_throughput_equal_rational(Rational(6), 1, 5);
  const auto m = alpha_matching(6.0, 1, 5);
  const bool ok = avg == Rational(1110, 2315) && !m.divergent && std::abs(m.alpha - 11.68) <= 0.01;
  std::ostringstream s;
  s << "average " << avg << ", alpha " << fmt("%.6f", m.alpha);
  return {ok, s.str()};
}

Outcome first_ratio() {
  const auto th = throughput_recursive(LineNetworkConfig::equal(200, 1, 2.0));
  const double q = th[0] / th[1];
  return {std::abs(q - 2.0) < 1e-6, "theta_1/theta_2 = " + fmt("%.12f", q)};
}

Outcome averages() {
  const double finite = avg_throughput_finite(2.0, 1, 100);
  const double limit = avg_throughput_limit(1e4, 1);
  const bool ok = std::abs(finite - 1.0 / 3) < 1e-6 && std::abs(limit - 0.5) < 0.005;
  return {ok, "n=100 average " + fmt("%.12f", finite) + " (gap " + fmt("%.3e", finite - 1.0 / 3) +
                  " to 1/3), limit at 1e4 " + fmt("%.6f", limit)};
}

Outcome oscillation() {
  int bad = 0;
  for (int n : {6, 9, 12, 15}) {
    for (double sigma : {0.5, 1.0, 2.0, 5.0}) {
      const auto r = oscillation_check(throughput_recursive(LineNetworkConfig::equal(n, 1, sigma)));
      bad += (r.symmetric && r.alternating_decreasing) ? 0 : 1;
    }
  }
  return {bad == 0, std::to_string(16 - bad) + "/16 configurations symmetric and alternating-decreasing"};
}

Outcome root_series() {
  double worst = 0.0;
  for (int beta = 1; beta <= 3; ++beta) {
    const double xi = series_threshold(beta);
    for (double sigma : {xi / 2, 4 * xi}) {
      const auto rs = characteristic_roots(sigma, beta);
      const auto rep = series_roots(sigma, beta, 40);
      for (const auto& e : sigma < xi ? rep.small : rep.large) {
        double best = HUGE_VAL;
        for (const auto& root : rs.roots) best = std::min(best, std::abs(root - e.root));
        worst = std::max(worst, best);
      }
    }
  }
  const bool ok = worst < 1e-7 && series_threshold(1) == 0.25;
  return {ok, "max root error " + fmt("%.2e", worst) + ", xi(1) = " + fmt("%.17g", series_threshold(1))};
}

Outcome saturated_sim() {
  const auto start = std::chrono::steady_clock::now();
  const auto net = LineNetworkConfig::equal(5, 1, 1.0);
  const auto rep = simulate(SimConfig{.network = net, .horizon = 1e6});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto want = throughput_exact(net);
  int covered = 0;
  for (std::size_t i = 0; i < want.size(); ++i) covered += rep.theta_hat[i].covers(want[i], 3.0) ? 1 : 0;
  return {covered == 5 && secs < 60.0, std::to_string(covered) + "/5 nodes covered, " + fmt("%.1f", secs) + " s"};
}

Outcome relay_heavy() {
  auto run = [](int n, int beta) {
    return simulate(SimConfig{.network = LineNetworkConfig::equal(n, beta, 1000.0),
                              .mode = RelayMode{.node1_saturated = true},
                              .horizon = 1e6})
        .end_to_end.mean;
  };
  const double three = run(3, 1);
  const double five = run(5, 2);
  const bool ok = std::abs(three - 0.3) <= 0.01 && five >= 1.0 / 6 - 0.01 && five <= 1.0 / 5 + 0.01;
  return {ok, "n=3 beta=1 " + fmt("%.4f", three) + ", n=5 beta=2 " + fmt("%.4f", five)};
}

Outcome fig5_shape() {
  SweepOverrides o;
  o.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const auto out = run_sweep("fig5", o);
  if (!out.complete()) return {false, "sweep incomplete"};
  const auto& t = out.panel("fig5").table;
  std::vector<double> r_fair, fair, fair_hw, equal_at;
  double fair_06 = NAN, equal_06 = NAN;
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    const double r = t.number(k, "r");
    const double e = t.number(k, "end_to_end");
    const bool is_fair = t.rows[k][t.column("scheme")] == "fair";
    if (is_fair) {
      r_fair.push_back(r);
      fair.push_back(e);
      fair_hw.push_back(t.number(k, "half_width"));
    }
    if (std::abs(r - 0.6) < 1e-9) (is_fair ? fair_06 : equal_06) = e;
  }
  const double rstar = stability_threshold(11.68, 1);
  bool monotone = true;
  double plateau_gap = 0.0;
  for (std::size_t k = 0; k < fair.size(); ++k) {
    if (k > 0 && fair[k] < fair[k - 1] - (fair_hw[k] + fair_hw[k - 1])) monotone = false;
    if (r_fair[k] > rstar + 0.05) plateau_gap = std::max(plateau_gap, std::abs(fair[k] - rstar));
  }
  const bool ok = monotone && plateau_gap < 0.02 && fair_06 - equal_06 >= 0.05;
  return {ok, std::string(monotone ? "fair curve non-decreasing" : "fair curve drops") + ", plateau gap " +
                  fmt("%.4f", plateau_gap) + ", at r=0.6 fair " + fmt("%.4f", fair_06) + " equal " + fmt("%.4f", equal_06)};
}

Outcome fig4_structure() {
  const auto out = run_sweep("fig4", {});
  if (!out.complete()) return {false, "sweep incomplete"};
  const auto& t = out.panel("fig4").table;
  std::string detail;
  bool ok = true;
  for (int beta : {1, 2, 4, 5, 9}) {
    const std::string col = "alpha_beta" + std::to_string(beta);
    int divergent = 0;
    for (std::size_t k = 0; k < t.rows.size(); ++k) divergent += std::isinf(t.number(k, col)) ? 1 : 0;
    const bool expect = beta == 2 || beta == 5;
    ok = ok && (divergent > 0) == expect;
    detail += (detail.empty() ? "" : ", ") + ("beta " + std::to_string(beta) + ": " + std::to_string(divergent));
  }
  return {ok, "divergent cells " + detail};
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    std::function<Outcome()> run;
    double time_limit = 0.0;  // seconds, 0 = none
  };
  const std::vector<Criterion> criteria = {
      {"triple-path throughput equivalence", triple_path, 30.0},
      {"fair rates equalize throughput", fairness_grid, 10.0},
      {"fair-rate normalization constants", fair_constants},
      {"equal sigma=6 pairs with alpha=11.68", fig5_pairing},
      {"first-node ratio tends to lambda_0", first_ratio},
      {"finite and limiting average throughput", averages},
      {"symmetric alternating profiles", oscillation},
      {"root series", root_series},
      {"saturated simulation coverage", saturated_sim},
      {"relay heavy-traffic throughput", relay_heavy},
      {"relay r-sweep shape", fig5_shape},
      {"matched-alpha divergence structure", fig4_structure},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (criteria[k].time_limit > 0.0 && secs >= criteria[k].time_limit) {
      o.pass = false;
      o.detail += ", over the time limit";
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %2zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
