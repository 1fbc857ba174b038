#include "csmaline/cli.hpp"
#include "csmaline/combinatorics.hpp"
#include "csmaline/error.hpp"
#include "csmaline/exact.hpp"
#include "csmaline/fairness.hpp"
#include "csmaline/recursion.hpp"
#include "csmaline/simulator.hpp"
#include "csmaline/spectral.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>
#include <sstream>

namespace py = pybind11;
using namespace csmaline;

namespace {

LineNetworkConfig make_network(int n, int beta, std::optional<double> sigma, std::optional<double> alpha,
                               std::optional<std::vector<double>> rho) {
  const int given = (sigma ? 1 : 0) + (alpha ? 1 : 0) + (rho ? 1 : 0);
  if (given != 1) throw InvalidArgument("give exactly one of sigma, alpha or rho");
  if (rho) {
    if (static_cast<int>(rho->size()) != n) throw InvalidConfig("rho must have length n");
    return LineNetworkConfig::explicit_rates(beta, *rho);
  }
  return sigma ? LineNetworkConfig::equal(n, beta, *sigma) : LineNetworkConfig::fair(n, beta, *alpha);
}

ThroughputVector throughput(int n, int beta, std::optional<double> sigma, std::optional<double> alpha,
                            std::optional<std::vector<double>> rho, const std::string& method) {
  const auto net = make_network(n, beta, sigma, alpha, rho);
  if (method == "recursive") return throughput_recursive(net);
  if (method == "exact") return throughput_exact(net);
  if (method == "counts") {
    if (!sigma) throw InvalidArgument("the counts method needs equal rates");
    return throughput_from_counts(active_count_table(n, beta), *sigma);
  }
  throw InvalidArgument("method must be recursive, exact or counts");
}

std::string simulate_json(int n, int beta, std::optional<double> sigma, std::optional<double> alpha,
                          std::optional<std::vector<double>> rho, std::optional<double> r, bool node1_saturated,
                          double horizon, std::optional<double> warmup, std::uint64_t seed, bool trace) {
  SimConfig cfg{.network = make_network(n, beta, sigma, alpha, rho), .horizon = horizon, .warmup = warmup, .seed = seed, .trace = trace};
  if (r || node1_saturated) cfg.mode = RelayMode{.arrival_rate = r.value_or(0.0), .node1_saturated = node1_saturated};
  return report_to_json(simulate(cfg));
}

}  // namespace

PYBIND11_MODULE(_csmaline, m) {
  m.doc() = "Throughput, fairness and simulation of linear CSMA networks";

  static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base);
  py::register_exception<InvalidConfig>(m, "InvalidConfig", base);
  py::register_exception<InvalidRange>(m, "InvalidRange", base);
  py::register_exception<EnumerationTooLarge>(m, "EnumerationTooLarge", base);
  py::register_exception<ConvergenceFailure>(m, "ConvergenceFailure", base);

  m.def("throughput", &throughput, py::arg("n"), py::arg("beta"), py::kw_only(), py::arg("sigma") = py::none(),
        py::arg("alpha") = py::none(), py::arg("rho") = py::none(), py::arg("method") = "recursive");
  m.def("fair_rates", [](int n, int beta, double alpha) { return fair_rates(n, beta, alpha).rho(); }, py::arg("n"),
        py::arg("beta"), py::arg("alpha"));
  m.def("fair_throughput", &fair_throughput, py::arg("alpha"), py::arg("beta"));
  m.def("z_sequence", [](double sigma, int beta, int upto) {
    const auto z = z_sequence_equal(sigma, beta, upto);
    std::vector<double> out;
    for (int i = 0; i <= upto; ++i) out.push_back(z.value(i));
    return out;
  }, py::arg("sigma"), py::arg("beta"), py::arg("upto"));
  m.def("characteristic_roots", [](double sigma, int beta) { return characteristic_roots(sigma, beta).roots; },
        py::arg("sigma"), py::arg("beta"));
  m.def("avg_throughput", [](double sigma, int beta, std::optional<int> n) {
    return n ? avg_throughput_equal(sigma, beta, *n) : avg_throughput_limit(sigma, beta);
  }, py::arg("sigma"), py::arg("beta"), py::arg("n") = py::none());
  m.def("alpha_matching", [](double sigma, int beta, std::optional<int> n) {
    return alpha_matching(sigma, beta, n).value_or_inf();
  }, py::arg("sigma"), py::arg("beta"), py::arg("n") = py::none());
  m.def("oscillation_check", [](const ThroughputVector& theta) {
    const auto r = oscillation_check(theta);
    return py::make_tuple(r.symmetric, r.alternating_decreasing);
  }, py::arg("theta"));
  m.def("stability_threshold", &stability_threshold, py::arg("alpha"), py::arg("beta"));
  m.def("_simulate_json", &simulate_json, py::arg("n"), py::arg("beta"), py::kw_only(), py::arg("sigma") = py::none(),
        py::arg("alpha") = py::none(), py::arg("rho") = py::none(), py::arg("r") = py::none(),
        py::arg("node1_saturated") = false, py::arg("horizon") = 1e5, py::arg("warmup") = py::none(),
        py::arg("seed") = 1, py::arg("trace") = false, py::call_guard<py::gil_scoped_release>());
  m.def("run_command", [](const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int status = run_command(args, out, err);
    return py::make_tuple(status, out.str(), err.str());
  }, py::arg("args"));
}
