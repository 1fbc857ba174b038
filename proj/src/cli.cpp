#include "csmaline/cli.hpp"

#include "csmaline/combinatorics.hpp"
#include "csmaline/csv.hpp"
#include "csmaline/error.hpp"
#include "csmaline/exact.hpp"
#include "csmaline/fairness.hpp"
#include "csmaline/recursion.hpp"
#include "csmaline/simulator.hpp"
#include "csmaline/spectral.hpp"
#include "csmaline/svg.hpp"
#include "csmaline/sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <sstream>

namespace csmaline {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::optional<int> n;
  std::optional<int> beta;
  std::optional<double> sigma;
  std::optional<double> alpha;
  std::vector<double> rho;
  std::optional<double> r;
  std::optional<double> horizon;
  std::optional<double> warmup;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> out;
  std::vector<std::string> format;
  std::optional<std::string> config;

  std::string method = "recursive";
  std::string arithmetic = "auto";
  int terms = 0;
  std::string mode = "saturated";
  bool node1_saturated = false;
  bool trace = false;
  std::optional<double> trace_start;
  std::optional<double> trace_end;
  int batches = 20;
  std::string preset;
};

template <class T>
void fill(std::optional<T>& field, const nlohmann::json& j, const char* key) {
  if (!field && j.contains(key)) field = j.at(key).get<T>();
}

// Values from the JSON config only fill what the command line left unset.
void apply_config(Options& o, const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config " + path + ": " + e.what());
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (!j.is_object()) throw UsageError("config " + path + ": expected a JSON object");
  if (j.contains("rates")) {
    const auto& r = j.at("rates");
    for (const char* key : {"sigma", "alpha", "rho"}) {
      if (r.contains(key) && !j.contains(key)) j[key] = r.at(key);
    }
  }
  try {
    const bool rates_on_cli = o.sigma || o.alpha || !o.rho.empty();
    fill(o.n, j, "n");
    fill(o.beta, j, "beta");
    if (!rates_on_cli) {
      fill(o.sigma, j, "sigma");
      fill(o.alpha, j, "alpha");
      if (j.contains("rho")) o.rho = j.at("rho").get<std::vector<double>>();
    }
    fill(o.r, j, "r");
    fill(o.horizon, j, "horizon");
    fill(o.warmup, j, "warmup");
    fill(o.seed, j, "seed");
    fill(o.jobs, j, "jobs");
    fill(o.out, j, "out");
    if (o.format.empty() && j.contains("format")) {
      const auto& f = j.at("format");
      o.format = f.is_array() ? f.get<std::vector<std::string>>() : std::vector<std::string>{f.get<std::string>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
}

struct Outputs {
  std::filesystem::path dir;
  bool svg = false;
  bool json = false;
  std::vector<std::string> written;

  std::string write(const std::string& name, const std::string& text) {
    std::filesystem::create_directories(dir);
    const auto path = (dir / name).string();
    write_text_file(path, text);
    written.push_back(path);
    return path;
  }

  void table(const std::string& stem, const CsvTable& t) {
    write(stem + ".csv", to_csv(t));
    if (json) write(stem + ".json", table_to_json(t));
  }

  [[nodiscard]] std::string summary() const {
    std::string s;
    for (const auto& w : written) s += (s.empty() ? "" : ", ") + w;
    return s;
  }
};

Outputs make_outputs(const Options& o) {
  Outputs out;
  if (o.out) {
    out.dir = *o.out;
  } else if (const char* env = std::getenv("CSMA_LINE_OUT"); env && *env) {
    out.dir = env;
  } else {
    out.dir = ".";
  }
  for (const auto& f : o.format) {
    if (f == "svg") {
      out.svg = true;
    } else if (f == "json") {
      out.json = true;
    } else if (f != "csv") {
      throw UsageError("--format accepts csv, json, svg");
    }
  }
  return out;
}

int require_beta(const Options& o) {
  if (!o.beta) throw UsageError("--beta is required");
  return *o.beta;
}

double require_sigma(const Options& o) {
  if (!o.sigma) throw UsageError("--sigma is required");
  return *o.sigma;
}

LineNetworkConfig network(const Options& o) {
  const int beta = require_beta(o);
  const int given = static_cast<int>(o.sigma.has_value()) + static_cast<int>(o.alpha.has_value()) + static_cast<int>(!o.rho.empty());
  if (given != 1) throw UsageError("give exactly one of --sigma, --alpha, --rho");
  if (!o.rho.empty()) {
    if (o.n && *o.n != static_cast<int>(o.rho.size())) throw UsageError("--n does not match the length of --rho");
    return LineNetworkConfig::explicit_rates(beta, o.rho);
  }
  if (!o.n) throw UsageError("--n is required");
  if (o.sigma) return LineNetworkConfig::equal(*o.n, beta, *o.sigma);
  return LineNetworkConfig::fair(*o.n, beta, *o.alpha);
}

std::string theta_list(const std::vector<double>& theta) {
  std::ostringstream s;
  s.precision(6);
  for (std::size_t k = 0; k < theta.size(); ++k) s << (k ? "," : "") << theta[k];
  return s.str();
}

PlotSpec node_plot(const std::string& title, const std::vector<double>& theta) {
  PlotSeries s{"theta", {}, theta};
  for (std::size_t k = 0; k < theta.size(); ++k) s.x.push_back(static_cast<double>(k + 1));
  return {title, "node", "throughput", {s}, {}};
}

std::string cmd_exact(const Options& o, Outputs& out) {
  const auto cfg = network(o);
  Arithmetic arith = Arithmetic::Auto;
  if (o.arithmetic == "float") arith = Arithmetic::Float;
  if (o.arithmetic == "rational") arith = Arithmetic::Rational;
  const auto dist = stationary_distribution(cfg, arith);
  CsvTable states{{"state", "active", "probability"}, {}};
  for (std::size_t k = 0; k < dist.space.size(); ++k) {
    const auto s = dist.space.state(k);
    states.add_row({s.to_string(), cell(s.active_count()), cell(dist.probs[k])});
  }
  const auto theta = throughput_exact(cfg, arith);
  const auto rho = cfg.activation_rates();
  CsvTable nodes{{"node", "rho", "theta"}, {}};
  for (int i = 1; i <= cfg.n(); ++i) {
    nodes.add_row({cell(i), cell(rho[static_cast<std::size_t>(i - 1)]), cell(theta[static_cast<std::size_t>(i - 1)])});
  }
  out.table("exact_states", states);
  out.table("exact_throughput", nodes);
  if (out.svg) out.write("exact_throughput.svg", line_plot_svg(node_plot("exact throughput", theta)));
  return "exact: " + std::to_string(dist.space.size()) + " states, Z=" + format_double(dist.z) +
         (dist.exact ? " (rational)" : " (float)") + ", theta=(" + theta_list(theta) + ")";
}

std::string cmd_throughput(const Options& o, Outputs& out) {
  const auto cfg = network(o);
  std::vector<double> theta;
  if (o.method == "recursive") {
    theta = throughput_recursive(cfg);
  } else if (o.method == "exact") {
    theta = throughput_exact(cfg);
  } else if (o.method == "counts") {
    if (!cfg.is_equal()) throw UsageError("--method counts needs --sigma");
    theta = throughput_from_counts(active_count_table(cfg.n(), cfg.beta()), *o.sigma);
  } else {
    throw UsageError("--method accepts recursive, exact, counts");
  }
  const auto rho = cfg.activation_rates();
  CsvTable t{{"node", "rho", "theta"}, {}};
  for (int i = 1; i <= cfg.n(); ++i) {
    t.add_row({cell(i), cell(rho[static_cast<std::size_t>(i - 1)]), cell(theta[static_cast<std::size_t>(i - 1)])});
  }
  out.table("throughput", t);
  if (out.svg) out.write("throughput.svg", line_plot_svg(node_plot("per-node throughput", theta)));
  return "throughput (" + o.method + "): theta=(" + theta_list(theta) + ")";
}

std::string cmd_fair_rates(const Options& o, Outputs& out) {
  if (!o.n) throw UsageError("--n is required");
  if (!o.alpha) throw UsageError("--alpha is required");
  const int beta = require_beta(o);
  const auto cfg = LineNetworkConfig::fair(*o.n, beta, *o.alpha);
  const auto rho = fair_rates(*o.n, beta, *o.alpha).rho();
  const auto theta = throughput_recursive(cfg);
  const double target = fair_throughput(*o.alpha, beta);
  CsvTable t{{"node", "gamma", "rho", "theta", "theta_fair"}, {}};
  for (int i = 1; i <= *o.n; ++i) {
    t.add_row({cell(i), cell(neighbor_count(*o.n, beta, i)), cell(rho[static_cast<std::size_t>(i - 1)]),
               cell(theta[static_cast<std::size_t>(i - 1)]), cell(target)});
  }
  out.table("fair_rates", t);
  if (out.svg) out.write("fair_rates.svg", line_plot_svg(node_plot("throughput under fair rates", theta)));
  return "fair-rates: rho=(" + theta_list(rho) + "), theta_fair=" + format_double(target);
}

std::string cmd_roots(const Options& o, Outputs& out) {
  const double sigma = require_sigma(o);
  const int beta = require_beta(o);
  const auto rs = characteristic_roots(sigma, beta);
  CsvTable t{{"j", "re", "im", "abs", "c_re", "c_im"}, {}};
  for (std::size_t j = 0; j < rs.roots.size(); ++j) {
    t.add_row({cell(static_cast<int>(j)), cell(rs.roots[j].real()), cell(rs.roots[j].imag()), cell(std::abs(rs.roots[j])),
               cell(rs.coeffs[j].real()), cell(rs.coeffs[j].imag())});
  }
  out.table("roots", t);
  std::string summary = "roots: lambda0=" + format_double(rs.dominant()) + ", xi=" + format_double(series_threshold(beta));
  if (o.terms > 0) {
    const auto rep = series_roots(sigma, beta, o.terms);
    CsvTable s{{"kind", "j", "re", "im", "in_domain"}, {}};
    auto add = [&](const std::vector<SeriesExpansion>& list, const char* kind) {
      for (const auto& e : list) {
        s.add_row({kind, cell(e.j), cell(e.root.real()), cell(e.root.imag()), cell(e.in_domain ? 1 : 0)});
      }
    };
    add(rep.small, "small");
    add(rep.large, "large");
    out.table("roots_series", s);
  }
  return summary;
}

std::string cmd_avg(const Options& o, Outputs& out) {
  const double sigma = require_sigma(o);
  const int beta = require_beta(o);
  std::vector<std::string> header{"sigma", "beta", "lambda0", "avg_limit", "alpha_inf"};
  std::vector<std::string> row{cell(sigma), cell(beta), cell(dominant_root(sigma, beta)), cell(avg_throughput_limit(sigma, beta)),
                               cell(alpha_matching(sigma, beta, std::nullopt).value_or_inf())};
  std::string summary = "avg: limit=" + format_double(avg_throughput_limit(sigma, beta));
  if (o.n) {
    const double rec = avg_throughput_equal(sigma, beta, *o.n);
    const auto alpha = alpha_matching(sigma, beta, *o.n);
    for (const char* h : {"n", "avg_recursive", "avg_spectral", "alpha_n"}) header.emplace_back(h);
    row.insert(row.end(), {cell(*o.n), cell(rec), cell(avg_throughput_finite(sigma, beta, *o.n)), cell(alpha.value_or_inf())});
    summary += ", avg_n=" + format_double(rec) + ", alpha_n=" + (alpha.divergent ? std::string("inf") : format_double(alpha.alpha));
  }
  CsvTable t{header, {}};
  t.add_row(row);
  out.table("avg", t);
  return summary;
}

std::string cmd_counts(const Options& o, Outputs& out) {
  if (!o.n) throw UsageError("--n is required");
  const int beta = require_beta(o);
  const auto table = active_count_table(*o.n, beta);
  CsvTable t{{"node", "l", "count"}, {}};
  for (int i = 1; i <= *o.n; ++i) {
    for (int l = 1; l <= table.max_level(); ++l) t.add_row({cell(i), cell(l), table.count(i, l).str()});
  }
  CsvTable levels{{"l", "states"}, {}};
  for (int l = 0; l <= table.max_level(); ++l) levels.add_row({cell(l), table.level_size(l).str()});
  out.table("counts", t);
  out.table("counts_levels", levels);
  std::string summary = "counts: n=" + std::to_string(*o.n) + ", beta=" + std::to_string(beta) + ", levels 0.." +
                        std::to_string(table.max_level());
  if (o.sigma) {
    const auto theta = throughput_from_counts(table, *o.sigma);
    CsvTable th{{"node", "theta"}, {}};
    for (int i = 1; i <= *o.n; ++i) th.add_row({cell(i), cell(theta[static_cast<std::size_t>(i - 1)])});
    out.table("counts_throughput", th);
    summary += ", theta=(" + theta_list(theta) + ")";
  }
  return summary;
}

std::string cmd_simulate(const Options& o, Outputs& out) {
  SimConfig cfg{.network = network(o)};
  if (o.mode == "relay") {
    if (!o.r && !o.node1_saturated) throw UsageError("relay mode needs --r or --node1-saturated");
    cfg.mode = RelayMode{o.r.value_or(0.0), o.node1_saturated};
  } else if (o.mode != "saturated") {
    throw UsageError("--mode accepts saturated, relay");
  }
  if (o.horizon) cfg.horizon = *o.horizon;
  cfg.warmup = o.warmup;
  cfg.seed = o.seed.value_or(1);
  cfg.batches = o.batches;
  cfg.trace = o.trace;
  if (o.trace_start || o.trace_end) cfg.trace_window = TraceWindow{o.trace_start.value_or(0.0), o.trace_end.value_or(cfg.horizon)};

  const auto rep = simulate(cfg);
  const auto rho = cfg.network.activation_rates();
  CsvTable t{{"node", "rho", "theta_hat", "half_width", "std_error", "queue_mean", "queue_max", "queue_final"}, {}};
  std::vector<double> theta;
  for (int i = 0; i < cfg.network.n(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    const auto& e = rep.theta_hat[k];
    const auto& q = rep.queues[k];
    theta.push_back(e.mean);
    t.add_row({cell(i + 1), cell(rho[k]), cell(e.mean), cell(e.half_width), cell(e.std_error), cell(q.mean), cell(q.max), cell(q.final)});
  }
  out.table("simulate", t);
  if (out.json) out.write("simulate_report.json", report_to_json(rep) + "\n");
  if (rep.trace) {
    CsvTable tr{{"t", "node", "event", "queue_len"}, {}};
    for (const auto& r : rep.trace->records) tr.add_row({cell(r.t), cell(r.node), to_string(r.event), cell(r.queue_len)});
    out.write("simulate_trace.csv", to_csv(tr));
    if (out.svg) {
      const double t0 = cfg.trace_window ? cfg.trace_window->start : 0.0;
      const double t1 = cfg.trace_window ? cfg.trace_window->end : cfg.horizon;
      out.write("simulate_trace.svg", barcode_svg(*rep.trace, cfg.network.n(), t0, t1, "activity"));
    }
  }
  if (out.svg) out.write("simulate.svg", line_plot_svg(node_plot("simulated throughput", theta)));
  std::ostringstream s;
  s << "simulate (" << o.mode << "): theta_hat=(" << theta_list(theta) << "), end_to_end=" << rep.end_to_end.mean << " +- "
    << rep.end_to_end.half_width << ", events=" << rep.events;
  return s.str();
}

std::string cmd_sweep(const Options& o, Outputs& out) {
  const auto presets = sweep_presets();
  if (std::find(presets.begin(), presets.end(), o.preset) == presets.end()) {
    throw UsageError("unknown preset '" + o.preset + "' (fig1..fig7)");
  }
  SweepOverrides ov;
  ov.n = o.n;
  ov.beta = o.beta;
  ov.sigma = o.sigma;
  ov.alpha = o.alpha;
  ov.r = o.r;
  ov.horizon = o.horizon;
  ov.warmup = o.warmup;
  ov.seed = o.seed.value_or(1);
  ov.jobs = o.jobs.value_or(1);
  const auto result = run_sweep(o.preset, ov);
  for (const auto& f : write_sweep(result, out.dir.string(), out.svg, out.json)) out.written.push_back(f);
  std::size_t incomplete = 0;
  for (const auto& c : result.cells) incomplete += c.complete ? 0 : 1;
  std::string summary = "sweep " + o.preset + ": " + std::to_string(result.cells.size()) + " cells";
  if (incomplete) {
    std::string first;
    for (const auto& c : result.cells) {
      if (!c.complete) {
        first = c.label + ": " + c.error;
        break;
      }
    }
    throw Error(summary + ", " + std::to_string(incomplete) + " incomplete (" + first + ")");
  }
  return summary;
}

void add_network_options(CLI::App* sub, Options& o, bool rates) {
  sub->add_option("--n", o.n, "number of nodes");
  sub->add_option("--beta", o.beta, "blocking range");
  if (rates) {
    sub->add_option("--sigma", o.sigma, "equal activation rate");
    sub->add_option("--alpha", o.alpha, "fair-rate parameter");
    sub->add_option("--rho", o.rho, "explicit activation rates (comma list)")->delimiter(',');
  }
}

void add_io_options(CLI::App* sub, Options& o) {
  sub->add_option("--out", o.out, "output directory (default $CSMA_LINE_OUT or .)");
  sub->add_option("--format", o.format, "extra outputs besides CSV: json, svg")->delimiter(',');
  sub->add_option("--config", o.config, "JSON file with flag values; flags win");
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Throughput, fairness and simulation of linear CSMA networks", "csma_line"};
  app.require_subcommand(1);

  auto* exact = app.add_subcommand("exact", "stationary distribution by state enumeration");
  add_network_options(exact, o, true);
  exact->add_option("--arithmetic", o.arithmetic, "auto, float or rational")->check(CLI::IsMember({"auto", "float", "rational"}));

  auto* throughput = app.add_subcommand("throughput", "per-node saturated throughput");
  add_network_options(throughput, o, true);
  throughput->add_option("--method", o.method, "recursive, exact or counts");

  auto* fair = app.add_subcommand("fair-rates", "fair activation rates and resulting throughput");
  add_network_options(fair, o, false);
  fair->add_option("--alpha", o.alpha, "fair-rate parameter");

  auto* roots = app.add_subcommand("roots", "roots of the characteristic equation");
  roots->add_option("--sigma", o.sigma, "equal activation rate");
  roots->add_option("--beta", o.beta, "blocking range");
  roots->add_option("--terms", o.terms, "also evaluate the root series with this many terms");

  auto* avg = app.add_subcommand("avg", "average throughput and the matching fair alpha");
  avg->add_option("--sigma", o.sigma, "equal activation rate");
  avg->add_option("--beta", o.beta, "blocking range");
  avg->add_option("--n", o.n, "number of nodes (omit for the n -> infinity limit only)");

  auto* counts = app.add_subcommand("counts", "number of feasible states by active-node count");
  counts->add_option("--n", o.n, "number of nodes");
  counts->add_option("--beta", o.beta, "blocking range");
  counts->add_option("--sigma", o.sigma, "also evaluate throughput at this equal rate");

  auto* sim = app.add_subcommand("simulate", "discrete-event simulation");
  add_network_options(sim, o, true);
  sim->add_option("--mode", o.mode, "saturated or relay");
  sim->add_option("--r", o.r, "Poisson arrival rate at node 1 (relay)");
  sim->add_flag("--node1-saturated", o.node1_saturated, "node 1 always has a packet (relay)");
  sim->add_option("--horizon", o.horizon, "simulated time");
  sim->add_option("--warmup", o.warmup, "discarded initial time (default 10% of horizon)");
  sim->add_option("--seed", o.seed, "random seed");
  sim->add_option("--batches", o.batches, "number of batches for confidence intervals");
  sim->add_flag("--trace", o.trace, "record the event trace");
  sim->add_option("--trace-start", o.trace_start, "trace window start");
  sim->add_option("--trace-end", o.trace_end, "trace window end");

  auto* sweep = app.add_subcommand("sweep", "figure presets fig1..fig7");
  sweep->add_option("preset", o.preset, "fig1 .. fig7")->required();
  add_network_options(sweep, o, true);
  sweep->add_option("--r", o.r, "single arrival rate instead of the preset grid");
  sweep->add_option("--horizon", o.horizon, "simulated time per cell");
  sweep->add_option("--warmup", o.warmup, "discarded initial time per cell");
  sweep->add_option("--seed", o.seed, "base random seed");
  sweep->add_option("--jobs", o.jobs, "cells run concurrently")->check(CLI::PositiveNumber);

  for (auto* sub : {exact, throughput, fair, roots, avg, counts, sim, sweep}) add_io_options(sub, o);

  std::vector<const char*> argv{"csma_line"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return 2;
  }

  auto* chosen = app.get_subcommands().front();
  try {
    if (o.config) apply_config(o, *o.config);
    Outputs outputs = make_outputs(o);
    const std::string name = chosen->get_name();
    std::string summary;
    if (name == "exact") summary = cmd_exact(o, outputs);
    if (name == "throughput") summary = cmd_throughput(o, outputs);
    if (name == "fair-rates") summary = cmd_fair_rates(o, outputs);
    if (name == "roots") summary = cmd_roots(o, outputs);
    if (name == "avg") summary = cmd_avg(o, outputs);
    if (name == "counts") summary = cmd_counts(o, outputs);
    if (name == "simulate") summary = cmd_simulate(o, outputs);
    if (name == "sweep") summary = cmd_sweep(o, outputs);
    out << summary << " -> " << outputs.summary() << "\n";
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << chosen->help();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run_command(args, out, err);
}

}  // namespace csmaline
