#include "csmaline/sweep.hpp"

#include "csmaline/error.hpp"
#include "csmaline/fairness.hpp"
#include "csmaline/recursion.hpp"
#include "csmaline/simulator.hpp"
#include "csmaline/spectral.hpp"
#include "csmaline/svg.hpp"

#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <thread>

namespace csmaline {

namespace {

using Rows = std::vector<std::vector<std::string>>;

struct CellDef {
  std::string label;
  std::vector<std::string> panels;
  std::function<std::vector<Rows>(std::uint64_t seed)> run;  // one Rows per panel
};

struct PanelDef {
  std::string name;
  std::vector<std::string> header;
  std::function<std::string(const CsvTable&)> plot;
};

struct Plan {
  std::vector<PanelDef> panels;
  std::vector<CellDef> cells;
};

const std::vector<double> kUnfairSigmas{0.5, 1.0, 2.0, 5.0, 10.0, 100.0};
const std::vector<int> kAverageBetas{1, 2, 4, 5, 9};
constexpr double kPairedSigma = 6.0;
constexpr double kPairedAlpha = 11.68;
constexpr double kTraceRate = 0.47;

std::vector<double> sigma_axis() {
  std::vector<double> s;
  for (int k = 1; k <= 200; ++k) s.push_back(k / 10.0);
  return s;
}

template <class T>
std::vector<T> pick(const std::optional<T>& o, std::vector<T> preset) {
  return o ? std::vector<T>{*o} : preset;
}

std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::uint64_t cell_seed(std::uint64_t base, std::size_t index) {
  return base + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1);
}

// Series of y against x, one per distinct value of the `group` column.
std::string grouped_plot(const CsvTable& t, const std::string& group, const std::string& x, const std::string& y,
                         const std::string& title, const std::string& xlabel, const std::string& ylabel) {
  PlotSpec spec{title, xlabel, ylabel, {}, {}};
  std::map<std::string, std::size_t> index;
  const auto g = t.column(group);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& key = t.rows[r][g];
    auto [it, fresh] = index.emplace(key, spec.series.size());
    if (fresh) spec.series.push_back({group + "=" + key, {}, {}});
    spec.series[it->second].x.push_back(t.number(r, x));
    spec.series[it->second].y.push_back(t.number(r, y));
  }
  return line_plot_svg(spec);
}

Plan unfair_plan(const std::string& preset, const std::vector<int>& ns, const std::vector<int>& betas,
                 const std::vector<double>& sigmas, bool panel_by_n) {
  Plan plan;
  for (int n : ns) {
    for (int beta : betas) {
      const std::string name = preset + (panel_by_n ? "_n" + std::to_string(n) : "_beta" + std::to_string(beta));
      const std::string title = "n=" + std::to_string(n) + ", beta=" + std::to_string(beta);
      plan.panels.push_back({name, {"sigma", "node", "theta"}, [title](const CsvTable& t) {
                               return grouped_plot(t, "sigma", "node", "theta", title, "node", "throughput");
                             }});
      for (double sigma : sigmas) {
        plan.cells.push_back({name + " sigma=" + format_double(sigma), {name}, [=](std::uint64_t) {
                                const auto theta = throughput_recursive(LineNetworkConfig::equal(n, beta, sigma));
                                Rows rows;
                                for (int i = 1; i <= n; ++i) {
                                  rows.push_back({cell(sigma), cell(i), cell(theta[static_cast<std::size_t>(i - 1)])});
                                }
                                return std::vector<Rows>{rows};
                              }});
      }
    }
  }
  return plan;
}

Plan limit_plan(const std::vector<int>& betas, const std::vector<double>& sigmas) {
  Plan plan;
  plan.panels.push_back({"fig3", {"sigma", "beta", "lambda0", "avg_limit", "alpha"}, [](const CsvTable& t) {
                           return grouped_plot(t, "beta", "sigma", "alpha", "n -> infinity", "sigma", "alpha(sigma)");
                         }});
  for (double sigma : sigmas) {
    plan.cells.push_back({"fig3 sigma=" + format_double(sigma), {"fig3"}, [=](std::uint64_t) {
                            Rows rows;
                            for (int beta : betas) {
                              rows.push_back({cell(sigma), cell(beta), cell(dominant_root(sigma, beta)),
                                              cell(avg_throughput_limit(sigma, beta)),
                                              cell(alpha_matching(sigma, beta, std::nullopt).value_or_inf())});
                            }
                            return std::vector<Rows>{rows};
                          }});
  }
  return plan;
}

Plan matching_plan(int n, const std::vector<int>& betas, const std::vector<double>& sigmas) {
  Plan plan;
  std::vector<std::string> header{"sigma"};
  for (int beta : betas) header.push_back("alpha_beta" + std::to_string(beta));
  plan.panels.push_back({"fig4", header, [n, header](const CsvTable& t) {
                           PlotSpec spec{"n=" + std::to_string(n), "sigma", "alpha_n(sigma)", {}, {}};
                           for (std::size_t c = 1; c < header.size(); ++c) {
                             PlotSeries s{header[c].substr(6), {}, {}};
                             for (std::size_t r = 0; r < t.rows.size(); ++r) {
                               s.x.push_back(t.number(r, "sigma"));
                               s.y.push_back(t.number(r, header[c]));
                             }
                             spec.series.push_back(std::move(s));
                           }
                           return line_plot_svg(spec);
                         }});
  for (double sigma : sigmas) {
    plan.cells.push_back({"fig4 sigma=" + format_double(sigma), {"fig4"}, [=](std::uint64_t) {
                            std::vector<std::string> row{cell(sigma)};
                            for (int beta : betas) row.push_back(cell(alpha_matching(sigma, beta, n).value_or_inf()));
                            return std::vector<Rows>{Rows{row}};
                          }});
  }
  return plan;
}

SimConfig relay_config(const LineNetworkConfig& net, double r, const SweepOverrides& o, double default_horizon) {
  SimConfig cfg{.network = net};
  cfg.mode = RelayMode{r, false};
  cfg.horizon = o.horizon.value_or(default_horizon);
  cfg.warmup = o.warmup;
  return cfg;
}

Plan relay_plan(const SweepOverrides& o) {
  const int n = o.n.value_or(5);
  const int beta = o.beta.value_or(1);
  const double sigma = o.sigma.value_or(kPairedSigma);
  const double alpha = o.alpha.value_or(kPairedAlpha);
  std::vector<double> rs;
  for (int k = 1; k <= 16; ++k) rs.push_back(k / 20.0);
  rs = pick(o.r, rs);

  Plan plan;
  const double threshold = stability_threshold(alpha, beta);
  plan.panels.push_back(
      {"fig5",
       {"scheme", "r", "end_to_end", "half_width", "saturated_theta_n"},
       [threshold](const CsvTable& t) {
         PlotSpec spec{"end-to-end throughput", "arrival rate r", "throughput", {}, {{threshold, "r*"}}};
         for (const std::string scheme : {"equal", "fair"}) {
           PlotSeries s{scheme, {}, {}, scheme == "equal"};
           for (std::size_t r = 0; r < t.rows.size(); ++r) {
             if (t.rows[r][t.column("scheme")] != scheme) continue;
             s.x.push_back(t.number(r, "r"));
             s.y.push_back(t.number(r, "end_to_end"));
           }
           spec.series.push_back(std::move(s));
         }
         return line_plot_svg(spec);
       }});
  for (const std::string scheme : {"equal", "fair"}) {
    const auto net = scheme == "equal" ? LineNetworkConfig::equal(n, beta, sigma) : LineNetworkConfig::fair(n, beta, alpha);
    for (double r : rs) {
      plan.cells.push_back({"fig5 " + scheme + " r=" + format_double(r), {"fig5"}, [=](std::uint64_t seed) {
                              SimConfig cfg = relay_config(net, r, o, 2e5);
                              cfg.seed = seed;
                              const auto rep = simulate_relay(cfg);
                              const double sat = throughput_recursive(net).back();
                              return std::vector<Rows>{
                                  Rows{{scheme, cell(r), cell(rep.end_to_end.mean), cell(rep.end_to_end.half_width), cell(sat)}}};
                            }});
    }
  }
  return plan;
}

Rows trace_rows(const Trace& trace) {
  Rows rows;
  rows.reserve(trace.records.size());
  for (const auto& rec : trace.records) rows.push_back({cell(rec.t), cell(rec.node), to_string(rec.event), cell(rec.queue_len)});
  return rows;
}

Trace trace_from_table(const CsvTable& t) {
  Trace trace;
  const auto ev = t.column("event");
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& e = t.rows[r][ev];
    const TraceEvent kind = e == "on" ? TraceEvent::On : e == "off" ? TraceEvent::Off : e == "arrive" ? TraceEvent::Arrive : TraceEvent::Depart;
    trace.records.push_back({t.number(r, "t"), static_cast<int>(t.number(r, "node")), kind,
                             static_cast<std::int64_t>(t.number(r, "queue_len"))});
  }
  return trace;
}

Plan barcode_plan(const SweepOverrides& o) {
  const int n = o.n.value_or(5);
  const int beta = o.beta.value_or(1);
  const double r = o.r.value_or(kTraceRate);
  const double horizon = o.horizon.value_or(1e4);
  const TraceWindow window{horizon - 100.0 > 0.0 ? horizon - 100.0 : 0.0, horizon};
  Plan plan;
  for (const std::string scheme : {"equal", "fair"}) {
    const auto net = scheme == "equal" ? LineNetworkConfig::equal(n, beta, o.sigma.value_or(kPairedSigma))
                                       : LineNetworkConfig::fair(n, beta, o.alpha.value_or(kPairedAlpha));
    const std::string name = "fig6_" + scheme;
    plan.panels.push_back({name, {"t", "node", "event", "queue_len"}, [=](const CsvTable& t) {
                             return barcode_svg(trace_from_table(t), n, window.start, window.end, scheme + " rates, r=" + short_number(r));
                           }});
    plan.cells.push_back({name, {name}, [=](std::uint64_t seed) {
                            SimConfig cfg = relay_config(net, r, o, 1e4);
                            cfg.seed = seed;
                            cfg.trace = true;
                            cfg.trace_window = window;
                            return std::vector<Rows>{trace_rows(*simulate_relay(cfg).trace)};
                          }});
  }
  return plan;
}

Plan queue_plan(const SweepOverrides& o) {
  const int n = o.n.value_or(5);
  const int beta = o.beta.value_or(1);
  const double r = o.r.value_or(kTraceRate);
  const double horizon = o.horizon.value_or(1e5);
  const TraceWindow small{horizon / 2.0, std::min(horizon, horizon / 2.0 + 1000.0)};
  const auto net = LineNetworkConfig::fair(n, beta, o.alpha.value_or(kPairedAlpha));

  auto plot = [](const std::string& title) {
    return [title](const CsvTable& t) {
      PlotSpec spec{title, "time", "queue length", {}, {}};
      std::map<std::string, std::size_t> index;
      for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& node = t.rows[r][t.column("node")];
        auto [it, fresh] = index.emplace(node, spec.series.size());
        if (fresh) spec.series.push_back({"node " + node, {}, {}, false, true});
        spec.series[it->second].x.push_back(t.number(r, "t"));
        spec.series[it->second].y.push_back(t.number(r, "queue_len"));
      }
      return line_plot_svg(spec);
    };
  };
  Plan plan;
  plan.panels.push_back({"fig7_large", {"t", "node", "queue_len"}, plot("queue lengths, fair rates")});
  plan.panels.push_back({"fig7_small", {"t", "node", "queue_len"}, plot("queue lengths, fair rates (zoom)")});
  plan.cells.push_back({"fig7", {"fig7_large", "fig7_small"}, [=](std::uint64_t seed) {
                          SimConfig cfg = relay_config(net, r, o, 1e5);
                          cfg.seed = seed;
                          cfg.trace = true;
                          const auto rep = simulate_relay(cfg);
                          Rows large;
                          Rows zoom;
                          for (const auto& rec : rep.trace->records) {
                            // queue content changes on arrivals and on completions
                            if (rec.event != TraceEvent::Arrive && rec.event != TraceEvent::Off) continue;
                            std::vector<std::string> row{cell(rec.t), cell(rec.node), cell(rec.queue_len)};
                            if (rec.t >= small.start && rec.t <= small.end) zoom.push_back(row);
                            large.push_back(std::move(row));
                          }
                          return std::vector<Rows>{large, zoom};
                        }});
  return plan;
}

Plan make_plan(const std::string& preset, const SweepOverrides& o) {
  if (preset == "fig1") {
    return unfair_plan("fig1", pick(o.n, std::vector<int>{6, 9, 12, 15}), {o.beta.value_or(1)}, pick(o.sigma, kUnfairSigmas), true);
  }
  if (preset == "fig2") {
    return unfair_plan("fig2", {o.n.value_or(9)}, pick(o.beta, std::vector<int>{2, 3}), pick(o.sigma, kUnfairSigmas), false);
  }
  if (preset == "fig3") return limit_plan(pick(o.beta, kAverageBetas), pick(o.sigma, sigma_axis()));
  if (preset == "fig4") return matching_plan(o.n.value_or(10), pick(o.beta, kAverageBetas), pick(o.sigma, sigma_axis()));
  if (preset == "fig5") return relay_plan(o);
  if (preset == "fig6") return barcode_plan(o);
  if (preset == "fig7") return queue_plan(o);
  throw InvalidArgument("unknown preset '" + preset + "'");
}

}  // namespace

bool SweepOutput::complete() const {
  for (const auto& c : cells) {
    if (!c.complete) return false;
  }
  return true;
}

const SweepPanel& SweepOutput::panel(const std::string& name) const {
  for (const auto& p : panels) {
    if (p.name == name) return p;
  }
  throw InvalidArgument("sweep has no panel '" + name + "'");
}

std::vector<std::string> sweep_presets() { return {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7"}; }

SweepOutput run_sweep(const std::string& preset, const SweepOverrides& overrides) {
  const Plan plan = make_plan(preset, overrides);
  const std::size_t count = plan.cells.size();
  std::vector<std::vector<Rows>> results(count);
  std::vector<std::string> errors(count);
  std::vector<char> done(count, 0);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < count; k = next++) {
      try {
        results[k] = plan.cells[k].run(cell_seed(overrides.seed, k));
        done[k] = 1;
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::max(1, overrides.jobs));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < std::min(threads, count); ++t) pool.emplace_back(worker);
    worker();
  }

  // Single assembly pass in cell order, so output does not depend on --jobs.
  SweepOutput out;
  out.preset = preset;
  for (const auto& p : plan.panels) out.panels.push_back({p.name, CsvTable{p.header, {}}, {}});
  for (std::size_t k = 0; k < count; ++k) {
    const auto& def = plan.cells[k];
    out.cells.push_back({def.label, def.panels, done[k] != 0, errors[k]});
    if (!done[k]) continue;
    for (std::size_t p = 0; p < def.panels.size(); ++p) {
      for (std::size_t q = 0; q < out.panels.size(); ++q) {
        if (out.panels[q].name != def.panels[p]) continue;
        for (auto& row : results[k][p]) out.panels[q].table.add_row(std::move(row));
      }
    }
  }
  for (std::size_t q = 0; q < out.panels.size(); ++q) {
    if (!out.panels[q].table.rows.empty()) out.panels[q].svg = plan.panels[q].plot(out.panels[q].table);
  }
  return out;
}

std::vector<std::string> write_sweep(const SweepOutput& output, const std::string& out_dir, bool svg, bool json) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> written;
  nlohmann::json panels = nlohmann::json::array();
  for (const auto& p : output.panels) {
    const auto base = (fs::path(out_dir) / p.name).string();
    write_text_file(base + ".csv", to_csv(p.table));
    written.push_back(base + ".csv");
    nlohmann::json entry{{"name", p.name}, {"csv", p.name + ".csv"}, {"rows", p.table.rows.size()}};
    if (svg && !p.svg.empty()) {
      write_text_file(base + ".svg", p.svg);
      written.push_back(base + ".svg");
      entry["svg"] = p.name + ".svg";
    }
    if (json) {
      write_text_file(base + ".json", table_to_json(p.table));
      written.push_back(base + ".json");
      entry["json"] = p.name + ".json";
    }
    panels.push_back(std::move(entry));
  }
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : output.cells) {
    nlohmann::json entry{{"label", c.label}, {"panels", c.panels}, {"status", c.complete ? "complete" : "incomplete"}};
    if (!c.complete) entry["error"] = c.error;
    cells.push_back(std::move(entry));
  }
  const nlohmann::json index{{"preset", output.preset}, {"complete", output.complete()}, {"panels", panels}, {"cells", cells}};
  const auto path = (fs::path(out_dir) / (output.preset + "_index.json")).string();
  write_text_file(path, index.dump(2) + "\n");
  written.push_back(path);
  return written;
}

}  // namespace csmaline
