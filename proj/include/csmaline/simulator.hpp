#pragma once

#include "csmaline/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace csmaline {

struct SaturatedMode {};

/// Packets enter at node 1 (Poisson(arrival_rate), or an infinite backlog when
/// node1_saturated), hop 1 -> 2 -> ... -> n and leave after node n transmits.
struct RelayMode {
  double arrival_rate = 0.0;
  bool node1_saturated = false;
};

using SimMode = std::variant<SaturatedMode, RelayMode>;

struct TraceWindow {
  double start = 0.0;
  double end = 0.0;
};

struct SimConfig {
  LineNetworkConfig network;
  SimMode mode = SaturatedMode{};
  double horizon = 1e5;
  std::optional<double> warmup{};  // defaults to 10% of the horizon
  std::uint64_t seed = 1;
  bool trace = false;
  std::optional<TraceWindow> trace_window{};  // whole run when empty
  std::size_t trace_cap = 1'000'000;
  int batches = 20;

  [[nodiscard]] double effective_warmup() const { return warmup.value_or(0.1 * horizon); }
};

/// Batch-means estimate.
struct Estimate {
  double mean = 0.0;
  double half_width = 0.0;  // 95% Student-t half-width
  double std_error = 0.0;   // standard error of the mean

  [[nodiscard]] bool covers(double value, double k_sigma) const {
    return value >= mean - k_sigma * std_error && value <= mean + k_sigma * std_error;
  }
};

enum class TraceEvent { On, Off, Arrive, Depart };

std::string to_string(TraceEvent e);

/// queue_len is the buffer content of `node` right after the event
/// (waiting packets plus the one in service).
struct TraceRecord {
  double t;
  int node;  // 1-based
  TraceEvent event;
  std::int64_t queue_len;
};

struct Trace {
  std::vector<TraceRecord> records;
  bool decimated = false;
  std::size_t stride = 1;  // every stride-th record was kept once decimation started
};

struct QueueStats {
  double mean = 0.0;  // time average after warmup
  std::int64_t max = 0;
  std::int64_t final = 0;
};

struct SimReport {
  std::vector<Estimate> theta_hat;
  Estimate end_to_end;  // departures of node n per unit time
  std::vector<QueueStats> queues;
  std::uint64_t arrivals = 0;    // packets that entered node 1 over the whole run
  std::uint64_t departures = 0;  // packets that left node n over the whole run
  std::int64_t queued_final = 0;  // waiting packets at the horizon
  std::int64_t in_service_final = 0;
  std::uint64_t events = 0;
  double measured_time = 0.0;
  std::optional<Trace> trace;
};

SimReport simulate(const SimConfig& cfg);
SimReport simulate_saturated(const SimConfig& cfg);
SimReport simulate_relay(const SimConfig& cfg);

/// Largest sustainable arrival rate under fair rates, alpha / (1 + alpha (beta+1)).
double stability_threshold(double alpha, int beta);

/// Replays on/off records and checks that the active set is feasible at every instant.
bool trace_is_feasible(const Trace& trace, int n, int beta);

std::string report_to_json(const SimReport& report);

}  // namespace csmaline
