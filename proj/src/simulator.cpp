#include "csmaline/simulator.hpp"

#include "csmaline/error.hpp"
#include "csmaline/fairness.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <queue>
#include <random>

namespace csmaline {

namespace {

enum class EventKind : std::uint8_t { Backoff, TransmissionEnd, Arrival };

struct Event {
  double t;
  std::uint64_t seq;  // FIFO among equal times keeps runs reproducible
  EventKind kind;
  int node;
  std::uint64_t version;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    return a.t != b.t ? a.t > b.t : a.seq > b.seq;
  }
};

// One generator per (purpose, node) so streams do not depend on event interleaving.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint32_t purpose, std::uint32_t node) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), purpose, node};
  return std::mt19937_64(seq);
}

double exponential(std::mt19937_64& g, double rate) {
  // 53-bit uniform in (0, 1]
  const double u = (static_cast<double>(g() >> 11) + 1.0) * 0x1.0p-53;
  return -std::log(u) / rate;
}

Estimate batch_estimate(const std::vector<double>& xs) {
  Estimate e;
  const auto b = static_cast<double>(xs.size());
  for (double x : xs) e.mean += x;
  e.mean /= b;
  if (xs.size() < 2) return e;
  double ss = 0.0;
  for (double x : xs) ss += (x - e.mean) * (x - e.mean);
  e.std_error = std::sqrt(ss / (b - 1.0) / b);
  const boost::math::students_t dist(b - 1.0);
  e.half_width = boost::math::quantile(boost::math::complement(dist, 0.025)) * e.std_error;
  return e;
}

class LineSimulation {
 public:
  explicit LineSimulation(const SimConfig& cfg)
      : cfg_(cfg),
        n_(cfg.network.n()),
        beta_(cfg.network.beta()),
        rho_(cfg.network.activation_rates()),
        warmup_(cfg.effective_warmup()),
        batch_len_((cfg.horizon - warmup_) / cfg.batches),
        active_(static_cast<std::size_t>(n_), false),
        armed_(static_cast<std::size_t>(n_), false),
        blockers_(static_cast<std::size_t>(n_), 0),
        queue_(static_cast<std::size_t>(n_), 0),
        version_(static_cast<std::size_t>(n_), 0),
        last_change_(static_cast<std::size_t>(n_), 0.0),
        on_time_(static_cast<std::size_t>(cfg.batches), std::vector<double>(static_cast<std::size_t>(n_), 0.0)),
        queue_area_(static_cast<std::size_t>(n_), 0.0),
        queue_max_(static_cast<std::size_t>(n_), 0),
        departures_by_batch_(static_cast<std::size_t>(cfg.batches), 0) {
    if (const auto* relay = std::get_if<RelayMode>(&cfg.mode)) {
      relay_ = true;
      arrival_rate_ = relay->arrival_rate;
      node1_saturated_ = relay->node1_saturated;
    }
    for (int i = 0; i < n_; ++i) {
      backoff_rng_.push_back(make_stream(cfg.seed, 1, static_cast<std::uint32_t>(i)));
      service_rng_.push_back(make_stream(cfg.seed, 2, static_cast<std::uint32_t>(i)));
    }
    arrival_rng_ = make_stream(cfg.seed, 3, 0);
    if (cfg.trace) {
      trace_.emplace();
      window_ = cfg.trace_window.value_or(TraceWindow{0.0, cfg.horizon});
    }
  }

  SimReport run() {
    for (int i = 0; i < n_; ++i) refresh(i);
    if (relay_ && !node1_saturated_) schedule(exponential(arrival_rng_, arrival_rate_), EventKind::Arrival, 0, 0);

    while (!heap_.empty()) {
      const Event ev = heap_.top();
      if (ev.t > cfg_.horizon) break;
      heap_.pop();
      if (ev.kind == EventKind::Backoff && ev.version != version_[idx(ev.node)]) continue;
      now_ = ev.t;
      ++events_;
      switch (ev.kind) {
        case EventKind::Backoff:
          activate(ev.node);
          break;
        case EventKind::TransmissionEnd:
          finish(ev.node);
          break;
        case EventKind::Arrival:
          ++arrivals_;
          close_interval(0);
          ++queue_[0];
          note_queue(0);
          record(0, TraceEvent::Arrive);
          refresh(0);
          schedule(now_ + exponential(arrival_rng_, arrival_rate_), EventKind::Arrival, 0, 0);
          break;
      }
    }
    now_ = cfg_.horizon;
    for (int i = 0; i < n_; ++i) close_interval(i);
    return report();
  }

 private:
  static std::size_t idx(int i) { return static_cast<std::size_t>(i); }

  [[nodiscard]] bool has_packet(int i) const {
    if (!relay_) return true;
    if (i == 0 && node1_saturated_) return true;
    return queue_[idx(i)] > 0;
  }

  [[nodiscard]] bool eligible(int i) const { return !active_[idx(i)] && blockers_[idx(i)] == 0 && has_packet(i); }

  void schedule(double t, EventKind kind, int node, std::uint64_t version) {
    heap_.push(Event{t, seq_++, kind, node, version});
  }

  // Arms or disarms the backoff clock of node i to match its eligibility. A newly
  // eligible node draws a fresh exponential; by memorylessness this is the same law
  // as freezing the clock while blocked (or idle) and resuming it later.
  void refresh(int i) {
    const bool want = eligible(i);
    if (want == armed_[idx(i)]) return;
    ++version_[idx(i)];
    armed_[idx(i)] = want;
    if (want) schedule(now_ + exponential(backoff_rng_[idx(i)], rho_[idx(i)]), EventKind::Backoff, i, version_[idx(i)]);
  }

  void activate(int i) {
    assert(eligible(i));
    close_interval(i);
    active_[idx(i)] = true;
    armed_[idx(i)] = false;
    ++version_[idx(i)];
    if (relay_) {
      if (i == 0 && node1_saturated_) {
        ++arrivals_;
      } else {
        --queue_[idx(i)];
      }
    }
    record(i, TraceEvent::On);
    for (int k = std::max(0, i - beta_); k <= std::min(n_ - 1, i + beta_); ++k) {
      if (k == i) continue;
      assert(!active_[idx(k)]);
      ++blockers_[idx(k)];
      refresh(k);
    }
    schedule(now_ + exponential(service_rng_[idx(i)], 1.0), EventKind::TransmissionEnd, i, 0);
  }

  void finish(int i) {
    close_interval(i);
    active_[idx(i)] = false;
    record(i, TraceEvent::Off);
    if (i == n_ - 1) {
      ++departures_;
      if (const int b = batch_of(now_); b >= 0) ++departures_by_batch_[idx(b)];
      record(i, TraceEvent::Depart);
    } else if (relay_) {
      close_interval(i + 1);
      ++queue_[idx(i + 1)];
      note_queue(i + 1);
      record(i + 1, TraceEvent::Arrive);
    }
    for (int k = std::max(0, i - beta_); k <= std::min(n_ - 1, i + beta_); ++k) {
      if (k != i) --blockers_[idx(k)];
    }
    for (int k = std::max(0, i - beta_); k <= std::min(n_ - 1, i + beta_ + 1); ++k) refresh(k);
  }

  [[nodiscard]] int batch_of(double t) const {
    if (t < warmup_) return -1;
    return std::min(cfg_.batches - 1, static_cast<int>((t - warmup_) / batch_len_));
  }

  [[nodiscard]] std::int64_t buffer(int i) const {
    return queue_[idx(i)] + ((relay_ && active_[idx(i)] && !(i == 0 && node1_saturated_)) ? 1 : 0);
  }

  void note_queue(int i) { queue_max_[idx(i)] = std::max(queue_max_[idx(i)], buffer(i)); }

  // Credits node i's activity and buffer content over [last_change, now] to the batches.
  void close_interval(int i) {
    double from = std::max(last_change_[idx(i)], warmup_);
    last_change_[idx(i)] = now_;
    if (from >= now_) return;
    const double q = static_cast<double>(buffer(i));
    queue_area_[idx(i)] += q * (now_ - from);
    if (!active_[idx(i)]) return;
    while (from < now_) {
      const int b = batch_of(from);
      double end = b == cfg_.batches - 1 ? now_ : std::min(now_, warmup_ + (b + 1) * batch_len_);
      if (end <= from) end = now_;  // rounding at a batch edge
      on_time_[idx(b)][idx(i)] += end - from;
      from = end;
    }
  }

  void record(int i, TraceEvent e) {
    if (!trace_ || now_ < window_.start || now_ > window_.end) return;
    ++trace_seen_;
    if ((trace_seen_ - 1) % trace_->stride != 0) return;
    trace_->records.push_back({now_, i + 1, e, buffer(i)});
    if (trace_->records.size() >= cfg_.trace_cap) {
      std::vector<TraceRecord> kept;
      kept.reserve(trace_->records.size() / 2 + 1);
      for (std::size_t k = 0; k < trace_->records.size(); k += 2) kept.push_back(trace_->records[k]);
      trace_->records = std::move(kept);
      trace_->stride *= 2;
      trace_->decimated = true;
    }
  }

  SimReport report() {
    SimReport r;
    r.measured_time = cfg_.horizon - warmup_;
    for (int i = 0; i < n_; ++i) {
      std::vector<double> per_batch;
      for (int b = 0; b < cfg_.batches; ++b) per_batch.push_back(on_time_[idx(b)][idx(i)] / batch_len_);
      r.theta_hat.push_back(batch_estimate(per_batch));
      r.queues.push_back({queue_area_[idx(i)] / r.measured_time, queue_max_[idx(i)], buffer(i)});
    }
    std::vector<double> rates;
    for (auto d : departures_by_batch_) rates.push_back(static_cast<double>(d) / batch_len_);
    r.end_to_end = batch_estimate(rates);
    r.arrivals = arrivals_;
    r.departures = departures_;
    for (int i = 0; i < n_; ++i) {
      r.queued_final += queue_[idx(i)];
      if (relay_ && active_[idx(i)]) ++r.in_service_final;
    }
    r.events = events_;
    r.trace = std::move(trace_);
    return r;
  }

  const SimConfig& cfg_;
  int n_;
  int beta_;
  std::vector<double> rho_;
  double warmup_;
  double batch_len_;
  bool relay_ = false;
  double arrival_rate_ = 0.0;
  bool node1_saturated_ = false;

  double now_ = 0.0;
  std::uint64_t seq_ = 0;
  std::uint64_t events_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> heap_;

  std::vector<bool> active_;
  std::vector<bool> armed_;
  std::vector<int> blockers_;
  std::vector<std::int64_t> queue_;
  std::vector<std::uint64_t> version_;
  std::vector<double> last_change_;

  std::vector<std::vector<double>> on_time_;
  std::vector<double> queue_area_;
  std::vector<std::int64_t> queue_max_;
  std::vector<std::uint64_t> departures_by_batch_;
  std::uint64_t arrivals_ = 0;
  std::uint64_t departures_ = 0;

  std::vector<std::mt19937_64> backoff_rng_;
  std::vector<std::mt19937_64> service_rng_;
  std::mt19937_64 arrival_rng_;

  std::optional<Trace> trace_;
  TraceWindow window_;
  std::size_t trace_seen_ = 0;
};

void validate(const SimConfig& cfg) {
  if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon)) throw InvalidConfig("horizon must be positive");
  const double w = cfg.effective_warmup();
  if (!(w >= 0.0) || !(w < cfg.horizon)) throw InvalidConfig("warmup must satisfy 0 <= warmup < horizon");
  if (cfg.batches < 1) throw InvalidConfig("batches must be >= 1");
  for (double r : cfg.network.activation_rates()) {
    if (!std::isfinite(r)) throw InvalidConfig("activation rates must be finite for simulation");
  }
  if (const auto* relay = std::get_if<RelayMode>(&cfg.mode)) {
    if (!relay->node1_saturated && !(relay->arrival_rate > 0.0)) {
      throw InvalidConfig("relay mode needs arrival_rate > 0 or node1_saturated");
    }
  }
  if (cfg.trace_window && !(cfg.trace_window->end >= cfg.trace_window->start)) {
    throw InvalidConfig("trace window end must not precede its start");
  }
  if (cfg.trace && cfg.trace_cap < 2) throw InvalidConfig("trace_cap must be >= 2");
}

}  // namespace

std::string to_string(TraceEvent e) {
  switch (e) {
    case TraceEvent::On:
      return "on";
    case TraceEvent::Off:
      return "off";
    case TraceEvent::Arrive:
      return "arrive";
    case TraceEvent::Depart:
      return "depart";
  }
  return "?";
}

SimReport simulate(const SimConfig& cfg) {
  validate(cfg);
  LineSimulation sim(cfg);
  return sim.run();
}

SimReport simulate_saturated(const SimConfig& cfg) {
  if (!std::holds_alternative<SaturatedMode>(cfg.mode)) throw InvalidConfig("simulate_saturated needs saturated mode");
  return simulate(cfg);
}

SimReport simulate_relay(const SimConfig& cfg) {
  if (!std::holds_alternative<RelayMode>(cfg.mode)) throw InvalidConfig("simulate_relay needs relay mode");
  return simulate(cfg);
}

double stability_threshold(double alpha, int beta) { return fair_throughput(alpha, beta); }

bool trace_is_feasible(const Trace& trace, int n, int beta) {
  std::vector<char> on(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& r : trace.records) {
    if (r.node < 1 || r.node > n) return false;
    if (r.event == TraceEvent::On) {
      for (int j = std::max(1, r.node - beta); j <= std::min(n, r.node + beta); ++j) {
        if (on[static_cast<std::size_t>(j)]) return false;
      }
      on[static_cast<std::size_t>(r.node)] = 1;
    } else if (r.event == TraceEvent::Off) {
      on[static_cast<std::size_t>(r.node)] = 0;
    }
  }
  return true;
}

std::string report_to_json(const SimReport& report) {
  using nlohmann::json;
  auto est = [](const Estimate& e) { return json{{"mean", e.mean}, {"half_width", e.half_width}, {"std_error", e.std_error}}; };
  json theta = json::array();
  for (const auto& e : report.theta_hat) theta.push_back(est(e));
  json queues = json::array();
  for (const auto& q : report.queues) queues.push_back({{"mean", q.mean}, {"max", q.max}, {"final", q.final}});
  json j{{"theta_hat", theta},
         {"end_to_end", est(report.end_to_end)},
         {"queues", queues},
         {"arrivals", report.arrivals},
         {"departures", report.departures},
         {"queued_final", report.queued_final},
         {"in_service_final", report.in_service_final},
         {"events", report.events},
         {"measured_time", report.measured_time}};
  if (report.trace) {
    j["trace"] = {{"records", report.trace->records.size()},
                  {"decimated", report.trace->decimated},
                  {"stride", report.trace->stride}};
  }
  return j.dump(2);
}

}  // namespace csmaline
