#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "csmaline/error.hpp"
#include "csmaline/exact.hpp"
#include "csmaline/simulator.hpp"
#include "oracle.hpp"

#include <random>

using namespace csmaline;

namespace {

SimConfig relay(const LineNetworkConfig& net, double r, double horizon, std::uint64_t seed = 1) {
  return SimConfig{.network = net, .mode = RelayMode{.arrival_rate = r}, .horizon = horizon, .seed = seed};
}

}  // namespace

TEST_CASE("single node") {
  const auto rep = simulate(SimConfig{.network = LineNetworkConfig::equal(1, 0, 1.0), .horizon = 1e5});
  REQUIRE(rep.theta_hat.size() == 1);
  CHECK(rep.theta_hat[0].covers(0.5, 3.0));
  CHECK(rep.theta_hat[0].half_width > 0.0);
  CHECK(std::abs(rep.end_to_end.mean - rep.theta_hat[0].mean) < 0.01);
}

TEST_CASE("saturated line matches the exact values") {
  auto rep = simulate(SimConfig{.network = LineNetworkConfig::equal(3, 1, 1.0), .horizon = 1e6});
  const double want[] = {0.4, 0.2, 0.4};
  for (int i = 0; i < 3; ++i) CHECK(rep.theta_hat[static_cast<std::size_t>(i)].covers(want[i], 3.0));
  rep = simulate(SimConfig{.network = LineNetworkConfig::fair(5, 1, 1.0), .horizon = 1e6, .seed = 7});
  for (const auto& e : rep.theta_hat) CHECK(e.covers(1.0 / 3, 3.0));
}

TEST_CASE("saturated coverage over random configs") {
  std::mt19937_64 g(20240611);
  int covered = 0;
  for (int k = 0; k < 10; ++k) {
    const int n = 2 + static_cast<int>(g() % 7);
    const int beta = static_cast<int>(g() % 4);
    const auto net = LineNetworkConfig::explicit_rates(beta, oracle::random_rates(g, n, 0.2, 5.0));
    const auto want = throughput_exact(net);
    const auto rep = simulate(SimConfig{.network = net, .horizon = 2e5, .seed = 100 + static_cast<std::uint64_t>(k)});
    bool all = true;
    for (int i = 0; i < n; ++i) all = all && rep.theta_hat[static_cast<std::size_t>(i)].covers(want[static_cast<std::size_t>(i)], 3.0);
    covered += all ? 1 : 0;
  }
  CHECK(covered >= 9);
}

TEST_CASE("report invariants") {
  const auto rep = simulate(SimConfig{.network = LineNetworkConfig::equal(6, 2, 3.0), .horizon = 5e4});
  for (const auto& e : rep.theta_hat) {
    CHECK(e.mean >= 0.0);
    CHECK(e.mean <= 1.0);
    CHECK(e.half_width > 0.0);
    CHECK(e.half_width > e.std_error);
  }
  CHECK(rep.end_to_end.mean <= rep.theta_hat.back().mean + rep.theta_hat.back().half_width + rep.end_to_end.half_width);
  CHECK(rep.measured_time == doctest::Approx(4.5e4));
  CHECK(rep.events > 0);
}

TEST_CASE("relay examples") {
  auto cfg = relay(LineNetworkConfig::equal(3, 1, 1000.0), 0.0, 2e5);
  cfg.mode = RelayMode{.node1_saturated = true};
  auto rep = simulate(cfg);
  CHECK(std::abs(rep.end_to_end.mean - 0.3) < 0.01);

  cfg = relay(LineNetworkConfig::equal(5, 2, 1000.0), 0.0, 2e5);
  cfg.mode = RelayMode{.node1_saturated = true};
  rep = simulate(cfg);
  CHECK(rep.end_to_end.mean >= 1.0 / 6 - rep.end_to_end.half_width);
  CHECK(rep.end_to_end.mean <= 1.0 / 5 + rep.end_to_end.half_width);

  rep = simulate(relay(LineNetworkConfig::fair(5, 1, 11.68), 0.40, 2e5));
  CHECK(std::abs(rep.end_to_end.mean - 0.40) < 0.02);
}

TEST_CASE("relay conservation") {
  for (double r : {0.1, 0.45, 0.7}) {
    const auto rep = simulate(relay(LineNetworkConfig::fair(5, 1, 2.0), r, 2e4, 3));
    CHECK(rep.arrivals == rep.departures + static_cast<std::uint64_t>(rep.queued_final + rep.in_service_final));
    std::int64_t queued = 0;
    for (const auto& q : rep.queues) {
      CHECK(q.final >= 0);
      CHECK(q.max >= q.final);
      CHECK(q.mean >= 0.0);
      queued += q.final;
    }
    CHECK(queued == rep.queued_final + rep.in_service_final);
  }
  auto cfg = relay(LineNetworkConfig::equal(4, 1, 5.0), 0.0, 2e4);
  cfg.mode = RelayMode{.node1_saturated = true};
  const auto rep = simulate(cfg);
  CHECK(rep.arrivals == rep.departures + static_cast<std::uint64_t>(rep.queued_final + rep.in_service_final));
}

TEST_CASE("determinism") {
  const auto cfg = relay(LineNetworkConfig::equal(5, 1, 6.0), 0.3, 2e4, 42);
  CHECK(report_to_json(simulate(cfg)) == report_to_json(simulate(cfg)));
  auto other = cfg;
  other.seed = 43;
  CHECK(report_to_json(simulate(cfg)) != report_to_json(simulate(other)));
}

TEST_CASE("traces") {
  auto cfg = relay(LineNetworkConfig::fair(6, 2, 4.0), 0.3, 5e3);
  cfg.trace = true;
  const auto rep = simulate(cfg);
  REQUIRE(rep.trace.has_value());
  const auto& tr = *rep.trace;
  CHECK_FALSE(tr.decimated);
  CHECK(trace_is_feasible(tr, 6, 2));
  double last = 0.0;
  for (const auto& r : tr.records) {
    CHECK(r.t >= last);
    last = r.t;
    CHECK(r.queue_len >= 0);
    if (r.event == TraceEvent::On) CHECK(r.queue_len >= 1);
  }
  // a broken trace is caught
  Trace bad;
  bad.records = {{1.0, 2, TraceEvent::On, 1}, {2.0, 3, TraceEvent::On, 1}};
  CHECK_FALSE(trace_is_feasible(bad, 6, 1));
  CHECK(trace_is_feasible(bad, 6, 0));

  auto sat = SimConfig{.network = LineNetworkConfig::equal(8, 1, 2.0), .horizon = 1e4, .trace = true};
  sat.trace_window = TraceWindow{.start = 100.0, .end = 200.0};
  const auto windowed = simulate(sat);
  for (const auto& r : windowed.trace->records) {
    CHECK(r.t >= 100.0);
    CHECK(r.t <= 200.0);
  }
  CHECK(trace_is_feasible(*simulate(SimConfig{.network = LineNetworkConfig::equal(8, 1, 2.0), .horizon = 1e4, .trace = true}).trace, 8, 1));
}

TEST_CASE("trace decimation") {
  auto cfg = SimConfig{.network = LineNetworkConfig::equal(4, 1, 2.0), .horizon = 1e4, .trace = true};
  cfg.trace_cap = 100;
  const auto rep = simulate(cfg);
  const auto& tr = *rep.trace;
  CHECK(tr.decimated);
  CHECK(tr.stride > 1);
  CHECK(tr.records.size() <= 100);
  CHECK(tr.records.size() >= 25);
  CHECK(tr.records.back().t > 0.5e4);
}

TEST_CASE("invalid configurations") {
  const auto net = LineNetworkConfig::equal(3, 1, 1.0);
  CHECK_THROWS_AS(simulate(SimConfig{.network = net, .horizon = 0.0}), InvalidConfig);
  CHECK_THROWS_AS(simulate(SimConfig{.network = net, .horizon = 10.0, .warmup = 10.0}), InvalidConfig);
  CHECK_THROWS_AS(simulate(SimConfig{.network = net, .horizon = 10.0, .warmup = -1.0}), InvalidConfig);
  CHECK_THROWS_AS(simulate(SimConfig{.network = net, .batches = 0}), InvalidConfig);
  CHECK_THROWS_AS(simulate(relay(net, 0.0, 10.0)), InvalidConfig);
  CHECK_THROWS_AS(simulate(relay(net, -1.0, 10.0)), InvalidConfig);
  CHECK_THROWS_AS(simulate_relay(SimConfig{.network = net}), InvalidConfig);
  CHECK_THROWS_AS(simulate_saturated(relay(net, 0.5, 10.0)), InvalidConfig);
  auto cfg = SimConfig{.network = net, .horizon = 10.0, .trace = true};
  cfg.trace_window = TraceWindow{.start = 5.0, .end = 4.0};
  CHECK_THROWS_AS(simulate(cfg), InvalidConfig);
  cfg.trace_window.reset();
  cfg.trace_cap = 1;
  CHECK_THROWS_AS(simulate(cfg), InvalidConfig);
}

TEST_CASE("stability threshold") {
  CHECK(std::abs(stability_threshold(11.68, 1) - 0.4795) < 1e-4);
  CHECK(stability_threshold(1.0, 1) == doctest::Approx(1.0 / 3));
  CHECK(stability_threshold(1e12, 1) == doctest::Approx(0.5));
}

TEST_CASE("trace event names") {
  CHECK(to_string(TraceEvent::On) == "on");
  CHECK(to_string(TraceEvent::Off) == "off");
  CHECK(to_string(TraceEvent::Arrive) == "arrive");
  CHECK(to_string(TraceEvent::Depart) == "depart");
}
