#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "csmaline/cli.hpp"
#include "csmaline/csv.hpp"
#include "csmaline/spectral.hpp"
#include "csmaline/sweep.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <unistd.h>

using namespace csmaline;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("csma_line_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  [[nodiscard]] std::string file(const std::string& name) const { return (path / name).string(); }
};

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int status = run_command(args, out, err);
  return {status, out.str(), err.str()};
}

std::vector<double> column(const std::string& path, const std::string& name) {
  const auto table = parse_csv(read_text_file(path));
  std::vector<double> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) out.push_back(table.number(r, name));
  return out;
}

}  // namespace

TEST_CASE("throughput subcommand") {
  TempDir dir;
  const auto r = run({"throughput", "--n", "5", "--beta", "1", "--sigma", "6", "--out", dir.path.string()});
  REQUIRE(r.status == 0);
  CHECK(r.out.find("throughput.csv") != std::string::npos);
  const auto theta = column(dir.file("throughput.csv"), "theta");
  const double want[] = {330.0 / 463, 78.0 / 463, 294.0 / 463, 78.0 / 463, 330.0 / 463};
  REQUIRE(theta.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(theta[static_cast<std::size_t>(i)] == doctest::Approx(want[i]).epsilon(1e-12));
  CHECK(std::abs(theta[1] - 0.16847) < 1e-5);
  CHECK(std::abs(theta[2] - 0.63499) < 1e-5);

  for (const char* method : {"exact", "counts"}) {
    TempDir other;
    REQUIRE(run({"throughput", "--n", "5", "--beta", "1", "--sigma", "6", "--method", method, "--out", other.path.string()}).status == 0);
    const auto t = column(other.file("throughput.csv"), "theta");
    for (int i = 0; i < 5; ++i) CHECK(t[static_cast<std::size_t>(i)] == doctest::Approx(want[i]).epsilon(1e-12));
  }
  TempDir explicit_dir;
  REQUIRE(run({"throughput", "--beta", "1", "--rho", "1,2,3,4", "--out", explicit_dir.path.string()}).status == 0);
  CHECK(column(explicit_dir.file("throughput.csv"), "rho") == std::vector<double>{1, 2, 3, 4});
}

TEST_CASE("fair-rates and roots subcommands") {
  TempDir dir;
  REQUIRE(run({"fair-rates", "--n", "3", "--beta", "1", "--alpha", "1", "--out", dir.path.string()}).status == 0);
  CHECK(column(dir.file("fair_rates.csv"), "rho") == std::vector<double>{1, 2, 1});
  for (double t : column(dir.file("fair_rates.csv"), "theta_fair")) CHECK(t == doctest::Approx(1.0 / 3));
  for (double t : column(dir.file("fair_rates.csv"), "theta")) CHECK(t == doctest::Approx(1.0 / 3).epsilon(1e-14));

  REQUIRE(run({"roots", "--sigma", "2", "--beta", "1", "--out", dir.path.string()}).status == 0);
  const auto re = column(dir.file("roots.csv"), "re");
  REQUIRE(re.size() == 2);
  CHECK(re[0] == doctest::Approx(2.0));
  CHECK(re[1] == doctest::Approx(-1.0));
  CHECK_FALSE(fs::exists(dir.file("roots_series.csv")));
  REQUIRE(run({"roots", "--sigma", "0.1", "--beta", "1", "--terms", "40", "--out", dir.path.string()}).status == 0);
  const auto series = parse_csv(read_text_file(dir.file("roots_series.csv")));
  CHECK(series.rows.size() == 4);
  CHECK(series.number(0, "re") == doctest::Approx(dominant_root(0.1, 1)).epsilon(1e-12));
}

TEST_CASE("other subcommands write their tables") {
  TempDir dir;
  const auto d = dir.path.string();
  REQUIRE(run({"exact", "--n", "3", "--beta", "1", "--sigma", "1", "--arithmetic", "rational", "--out", d}).status == 0);
  const auto probs = column(dir.file("exact_states.csv"), "probability");
  CHECK(probs.size() == 5);
  double total = 0.0;
  for (double p : probs) total += p;
  CHECK(total == doctest::Approx(1.0));
  CHECK(fs::exists(dir.file("exact_throughput.csv")));

  REQUIRE(run({"avg", "--sigma", "6", "--beta", "1", "--n", "5", "--out", d}).status == 0);
  CHECK(column(dir.file("avg.csv"), "alpha_n")[0] == doctest::Approx(1110.0 / 95));
  CHECK(column(dir.file("avg.csv"), "avg_recursive")[0] == doctest::Approx(1110.0 / 2315));

  REQUIRE(run({"counts", "--n", "5", "--beta", "1", "--sigma", "6", "--out", d}).status == 0);
  CHECK(fs::exists(dir.file("counts.csv")));
  CHECK(fs::exists(dir.file("counts_levels.csv")));
  CHECK(column(dir.file("counts_throughput.csv"), "theta")[0] == doctest::Approx(330.0 / 463));

  REQUIRE(run({"simulate", "--n", "3", "--beta", "1", "--sigma", "1", "--horizon", "2000", "--trace", "--format", "json,svg", "--out", d}).status == 0);
  CHECK(column(dir.file("simulate.csv"), "theta_hat").size() == 3);
  CHECK(fs::exists(dir.file("simulate_report.json")));
  CHECK(fs::exists(dir.file("simulate_trace.csv")));
  bool svg = false;
  for (const auto& e : fs::directory_iterator(dir.path)) svg = svg || e.path().extension() == ".svg";
  CHECK(svg);

  REQUIRE(run({"simulate", "--mode", "relay", "--n", "3", "--beta", "1", "--alpha", "2", "--r", "0.2", "--horizon", "2000", "--out", d}).status == 0);
  CHECK(column(dir.file("simulate.csv"), "queue_mean").size() == 3);
}

TEST_CASE("exit codes") {
  TempDir dir;
  const auto d = dir.path.string();
  auto r = run({"throughput", "--n", "3", "--out", d});
  CHECK(r.status == 2);
  CHECK(r.err.find("--beta") != std::string::npos);
  CHECK(run({"nonsense"}).status == 2);
  CHECK(run({}).status == 2);
  CHECK(run({"throughput", "--n", "3", "--beta", "1", "--sigma", "1", "--bogus", "--out", d}).status == 2);
  CHECK(run({"throughput", "--n", "3", "--beta", "1", "--sigma", "1", "--alpha", "1", "--out", d}).status == 2);
  CHECK(run({"throughput", "--n", "3", "--beta", "1", "--sigma", "1", "--format", "pdf", "--out", d}).status == 2);
  r = run({"exact", "--n", "40", "--beta", "0", "--sigma", "1", "--out", d});
  CHECK(r.status == 1);
  CHECK(r.err.find("exceeds") != std::string::npos);
  CHECK(run({"throughput", "--n", "3", "--beta", "1", "--sigma", "-1", "--out", d}).status != 0);
  CHECK(run({"sweep", "fig99", "--out", d}).status != 0);
}

TEST_CASE("config files and output directory") {
  TempDir dir;
  const auto cfg = dir.file("cfg.json");
  write_text_file(cfg, R"({"n": 3, "beta": 1, "sigma": 1, "out": ")" + dir.path.string() + R"("})");
  REQUIRE(run({"throughput", "--config", cfg}).status == 0);
  CHECK(column(dir.file("throughput.csv"), "theta")[1] == doctest::Approx(0.2));
  REQUIRE(run({"throughput", "--config", cfg, "--sigma", "2"}).status == 0);
  CHECK(column(dir.file("throughput.csv"), "theta")[1] == doctest::Approx(2.0 / 11));

  write_text_file(cfg, R"({"n": 3, "beta": 1, "rates": {"mode": "fair", "alpha": 1}})");
  TempDir out;
  REQUIRE(run({"throughput", "--config", cfg, "--out", out.path.string()}).status == 0);
  for (double t : column(out.file("throughput.csv"), "theta")) CHECK(t == doctest::Approx(1.0 / 3));

  TempDir env_dir;
  ::setenv("CSMA_LINE_OUT", env_dir.path.string().c_str(), 1);
  const auto r = run({"throughput", "--n", "2", "--beta", "1", "--sigma", "1"});
  ::unsetenv("CSMA_LINE_OUT");
  REQUIRE(r.status == 0);
  CHECK(fs::exists(env_dir.file("throughput.csv")));
}

TEST_CASE("CSV output is canonical") {
  TempDir dir;
  const auto d = dir.path.string();
  REQUIRE(run({"throughput", "--n", "7", "--beta", "2", "--sigma", "3.3", "--out", d}).status == 0);
  REQUIRE(run({"roots", "--sigma", "0.7", "--beta", "3", "--terms", "20", "--out", d}).status == 0);
  REQUIRE(run({"avg", "--sigma", "20", "--beta", "2", "--n", "10", "--out", d}).status == 0);
  REQUIRE(run({"sweep", "fig3", "--out", d}).status == 0);
  int checked = 0;
  for (const auto& e : fs::directory_iterator(dir.path)) {
    if (e.path().extension() != ".csv") continue;
    const auto text = read_text_file(e.path().string());
    CHECK(canonicalize_csv(text) == text);
    CHECK(to_csv(parse_csv(text)) == text);
    ++checked;
  }
  CHECK(checked >= 5);
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(-0.0) == "0");
  CHECK(format_double(HUGE_VAL) == "inf");
  CHECK(canonicalize_csv("a,b\n0.1,x\n") == "a,b\n0.10000000000000001,x\n");
}

TEST_CASE("sweeps are deterministic across job counts") {
  for (const auto& preset : {std::string("fig1"), std::string("fig5")}) {
    TempDir one;
    TempDir many;
    std::vector<std::string> base = {"sweep", preset, "--seed", "9"};
    if (preset == "fig5") base.insert(base.end(), {"--horizon", "3000"});
    auto a = base;
    a.insert(a.end(), {"--jobs", "1", "--out", one.path.string()});
    auto b = base;
    b.insert(b.end(), {"--jobs", "4", "--out", many.path.string()});
    REQUIRE(run(a).status == 0);
    REQUIRE(run(b).status == 0);
    int compared = 0;
    for (const auto& e : fs::directory_iterator(one.path)) {
      const auto other = many.path / e.path().filename();
      REQUIRE(fs::exists(other));
      CHECK(read_text_file(e.path().string()) == read_text_file(other.string()));
      ++compared;
    }
    CHECK(compared >= 2);
  }
}

TEST_CASE("fig4 divergence structure") {
  const auto out = run_sweep("fig4", {});
  REQUIRE(out.complete());
  const auto& table = out.panel("fig4").table;
  for (const auto& [name, diverges] : std::vector<std::pair<std::string, bool>>{
           {"alpha_beta1", false}, {"alpha_beta2", true}, {"alpha_beta4", false}, {"alpha_beta5", true}, {"alpha_beta9", false}}) {
    bool any = false;
    bool stays = true;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const bool inf = std::isinf(table.number(r, name));
      if (any && !inf) stays = false;
      any = any || inf;
    }
    CAPTURE(name);
    CHECK(any == diverges);
    CHECK(stays);
  }
}

TEST_CASE("fig1 with a single line length") {
  TempDir dir;
  REQUIRE(run({"sweep", "fig1", "--n", "6", "--format", "svg,json", "--out", dir.path.string()}).status == 0);
  CHECK(fs::exists(dir.file("fig1_n6.svg")));
  CHECK(fs::exists(dir.file("fig1_n6.json")));
  CHECK_FALSE(fs::exists(dir.file("fig1_n9.csv")));
  const auto index = nlohmann::json::parse(read_text_file(dir.file("fig1_index.json")));
  CHECK(index["complete"] == true);
  const auto table = parse_csv(read_text_file(dir.file("fig1_n6.csv")));
  REQUIRE(table.rows.size() == 36);
  for (std::size_t s = 0; s < 6; ++s) {
    std::vector<double> theta;
    for (std::size_t k = 0; k < 6; ++k) theta.push_back(table.number(6 * s + k, "theta"));
    for (int i = 0; i < 6; ++i) CHECK(theta[static_cast<std::size_t>(i)] == doctest::Approx(theta[static_cast<std::size_t>(5 - i)]).epsilon(1e-12));
    CHECK(theta[0] > theta[1]);
    CHECK(theta[2] > theta[1]);
  }
}
