#pragma once

#include "csmaline/csv.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace csmaline {

/// Values that replace parts of a preset grid; empty fields keep the preset.
struct SweepOverrides {
  std::optional<int> n;
  std::optional<int> beta;
  std::optional<double> sigma;
  std::optional<double> alpha;
  std::optional<double> r;
  std::optional<double> horizon;
  std::optional<double> warmup;
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct SweepPanel {
  std::string name;
  CsvTable table;
  std::string svg;
};

struct SweepCell {
  std::string label;
  std::vector<std::string> panels;
  bool complete = false;
  std::string error;
};

struct SweepOutput {
  std::string preset;
  std::vector<SweepPanel> panels;
  std::vector<SweepCell> cells;

  [[nodiscard]] bool complete() const;
  [[nodiscard]] const SweepPanel& panel(const std::string& name) const;
};

std::vector<std::string> sweep_presets();

/// Runs the preset grid with up to overrides.jobs cells in flight. A failing cell
/// is recorded as incomplete; the remaining cells still run.
SweepOutput run_sweep(const std::string& preset, const SweepOverrides& overrides);

/// Writes <panel>.csv (and .svg / .json when asked) plus <preset>_index.json;
/// returns the paths written.
std::vector<std::string> write_sweep(const SweepOutput& output, const std::string& out_dir, bool svg, bool json);

}  // namespace csmaline
