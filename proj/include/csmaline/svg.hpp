#pragma once

#include "csmaline/simulator.hpp"

#include <string>
#include <vector>

namespace csmaline {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;  // non-finite values break the line
  bool dashed = false;
  bool step = false;  // piecewise constant, held until the next x
};

struct ReferenceLine {
  double y;
  std::string label;
};

struct PlotSpec {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  std::vector<PlotSeries> series;
  std::vector<ReferenceLine> references;  // dotted horizontal lines
};

std::string line_plot_svg(const PlotSpec& spec);

/// One row per node, black while the node is active within [t0, t1].
std::string barcode_svg(const Trace& trace, int n, double t0, double t1, const std::string& title);

}  // namespace csmaline
