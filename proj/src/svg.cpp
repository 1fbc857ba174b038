#include "csmaline/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace csmaline {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string tick_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

// Ticks at 1, 2 or 5 times a power of ten.
std::vector<double> ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (span / step <= 6.0) break;
  }
  std::vector<double> out;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step) out.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
  return out;
}

struct Frame {
  double x0, x1, y0, y1;

  [[nodiscard]] double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  [[nodiscard]] double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

void axes(std::ostringstream& o, const Frame& f, const std::string& title, const std::string& xlabel,
          const std::string& ylabel) {
  o << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(kWidth - kLeft - kRight)
    << "\" height=\"" << num(kHeight - kTop - kBottom) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ticks(f.x0, f.x1)) {
    o << "<line x1=\"" << num(f.px(t)) << "\" y1=\"" << num(kHeight - kBottom) << "\" x2=\"" << num(f.px(t))
      << "\" y2=\"" << num(kHeight - kBottom + 5) << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << num(f.px(t)) << "\" y=\"" << num(kHeight - kBottom + 18)
      << "\" text-anchor=\"middle\" font-size=\"11\">" << tick_label(t) << "</text>\n";
  }
  for (double t : ticks(f.y0, f.y1)) {
    o << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(f.py(t)) << "\" x2=\"" << num(kLeft) << "\" y2=\""
      << num(f.py(t)) << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(f.py(t) + 4)
      << "\" text-anchor=\"end\" font-size=\"11\">" << tick_label(t) << "</text>\n";
  }
  o << "<text x=\"" << num((kLeft + kWidth - kRight) / 2) << "\" y=\"" << num(kTop - 15)
    << "\" text-anchor=\"middle\" font-size=\"14\">" << escape(title) << "</text>\n";
  o << "<text x=\"" << num((kLeft + kWidth - kRight) / 2) << "\" y=\"" << num(kHeight - 10)
    << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(xlabel) << "</text>\n";
  o << "<text transform=\"translate(18," << num((kTop + kHeight - kBottom) / 2)
    << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"12\">" << escape(ylabel) << "</text>\n";
}

// Long series keep the first, last, lowest and highest point of each pixel column.
std::vector<std::size_t> thin(const Frame& f, const PlotSeries& ser) {
  const std::size_t count = std::min(ser.x.size(), ser.y.size());
  std::vector<std::size_t> keep;
  if (count <= 2 * static_cast<std::size_t>(kWidth)) {
    for (std::size_t k = 0; k < count; ++k) keep.push_back(k);
    return keep;
  }
  std::size_t k = 0;
  while (k < count) {
    if (!std::isfinite(ser.x[k]) || !std::isfinite(ser.y[k])) {
      keep.push_back(k++);
      continue;
    }
    const auto column = static_cast<long>(f.px(ser.x[k]));
    const std::size_t first = k;
    std::size_t lo = k, hi = k, last = k;
    for (; k < count && std::isfinite(ser.x[k]) && std::isfinite(ser.y[k]) && static_cast<long>(f.px(ser.x[k])) == column; ++k) {
      if (ser.y[k] < ser.y[lo]) lo = k;
      if (ser.y[k] > ser.y[hi]) hi = k;
      last = k;
    }
    std::vector<std::size_t> picked{first, lo, hi, last};
    std::sort(picked.begin(), picked.end());
    picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
    keep.insert(keep.end(), picked.begin(), picked.end());
  }
  return keep;
}

std::string header() {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

}  // namespace

std::string line_plot_svg(const PlotSpec& spec) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  double x0 = inf, x1 = -inf, y0 = inf, y1 = -inf;
  for (const auto& s : spec.series) {
    for (std::size_t k = 0; k < s.x.size() && k < s.y.size(); ++k) {
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
      x0 = std::min(x0, s.x[k]);
      x1 = std::max(x1, s.x[k]);
      y0 = std::min(y0, s.y[k]);
      y1 = std::max(y1, s.y[k]);
    }
  }
  for (const auto& r : spec.references) {
    y0 = std::min(y0, r.y);
    y1 = std::max(y1, r.y);
  }
  if (!(x0 <= x1)) x0 = 0.0, x1 = 1.0;
  if (!(y0 <= y1)) y0 = 0.0, y1 = 1.0;
  y0 = std::min(y0, 0.0);
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;
  y1 += 0.05 * (y1 - y0);
  const Frame f{x0, x1, y0, y1};

  std::ostringstream o;
  o << header();
  axes(o, f, spec.title, spec.xlabel, spec.ylabel);
  for (const auto& r : spec.references) {
    o << "<line x1=\"" << num(f.px(x0)) << "\" y1=\"" << num(f.py(r.y)) << "\" x2=\"" << num(f.px(x1)) << "\" y2=\""
      << num(f.py(r.y)) << "\" stroke=\"gray\" stroke-dasharray=\"2,3\"/>\n";
  }
  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const auto& ser = spec.series[s];
    const char* color = kPalette[s % std::size(kPalette)];
    std::string points;
    auto flush = [&] {
      if (!points.empty()) {
        o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\""
          << (ser.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"" << points << "\"/>\n";
      }
      points.clear();
    };
    const std::vector<std::size_t> keep = thin(f, ser);
    double prev_y = 0.0;
    bool have_prev = false;
    for (std::size_t k : keep) {
      if (!std::isfinite(ser.x[k]) || !std::isfinite(ser.y[k])) {
        flush();
        have_prev = false;
        continue;
      }
      if (ser.step && have_prev) points += num(f.px(ser.x[k])) + "," + num(f.py(prev_y)) + " ";
      points += num(f.px(ser.x[k])) + "," + num(f.py(ser.y[k])) + " ";
      prev_y = ser.y[k];
      have_prev = true;
    }
    flush();
    const double ly = kTop + 15.0 + 18.0 * static_cast<double>(s);
    o << "<line x1=\"" << num(kWidth - kRight + 10) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(kWidth - kRight + 35)
      << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"1.5\""
      << (ser.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
    o << "<text x=\"" << num(kWidth - kRight + 40) << "\" y=\"" << num(ly + 4) << "\" font-size=\"11\">"
      << escape(ser.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string barcode_svg(const Trace& trace, int n, double t0, double t1, const std::string& title) {
  const Frame f{t0, t1, 0.0, static_cast<double>(n)};
  std::ostringstream o;
  o << header();
  o << "<text x=\"" << num((kLeft + kWidth - kRight) / 2) << "\" y=\"" << num(kTop - 15)
    << "\" text-anchor=\"middle\" font-size=\"14\">" << escape(title) << "</text>\n";
  const double row = (kHeight - kTop - kBottom) / n;
  std::vector<double> on_since(static_cast<std::size_t>(n), -1.0);
  auto bar = [&](int node, double a, double b) {
    a = std::max(a, t0);
    b = std::min(b, t1);
    if (b <= a) return;
    o << "<rect x=\"" << num(f.px(a)) << "\" y=\"" << num(kTop + row * (node - 1) + 2) << "\" width=\""
      << num(std::max(0.3, f.px(b) - f.px(a))) << "\" height=\"" << num(row - 4) << "\" fill=\"black\"/>\n";
  };
  for (const auto& r : trace.records) {
    if (r.node < 1 || r.node > n) continue;
    auto& since = on_since[static_cast<std::size_t>(r.node - 1)];
    if (r.event == TraceEvent::On) {
      since = r.t;
    } else if (r.event == TraceEvent::Off && since >= 0.0) {
      bar(r.node, since, r.t);
      since = -1.0;
    }
  }
  for (int i = 1; i <= n; ++i) {
    if (on_since[static_cast<std::size_t>(i - 1)] >= 0.0) bar(i, on_since[static_cast<std::size_t>(i - 1)], t1);
    o << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(kTop + row * (i - 0.5) + 4)
      << "\" text-anchor=\"end\" font-size=\"11\">node " << i << "</text>\n";
  }
  for (double t : ticks(t0, t1)) {
    o << "<text x=\"" << num(f.px(t)) << "\" y=\"" << num(kHeight - kBottom + 18)
      << "\" text-anchor=\"middle\" font-size=\"11\">" << tick_label(t) << "</text>\n";
  }
  o << "<text x=\"" << num((kLeft + kWidth - kRight) / 2) << "\" y=\"" << num(kHeight - 10)
    << "\" text-anchor=\"middle\" font-size=\"12\">time</text>\n";
  o << "</svg>\n";
  return o.str();
}

}  // namespace csmaline
