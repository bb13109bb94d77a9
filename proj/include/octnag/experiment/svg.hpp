#pragma once
//
// Self-contained SVG line charts. Output depends only on the input data, so
// identical series give byte-identical files.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace octnag::experiment {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
  bool markers = false;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

struct ChartLayout {
  double width = 720, height = 440;
  double left = 80, right = 170, top = 40, bottom = 60;
  double plot_left() const { return left; }
  double plot_right() const { return width - right; }
  double plot_top() const { return top; }
  double plot_bottom() const { return height - bottom; }
};

namespace svg_detail {

inline std::string fmt(const char* pattern, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

inline std::string coord(double v) { return fmt("%.2f", v); }

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = 0.0, hi = 1.0;
};

inline Range data_range(const std::vector<Series>& series, bool use_x) {
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& s : series) {
    const std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      const double v = use_x ? s.x[i] : s.y[i];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(lo <= hi)) return {0.0, 1.0};
  if (lo == hi) {
    const double pad = lo == 0.0 ? 0.5 : 0.5 * std::abs(lo);
    return {lo - pad, hi + pad};
  }
  return {lo, hi};
}

// Tick positions on a 1-2-5 step inside [lo, hi].
inline std::vector<double> ticks(Range r, int target = 5) {
  const double raw = (r.hi - r.lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (raw <= step) break;
  }
  std::vector<double> out;
  for (double v = std::ceil(r.lo / step) * step; v <= r.hi + 1e-9 * step; v += step) {
    out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  }
  return out;
}

inline const char* color(std::size_t i) {
  static const char* palette[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return palette[i % 10];
}

}  // namespace svg_detail

inline std::string render_svg(const Chart& chart, const ChartLayout& layout = {}) {
  using namespace svg_detail;
  const Range xr = data_range(chart.series, true);
  const Range yr = data_range(chart.series, false);
  const double x0 = layout.plot_left(), x1 = layout.plot_right();
  const double y0 = layout.plot_bottom(), y1 = layout.plot_top();
  auto sx = [&](double v) { return x0 + (v - xr.lo) / (xr.hi - xr.lo) * (x1 - x0); };
  auto sy = [&](double v) { return y0 + (v - yr.lo) / (yr.hi - yr.lo) * (y1 - y0); };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%g", layout.width) + "\" height=\"" +
         fmt("%g", layout.height) + "\" viewBox=\"0 0 " + fmt("%g", layout.width) + " " + fmt("%g", layout.height) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + coord((x0 + x1) / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(chart.title) + "</text>\n";

  // axes and ticks
  out += "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n";
  out += "<line x1=\"" + coord(x0) + "\" y1=\"" + coord(y0) + "\" x2=\"" + coord(x1) + "\" y2=\"" + coord(y0) + "\"/>\n";
  out += "<line x1=\"" + coord(x0) + "\" y1=\"" + coord(y0) + "\" x2=\"" + coord(x0) + "\" y2=\"" + coord(y1) + "\"/>\n";
  out += "</g>\n<g class=\"ticks\" font-size=\"10\">\n";
  for (double t : ticks(xr)) {
    const std::string px = coord(sx(t));
    out += "<line x1=\"" + px + "\" y1=\"" + coord(y0) + "\" x2=\"" + px + "\" y2=\"" + coord(y0 + 5) +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + px + "\" y=\"" + coord(y0 + 18) + "\" text-anchor=\"middle\">" + fmt("%g", t) + "</text>\n";
  }
  for (double t : ticks(yr)) {
    const std::string py = coord(sy(t));
    out += "<line x1=\"" + coord(x0 - 5) + "\" y1=\"" + py + "\" x2=\"" + coord(x0) + "\" y2=\"" + py +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + coord(x0 - 8) + "\" y=\"" + coord(sy(t) + 3) + "\" text-anchor=\"end\">" + fmt("%g", t) +
           "</text>\n";
  }
  out += "</g>\n";
  out += "<text x=\"" + coord((x0 + x1) / 2) + "\" y=\"" + coord(layout.height - 18) + "\" text-anchor=\"middle\">" +
         escape(chart.x_label) + "</text>\n";
  out += "<text x=\"18\" y=\"" + coord((y0 + y1) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         coord((y0 + y1) / 2) + ")\">" + escape(chart.y_label) + "</text>\n";

  // series: one polyline per finite run of points
  for (std::size_t i = 0; i < chart.series.size(); ++i) {
    const Series& s = chart.series[i];
    const std::string style = std::string("fill=\"none\" stroke=\"") + color(i) + "\" stroke-width=\"1.5\"" +
                              (s.dashed ? " stroke-dasharray=\"6 4\"" : "");
    out += "<g class=\"series\">\n";
    std::string points;
    auto flush = [&]() {
      if (!points.empty()) out += "<polyline " + style + " points=\"" + points + "\"/>\n";
      points.clear();
    };
    const std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t k = 0; k < n; ++k) {
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) {
        flush();
        continue;
      }
      if (!points.empty()) points += ' ';
      points += coord(sx(s.x[k])) + "," + coord(sy(s.y[k]));
      if (s.markers) {
        out += "<circle cx=\"" + coord(sx(s.x[k])) + "\" cy=\"" + coord(sy(s.y[k])) + "\" r=\"3\" fill=\"" +
               color(i) + "\"/>\n";
      }
    }
    flush();
    out += "</g>\n";
  }

  // legend
  if (!chart.series.empty()) {
    out += "<g class=\"legend\">\n";
    for (std::size_t i = 0; i < chart.series.size(); ++i) {
      const double ly = y1 + 10 + 18 * double(i);
      out += "<line x1=\"" + coord(x1 + 12) + "\" y1=\"" + coord(ly) + "\" x2=\"" + coord(x1 + 36) + "\" y2=\"" +
             coord(ly) + "\" stroke=\"" + color(i) + "\" stroke-width=\"2\"" +
             (chart.series[i].dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
      out += "<text x=\"" + coord(x1 + 42) + "\" y=\"" + coord(ly + 4) + "\">" + escape(chart.series[i].label) +
             "</text>\n";
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace octnag::experiment
