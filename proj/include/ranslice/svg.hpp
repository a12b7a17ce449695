#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "ranslice/text.hpp"

namespace ranslice {

struct SeriesPoint {
  double x = 0, y = 0;
};

struct Series {
  std::string name;
  std::vector<SeriesPoint> points;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool x_log = false;  // plot against log10(x)
  int width = 720;
  int height = 460;
  std::string annotation;  // provenance line embedded as a comment
};

namespace detail {

inline std::string svg_escape(const std::string& s) {
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

inline std::string xy(double x, double y) {
  return fmt_double_fixed(x, 2) + "," + fmt_double_fixed(y, 2);
}

struct TickSet {
  std::vector<double> values;
  double lo = 0, hi = 1;
};

inline TickSet nice_ticks(double lo, double hi, int target) {
  if (!(hi > lo)) {
    const double pad = std::max(1.0, std::abs(lo)) * 0.5;
    lo -= pad;
    hi += pad;
  }
  const double step0 = (hi - lo) / std::max(1, target);
  const double mag = std::pow(10.0, std::floor(std::log10(step0)));
  const double norm = step0 / mag;
  const double step = mag * (norm < 1.5 ? 1.0 : norm < 3.0 ? 2.0 : norm < 7.0 ? 5.0 : 10.0);
  TickSet t;
  t.lo = std::floor(lo / step) * step;
  t.hi = std::ceil(hi / step) * step;
  for (double v = t.lo; v <= t.hi + step * 0.5; v += step) {
    const double snapped = std::abs(v) < step * 1e-9 ? 0.0 : v;
    t.values.push_back(snapped);
  }
  return t;
}

inline const char* series_color(std::size_t i) {
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  return kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
}

}  // namespace detail

// Deterministic standalone SVG line plot: identical input produces identical
// bytes. Series are drawn in order with a fixed palette, circle markers, and
// a legend when more than one series is present.
inline std::string render_line_plot(const std::vector<Series>& series, const PlotSpec& spec) {
  if (series.empty()) throw std::invalid_argument("render_line_plot: no series");
  std::size_t total_points = 0;
  for (const auto& s : series) total_points += s.points.size();
  if (total_points == 0) throw std::invalid_argument("render_line_plot: no points");

  auto tx = [&](double x) { return spec.x_log ? std::log10(x) : x; };

  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const auto& s : series)
    for (const auto& p : s.points) {
      if (spec.x_log && !(p.x > 0))
        throw std::invalid_argument("render_line_plot: log axis needs positive x");
      x_min = std::min(x_min, tx(p.x));
      x_max = std::max(x_max, tx(p.x));
      y_min = std::min(y_min, p.y);
      y_max = std::max(y_max, p.y);
    }

  const detail::TickSet xt = spec.x_log
                                 ? [&] {
                                     detail::TickSet t;
                                     t.lo = std::floor(x_min);
                                     t.hi = std::ceil(x_max);
                                     if (t.hi <= t.lo) t.hi = t.lo + 1;
                                     for (double v = t.lo; v <= t.hi + 0.5; v += 1.0)
                                       t.values.push_back(v);
                                     return t;
                                   }()
                                 : detail::nice_ticks(x_min, x_max, 6);
  const detail::TickSet yt = detail::nice_ticks(y_min, y_max, 6);

  const double ml = 72, mr = 24, mt = 40, mb = 52;  // margins
  const double pw = spec.width - ml - mr;
  const double ph = spec.height - mt - mb;
  auto sx = [&](double x) { return ml + (tx(x) - xt.lo) / (xt.hi - xt.lo) * pw; };
  auto sy = [&](double y) { return mt + ph - (y - yt.lo) / (yt.hi - yt.lo) * ph; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) +
         "\" height=\"" + std::to_string(spec.height) + "\" viewBox=\"0 0 " +
         std::to_string(spec.width) + " " + std::to_string(spec.height) + "\">\n";
  if (!spec.annotation.empty())
    svg += "<!-- " + detail::svg_escape(spec.annotation) + " -->\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  // grid and ticks
  for (double v : xt.values) {
    const double gx = ml + (v - xt.lo) / (xt.hi - xt.lo) * pw;
    svg += "<line x1=\"" + fmt_double_fixed(gx, 2) + "\" y1=\"" + fmt_double_fixed(mt, 2) +
           "\" x2=\"" + fmt_double_fixed(gx, 2) + "\" y2=\"" + fmt_double_fixed(mt + ph, 2) +
           "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
    const double label = spec.x_log ? std::pow(10.0, v) : v;
    svg += "<text x=\"" + fmt_double_fixed(gx, 2) + "\" y=\"" +
           fmt_double_fixed(mt + ph + 18, 2) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
           detail::svg_escape(fmt_double(label)) + "</text>\n";
  }
  for (double v : yt.values) {
    const double gy = mt + ph - (v - yt.lo) / (yt.hi - yt.lo) * ph;
    svg += "<line x1=\"" + fmt_double_fixed(ml, 2) + "\" y1=\"" + fmt_double_fixed(gy, 2) +
           "\" x2=\"" + fmt_double_fixed(ml + pw, 2) + "\" y2=\"" + fmt_double_fixed(gy, 2) +
           "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fmt_double_fixed(ml - 6, 2) + "\" y=\"" + fmt_double_fixed(gy + 4, 2) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" +
           detail::svg_escape(fmt_double(v)) + "</text>\n";
  }
  svg += "<rect x=\"" + fmt_double_fixed(ml, 2) + "\" y=\"" + fmt_double_fixed(mt, 2) +
         "\" width=\"" + fmt_double_fixed(pw, 2) + "\" height=\"" + fmt_double_fixed(ph, 2) +
         "\" fill=\"none\" stroke=\"#404040\" stroke-width=\"1\"/>\n";

  // series
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    if (s.points.empty()) continue;
    const char* color = detail::series_color(i);
    if (s.points.size() > 1) {
      std::string pts;
      for (const auto& p : s.points) {
        if (!pts.empty()) pts += " ";
        pts += detail::xy(sx(p.x), sy(p.y));
      }
      svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
             "\" stroke-width=\"1.8\" points=\"" + pts + "\"/>\n";
    }
    for (const auto& p : s.points)
      svg += "<circle cx=\"" + fmt_double_fixed(sx(p.x), 2) + "\" cy=\"" +
             fmt_double_fixed(sy(p.y), 2) + "\" r=\"3\" fill=\"" + std::string(color) + "\"/>\n";
  }

  // legend
  if (series.size() > 1) {
    const double lx = ml + pw - 150, ly = mt + 10;
    for (std::size_t i = 0; i < series.size(); ++i) {
      const double row_y = ly + 16 * static_cast<double>(i);
      svg += "<line x1=\"" + fmt_double_fixed(lx, 2) + "\" y1=\"" + fmt_double_fixed(row_y, 2) +
             "\" x2=\"" + fmt_double_fixed(lx + 22, 2) + "\" y2=\"" +
             fmt_double_fixed(row_y, 2) + "\" stroke=\"" + detail::series_color(i) +
             "\" stroke-width=\"2\"/>\n";
      svg += "<text x=\"" + fmt_double_fixed(lx + 28, 2) + "\" y=\"" +
             fmt_double_fixed(row_y + 4, 2) +
             "\" font-family=\"sans-serif\" font-size=\"11\">" +
             detail::svg_escape(series[i].name) + "</text>\n";
    }
  }

  // labels
  svg += "<text x=\"" + fmt_double_fixed(ml + pw / 2, 2) + "\" y=\"20\" " +
         "font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">" +
         detail::svg_escape(spec.title) + "</text>\n";
  svg += "<text x=\"" + fmt_double_fixed(ml + pw / 2, 2) + "\" y=\"" +
         fmt_double_fixed(mt + ph + 40, 2) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" +
         detail::svg_escape(spec.x_label) + "</text>\n";
  svg += "<text x=\"16\" y=\"" + fmt_double_fixed(mt + ph / 2, 2) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" " +
         "transform=\"rotate(-90 16 " + fmt_double_fixed(mt + ph / 2, 2) + ")\">" +
         detail::svg_escape(spec.y_label) + "</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace ranslice
