#pragma once

// Static SVG line charts of a metric against simulated hour, with dashed
// vertical markers at group entry hours.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "pscrd/report.hpp"
#include "pscrd/simulator.hpp"

namespace pscrd::chart {

enum class ChartKind { gini, nakamoto };

inline const char* to_string(ChartKind k) { return k == ChartKind::gini ? "gini" : "nakamoto"; }

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

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

inline constexpr const char* kPalette[] = {"#e8710a", "#7b3fa0", "#1f77b4", "#2ca02c",
                                           "#d62728", "#8c564b", "#e377c2", "#7f7f7f",
                                           "#bcbd22", "#17becf"};
inline constexpr const char* kMarkerColors[] = {"#d62728", "#2ca02c", "#1f77b4", "#9467bd"};

}  // namespace detail

inline std::string render_svg(std::span<const Series> series, std::span<const double> markers,
                              const std::string& title, const std::string& y_label) {
  constexpr double width = 720, height = 420;
  constexpr double left = 70, right = 20, top = 40, bottom = 55;
  const double plot_w = width - left - right, plot_h = height - top - bottom;

  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  bool first = true;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (first) {
        x_min = x_max = s.x[i];
        y_max = s.y[i];
        first = false;
      }
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      y_max = std::max(y_max, s.y[i]);
    }
  }
  if (x_max <= x_min) x_max = x_min + 1;
  y_max = y_max <= 0 ? 1.0 : y_max * 1.1;
  y_min = 0;

  auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return top + plot_h - (y - y_min) / (y_max - y_min) * plot_h; };

  using detail::num;
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
         num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(width / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
         detail::escape(title) + "</text>\n";

  // axes and ticks
  svg += "<g stroke=\"#333\" stroke-width=\"1\">\n";
  svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + plot_h) + "\" x2=\"" + num(left + plot_w) +
         "\" y2=\"" + num(top + plot_h) + "\"/>\n";
  svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" +
         num(top + plot_h) + "\"/>\n";
  svg += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = x_min + (x_max - x_min) * i / 5.0;
    const double yv = y_min + (y_max - y_min) * i / 5.0;
    svg += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(top + plot_h + 16) +
           "\" text-anchor=\"middle\">" + num(xv) + "</text>\n";
    svg += "<text x=\"" + num(left - 6) + "\" y=\"" + num(py(yv) + 4) + "\" text-anchor=\"end\">" +
           num(yv) + "</text>\n";
  }
  svg += "<text x=\"" + num(left + plot_w / 2) + "\" y=\"" + num(height - 12) +
         "\" text-anchor=\"middle\">Time (hours)</text>\n";
  svg += "<text x=\"16\" y=\"" + num(top + plot_h / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         num(top + plot_h / 2) + ")\">" + detail::escape(y_label) + "</text>\n</g>\n";

  for (std::size_t m = 0; m < markers.size(); ++m) {
    const char* color = detail::kMarkerColors[m % std::size(detail::kMarkerColors)];
    svg += "<line class=\"marker\" x1=\"" + num(px(markers[m])) + "\" y1=\"" + num(top) + "\" x2=\"" +
           num(px(markers[m])) + "\" y2=\"" + num(top + plot_h) + "\" stroke=\"" + color +
           "\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>\n";
  }

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    std::string points;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) points += ' ';
      points += num(px(s.x[i])) + "," + num(py(s.y[i]));
    }
    const char* color = detail::kPalette[k % std::size(detail::kPalette)];
    svg += "<polyline class=\"series\" fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
    if (series.size() > 1) {
      const double ly = top + 14 + 14.0 * static_cast<double>(k);
      svg += "<text x=\"" + num(left + plot_w - 4) + "\" y=\"" + num(ly) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" + color + "\">" +
             detail::escape(s.label) + "</text>\n";
    }
  }
  svg += "</svg>\n";
  return svg;
}

// Group entries after the first one get a marker; a single-group scenario
// has none.
inline std::vector<double> entry_markers(std::span<const double> join_hours) {
  if (join_hours.size() <= 1) return {};
  return {join_hours.begin() + 1, join_hours.end()};
}

inline Series metric_series(std::span<const sim::MetricsSnapshot> snaps, ChartKind kind,
                            std::string label, bool decayed = true) {
  Series s{std::move(label), {}, {}};
  for (const auto& snap : snaps) {
    s.x.push_back(static_cast<double>(snap.hour));
    if (kind == ChartKind::gini)
      s.y.push_back(decayed ? snap.gini_decayed : snap.gini_raw);
    else
      s.y.push_back(static_cast<double>(decayed ? snap.nakamoto_decayed : snap.nakamoto_raw));
  }
  return s;
}

inline std::string title_for(ChartKind kind) {
  return kind == ChartKind::gini ? "Gini Index over Time" : "Nakamoto Coefficient over Time";
}

inline void emit_chart(std::span<const sim::MetricsSnapshot> snaps, ChartKind kind,
                       std::span<const double> join_hours, const std::filesystem::path& path) {
  if (snaps.empty()) throw IoError("cannot chart an empty series");
  const Series s = metric_series(snaps, kind, to_string(kind));
  const auto markers = entry_markers(join_hours);
  report::write_file(path, render_svg(std::span(&s, 1), markers, title_for(kind),
                                      kind == ChartKind::gini ? "Gini index" : "Nakamoto coefficient"));
}

inline void emit_overlay(std::span<const Series> series, ChartKind kind,
                         std::span<const double> join_hours, const std::filesystem::path& path) {
  if (series.empty()) throw IoError("cannot chart an empty overlay");
  report::write_file(path, render_svg(series, entry_markers(join_hours), title_for(kind),
                                      kind == ChartKind::gini ? "Gini index" : "Nakamoto coefficient"));
}

}  // namespace pscrd::chart
