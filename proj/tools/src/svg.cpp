// Copyright 2026 The limbkin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "output.hpp"

namespace limbkin::cli {

namespace {

constexpr double kWidth = 720.0;
constexpr double kPanelHeight = 320.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;
constexpr std::array<const char*, 6> kColours{"#1f77b4", "#d62728", "#2ca02c",
                                              "#ff7f0e", "#9467bd", "#8c564b"};

std::string px(double v) { return format_number(v, 2); }

std::string escape(const std::string& s) {
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
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

// Widens a degenerate range and snaps it outward to the tick step.
std::pair<Range, double> axis(Range r) {
  if (!(r.hi > r.lo)) {
    const double pad = std::max(std::abs(r.lo) * 0.1, 1.0);
    r.lo -= pad;
    r.hi += pad;
  }
  const double step = nice_step(r.hi - r.lo, 5);
  r.lo = std::floor(r.lo / step) * step;
  r.hi = std::ceil(r.hi / step) * step;
  return {r, step};
}

std::string tick_label(double v, double step) {
  const int decimals = std::max(0, static_cast<int>(-std::floor(std::log10(step) + 1e-9)));
  return format_number(v, decimals);
}

void validate(std::span<const Panel> panels) {
  if (panels.empty()) throw std::invalid_argument("nothing to plot: no panels");
  for (const auto& p : panels) {
    if (p.series.empty()) throw std::invalid_argument("nothing to plot: panel '" + p.title + "' has no series");
    for (const auto& s : p.series) {
      if (s.x.size() != s.y.size()) {
        throw std::invalid_argument("series '" + s.label + "' has mismatched x and y lengths");
      }
      bool any = false;
      for (std::size_t i = 0; i < s.x.size(); ++i) any = any || (std::isfinite(s.x[i]) && std::isfinite(s.y[i]));
      if (!any) throw std::invalid_argument("series '" + s.label + "' is empty");
    }
  }
}

void render_panel(std::string& svg, const Panel& panel, double y0) {
  Range xr, yr;
  for (const auto& s : panel.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xr.add(s.x[i]);
      yr.add(s.y[i]);
    }
  }
  const auto [xa, xstep] = axis(xr);
  const auto [ya, ystep] = axis(yr);

  const double left = kLeft;
  const double right = kWidth - kRight;
  const double top = y0 + kTop;
  const double bottom = y0 + kPanelHeight - kBottom;
  auto sx = [&](double x) { return left + (x - xa.lo) / (xa.hi - xa.lo) * (right - left); };
  auto sy = [&](double y) { return bottom - (y - ya.lo) / (ya.hi - ya.lo) * (bottom - top); };

  svg += "<g class=\"panel\">\n";
  svg += "<text x=\"" + px(kWidth / 2.0) + "\" y=\"" + px(y0 + 24.0) +
         "\" text-anchor=\"middle\" font-size=\"15\">" + escape(panel.title) + "</text>\n";
  svg += "<rect x=\"" + px(left) + "\" y=\"" + px(top) + "\" width=\"" + px(right - left) +
         "\" height=\"" + px(bottom - top) + "\" fill=\"none\" stroke=\"#000\"/>\n";

  const auto nx = static_cast<int>(std::lround((xa.hi - xa.lo) / xstep));
  for (int i = 0; i <= nx; ++i) {
    const double v = xa.lo + i * xstep;
    const double x = sx(v);
    svg += "<line x1=\"" + px(x) + "\" y1=\"" + px(bottom) + "\" x2=\"" + px(x) + "\" y2=\"" +
           px(bottom + 5.0) + "\" stroke=\"#000\"/>\n";
    svg += "<text x=\"" + px(x) + "\" y=\"" + px(bottom + 18.0) +
           "\" text-anchor=\"middle\" font-size=\"11\">" + tick_label(v, xstep) + "</text>\n";
  }
  const auto ny = static_cast<int>(std::lround((ya.hi - ya.lo) / ystep));
  for (int i = 0; i <= ny; ++i) {
    const double v = ya.lo + i * ystep;
    const double y = sy(v);
    svg += "<line x1=\"" + px(left - 5.0) + "\" y1=\"" + px(y) + "\" x2=\"" + px(left) +
           "\" y2=\"" + px(y) + "\" stroke=\"#000\"/>\n";
    svg += "<text x=\"" + px(left - 8.0) + "\" y=\"" + px(y + 4.0) +
           "\" text-anchor=\"end\" font-size=\"11\">" + tick_label(v, ystep) + "</text>\n";
  }
  svg += "<text x=\"" + px((left + right) / 2.0) + "\" y=\"" + px(bottom + 38.0) +
         "\" text-anchor=\"middle\" font-size=\"12\">" + escape(panel.x_label) + "</text>\n";
  svg += "<text x=\"" + px(20.0) + "\" y=\"" + px((top + bottom) / 2.0) +
         "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 " + px(20.0) + " " +
         px((top + bottom) / 2.0) + ")\">" + escape(panel.y_label) + "</text>\n";

  for (std::size_t k = 0; k < panel.series.size(); ++k) {
    const Series& s = panel.series[k];
    std::string d;
    bool pen_down = false;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        pen_down = false;
        continue;
      }
      if (!d.empty()) d += ' ';
      d += (pen_down ? "L " : "M ") + px(sx(s.x[i])) + " " + px(sy(s.y[i]));
      pen_down = true;
    }
    const char* colour = kColours[k % kColours.size()];
    svg += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + colour +
           "\" stroke-width=\"1.5\"><title>" + escape(s.label) + "</title></path>\n";
    if (panel.series.size() > 1) {
      const double ly = top + 14.0 + 16.0 * static_cast<double>(k);
      svg += "<line x1=\"" + px(right - 150.0) + "\" y1=\"" + px(ly) + "\" x2=\"" +
             px(right - 130.0) + "\" y2=\"" + px(ly) + "\" stroke=\"" + colour +
             "\" stroke-width=\"2\"/>\n";
      svg += "<text x=\"" + px(right - 125.0) + "\" y=\"" + px(ly + 4.0) + "\" font-size=\"11\">" +
             escape(s.label) + "</text>\n";
    }
  }
  svg += "</g>\n";
}

}  // namespace

std::string render_svg(std::span<const Panel> panels) {
  validate(panels);
  const double height = kPanelHeight * static_cast<double>(panels.size());
  std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(kWidth) + "\" height=\"" +
         px(height) + "\" viewBox=\"0 0 " + px(kWidth) + " " + px(height) +
         "\" font-family=\"sans-serif\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
  for (std::size_t i = 0; i < panels.size(); ++i) {
    render_panel(svg, panels[i], kPanelHeight * static_cast<double>(i));
  }
  svg += "</svg>\n";
  return svg;
}

void emit_svg(const std::filesystem::path& path, std::span<const Panel> panels) {
  write_atomic(path, render_svg(panels));
}

}  // namespace limbkin::cli
