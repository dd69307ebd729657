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

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace limbkin::cli {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;  // NaN breaks the line
};

struct Panel {
  std::string title;
  std::string x_label;  // include units, e.g. "lCD (mm)"
  std::string y_label;
  std::vector<Series> series;
};

/**
 * Standalone SVG of one or more stacked line-plot panels with axes, ticks,
 * labels and a legend. The output depends only on the input values.
 *
 * Throws std::invalid_argument when there is nothing to draw: no panels, a
 * panel without series, mismatched x/y lengths, or a series with no finite
 * point.
 */
std::string render_svg(std::span<const Panel> panels);

void emit_svg(const std::filesystem::path& path, std::span<const Panel> panels);

}  // namespace limbkin::cli
