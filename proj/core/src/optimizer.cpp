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

#include "limbkin/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "limbkin/errors.hpp"
#include "limbkin/kinematics.hpp"
#include "limbkin/statics.hpp"
#include "limbkin/units.hpp"

namespace limbkin {

std::vector<double> AxisRange::values() const {
  if (!(step > 0.0) || !std::isfinite(step)) throw RangeError("axis step must be positive");
  if (!std::isfinite(start) || !std::isfinite(stop) || stop < start) {
    throw RangeError("axis range must be finite and non-empty");
  }
  const auto intervals = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
  std::vector<double> out;
  out.reserve(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) out.push_back(start + static_cast<double>(i) * step);
  if (std::abs(out.back() - stop) <= 1e-9 * step) out.back() = stop;
  return out;
}

SweepGrid::SweepGrid(std::vector<double> theta_l_axis, std::vector<double> lcd_axis)
    : theta_l_(std::move(theta_l_axis)),
      lcd_(std::move(lcd_axis)),
      theta_s_(theta_l_.size() * lcd_.size()),
      torque_(theta_l_.size() * lcd_.size()) {}

std::size_t SweepGrid::index(std::size_t row, std::size_t col) const {
  if (row >= rows() || col >= cols()) throw RangeError("sweep grid index out of range");
  return row * cols() + col;
}

bool SweepGrid::feasible(std::size_t row, std::size_t col) const {
  return theta_s_[index(row, col)].has_value();
}

std::optional<double> SweepGrid::theta_s(std::size_t row, std::size_t col) const {
  return theta_s_[index(row, col)];
}

std::optional<double> SweepGrid::torque(std::size_t row, std::size_t col) const {
  return torque_[index(row, col)];
}

void SweepGrid::set(std::size_t row, std::size_t col, double theta_s, double torque) {
  const std::size_t i = index(row, col);
  theta_s_[i] = theta_s;
  torque_[i] = torque;
}

SweepGrid sweep(const LinkageGeometry& geom, const AxisRange& theta_l, const AxisRange& lcd,
                double w) {
  SweepGrid grid(theta_l.values(), lcd.values());
  for (std::size_t row = 0; row < grid.rows(); ++row) {
    const LinkageGeometry g = geom.with_lcd(grid.lcd_axis()[row]);
    for (std::size_t col = 0; col < grid.cols(); ++col) {
      const double tl = grid.theta_l_axis()[col];
      try {
        const double ts = servo_angle(g, tl).theta_s;
        const double t = servo_torque(g, tl, w).T_s;
        grid.set(row, col, ts, t);
      } catch (const InfeasibleLinkage&) {
      } catch (const SingularityError&) {
      }
    }
  }
  return grid;
}

std::vector<RowAggregate> aggregate(const SweepGrid& grid) {
  std::vector<RowAggregate> out;
  out.reserve(grid.rows());
  for (std::size_t row = 0; row < grid.rows(); ++row) {
    RowAggregate agg;
    agg.lcd = grid.lcd_axis()[row];
    for (std::size_t col = 0; col < grid.cols(); ++col) {
      const auto ts = grid.theta_s(row, col);
      if (!ts) continue;
      const double t = std::abs(*grid.torque(row, col));
      ++agg.feasible_cells;
      if (!agg.min_theta_s || *ts < *agg.min_theta_s) agg.min_theta_s = *ts;
      if (!agg.max_abs_torque || t > *agg.max_abs_torque) agg.max_abs_torque = t;
    }
    agg.fully_feasible = grid.cols() > 0 && agg.feasible_cells == grid.cols();
    out.push_back(agg);
  }
  return out;
}

std::string_view to_string(OptimumCriterion c) {
  switch (c) {
    case OptimumCriterion::Moderate: return "moderate";
    case OptimumCriterion::MinTorque: return "min-torque";
    case OptimumCriterion::MinAngle: return "min-angle";
  }
  return "moderate";
}

OptimumCriterion optimum_criterion_from_string(std::string_view s) {
  if (s == "moderate") return OptimumCriterion::Moderate;
  if (s == "min-torque") return OptimumCriterion::MinTorque;
  if (s == "min-angle") return OptimumCriterion::MinAngle;
  throw ConfigError("unknown optimum criterion '" + std::string(s) +
                    "' (expected moderate, min-torque or min-angle)");
}

namespace {

// Orders candidate rows by lCD value so the pick does not depend on the
// order the grid axis was laid out in.
bool better(const RowAggregate& a, const RowAggregate& b, double ka, double kb) {
  if (ka != kb) return ka < kb;
  return a.lcd < b.lcd;
}

}  // namespace

Optimum select_optimum(const SweepGrid& grid, const OptimumCriteria& criteria) {
  Optimum result;
  result.table = aggregate(grid);

  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < result.table.size(); ++i) {
    if (result.table[i].fully_feasible) eligible.push_back(i);
  }
  if (eligible.empty()) throw RangeError("no lCD row is feasible over the whole theta_l range");

  double best_angle = std::numeric_limits<double>::infinity();
  double best_torque = std::numeric_limits<double>::infinity();
  for (std::size_t i : eligible) {
    best_angle = std::min(best_angle, *result.table[i].min_theta_s);
    best_torque = std::min(best_torque, *result.table[i].max_abs_torque);
  }

  // Relative excess over the best value of each objective.
  auto excess_angle = [&](const RowAggregate& r) {
    return (*r.min_theta_s - best_angle) / std::max(std::abs(best_angle), 1e-12);
  };
  auto excess_torque = [&](const RowAggregate& r) {
    return (*r.max_abs_torque - best_torque) / std::max(std::abs(best_torque), 1e-12);
  };
  auto key = [&](const RowAggregate& r) -> double {
    switch (criteria.kind) {
      case OptimumCriterion::MinTorque: return *r.max_abs_torque;
      case OptimumCriterion::MinAngle: return *r.min_theta_s;
      case OptimumCriterion::Moderate: break;
    }
    const bool within = excess_angle(r) <= criteria.angle_fraction + 1e-12 &&
                        excess_torque(r) <= criteria.torque_fraction + 1e-12;
    // Rows inside both tolerances rank by lCD alone (key 0); otherwise by the
    // worse of the two normalised excesses.
    return within ? 0.0
                  : 1.0 + std::max(excess_angle(r) / criteria.angle_fraction,
                                   excess_torque(r) / criteria.torque_fraction);
  };

  std::size_t pick = eligible.front();
  for (std::size_t i : eligible) {
    if (better(result.table[i], result.table[pick], key(result.table[i]), key(result.table[pick]))) {
      pick = i;
    }
  }
  result.row = pick;
  result.lcd = result.table[pick].lcd;
  result.min_theta_s = *result.table[pick].min_theta_s;
  result.max_abs_torque = *result.table[pick].max_abs_torque;
  return result;
}

std::optional<double> workspace_min_theta_s(const LinkageGeometry& geom) {
  const double span = geom.theta_up - geom.theta_dn;
  const auto n = static_cast<std::size_t>(std::ceil(span / kWorkspaceSampleStep - 1e-9)) + 1;
  double lowest = std::numeric_limits<double>::infinity();
  try {
    for (std::size_t i = 0; i < n; ++i) {
      const double theta_l =
          i + 1 == n ? geom.theta_up : geom.theta_dn + span * static_cast<double>(i) / (n - 1);
      lowest = std::min(lowest, servo_angle(geom, theta_l).theta_s);
    }
  } catch (const InfeasibleLinkage&) {
    return std::nullopt;
  }
  return lowest;
}

CalibrationResult calibrate_installation_angle(const LinkageGeometry& geom, double target,
                                               double lcd, double lo, double hi) {
  if (!(hi > lo)) throw RangeError("calibration search interval is empty");
  const LinkageGeometry base = geom.with_lcd(lcd);
  auto residual = [&](double theta_ins) -> std::optional<double> {
    const auto m = workspace_min_theta_s(base.with_theta_ins(theta_ins));
    if (!m) return std::nullopt;
    return std::abs(*m) - target;
  };

  // Open interval: samples at cell centres of a 0.1 deg scan.
  const double scan_step = deg_to_rad(0.1);
  const auto cells = static_cast<std::size_t>(std::ceil((hi - lo) / scan_step));
  const double cell = (hi - lo) / static_cast<double>(cells);

  CalibrationResult result;
  std::vector<std::pair<double, double>>& curve = result.residual_curve;
  curve.reserve(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    const double x = lo + (static_cast<double>(i) + 0.5) * cell;
    const auto r = residual(x);
    curve.emplace_back(x, r ? *r : std::numeric_limits<double>::quiet_NaN());
  }

  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    double a = curve[i].first, fa = curve[i].second;
    double b = curve[i + 1].first, fb = curve[i + 1].second;
    if (std::isnan(fa) || std::isnan(fb)) continue;
    if (fa == 0.0) b = a, fb = fa;
    else if (fa * fb > 0.0) continue;

    bool ok = true;
    for (int iter = 0; iter < 200 && b - a > 1e-13; ++iter) {
      const double mid = 0.5 * (a + b);
      const auto fm = residual(mid);
      if (!fm) {
        ok = false;
        break;
      }
      if ((*fm < 0.0) == (fa < 0.0)) {
        a = mid;
        fa = *fm;
      } else {
        b = mid;
        fb = *fm;
      }
    }
    if (!ok) continue;

    const double theta_ins = std::abs(fa) <= std::abs(fb) ? a : b;
    const LinkageGeometry solved = base.with_theta_ins(theta_ins);
    const WorkspaceReport report = workspace_check(solved);
    if (!report.feasible) continue;
    const double achieved = *workspace_min_theta_s(solved);
    if (std::abs(std::abs(achieved) - target) > deg_to_rad(0.05)) continue;

    result.theta_ins = theta_ins;
    result.min_theta_s = achieved;
    result.residual = std::abs(achieved) - target;
    return result;
  }

  throw CalibrationError("calibration failure: no installation angle in (" +
                             std::to_string(rad_to_deg(lo)) + ", " + std::to_string(rad_to_deg(hi)) +
                             ") deg gives |min theta_s| = " + std::to_string(rad_to_deg(target)) +
                             " deg at lCD = " + std::to_string(m_to_mm(lcd)) + " mm",
                         std::move(curve));
}

}  // namespace limbkin
