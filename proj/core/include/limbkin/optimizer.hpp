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

#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "limbkin/geometry.hpp"

namespace limbkin {

/// Inclusive arithmetic range. The stop value is included when it lies
/// within 1e-9 of a step.
struct AxisRange {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  std::vector<double> values() const;
};

/// Response of theta_s and T_s over (lCD, theta_l). Row-major, rows = lCD.
class SweepGrid {
 public:
  SweepGrid(std::vector<double> theta_l_axis, std::vector<double> lcd_axis);

  const std::vector<double>& theta_l_axis() const noexcept { return theta_l_; }
  const std::vector<double>& lcd_axis() const noexcept { return lcd_; }
  std::size_t rows() const noexcept { return lcd_.size(); }
  std::size_t cols() const noexcept { return theta_l_.size(); }

  bool feasible(std::size_t row, std::size_t col) const;
  std::optional<double> theta_s(std::size_t row, std::size_t col) const;
  std::optional<double> torque(std::size_t row, std::size_t col) const;

  void set(std::size_t row, std::size_t col, double theta_s, double torque);

 private:
  std::size_t index(std::size_t row, std::size_t col) const;

  std::vector<double> theta_l_;
  std::vector<double> lcd_;
  std::vector<std::optional<double>> theta_s_;
  std::vector<std::optional<double>> torque_;
};

/// Evaluates servo_angle and servo_torque at every grid point. Infeasible or
/// singular points are left empty.
SweepGrid sweep(const LinkageGeometry& geom, const AxisRange& theta_l,
                const AxisRange& lcd, double w);

struct RowAggregate {
  double lcd = 0.0;
  std::optional<double> min_theta_s;     // over feasible cells
  std::optional<double> max_abs_torque;  // over feasible cells
  std::size_t feasible_cells = 0;
  bool fully_feasible = false;
};

std::vector<RowAggregate> aggregate(const SweepGrid& grid);

enum class OptimumCriterion {
  Moderate,   // smallest lCD within tolerance of both best values
  MinTorque,
  MinAngle,
};

std::string_view to_string(OptimumCriterion c);
OptimumCriterion optimum_criterion_from_string(std::string_view s);

struct OptimumCriteria {
  OptimumCriterion kind = OptimumCriterion::Moderate;
  double angle_fraction = 0.05;
  double torque_fraction = 0.05;
};

struct Optimum {
  std::size_t row = 0;
  double lcd = 0.0;
  double min_theta_s = 0.0;
  double max_abs_torque = 0.0;
  std::vector<RowAggregate> table;  // every row, for the Pareto report
};

/// Picks lCD among fully feasible rows. Both aggregates are lower-is-better.
/// Throws RangeError when no row is fully feasible.
Optimum select_optimum(const SweepGrid& grid, const OptimumCriteria& criteria = {});

struct CalibrationResult {
  double theta_ins = 0.0;
  double min_theta_s = 0.0;  // signed workspace minimum at the calibrated angle
  double residual = 0.0;     // |min_theta_s| - target
  std::vector<std::pair<double, double>> residual_curve;
};

/// Workspace minimum of theta_s for `geom`, or nullopt when the linkage is
/// infeasible anywhere on [theta_dn, theta_up].
std::optional<double> workspace_min_theta_s(const LinkageGeometry& geom);

/**
 * Solves for the installation angle so that the magnitude of the workspace
 * minimum of theta_s at link length `lcd` equals `target`.
 *
 * The search scans (lo, hi) for a sign change of the residual among fully
 * feasible angles, then bisects. Throws CalibrationError carrying the scanned
 * residual curve when no root exists.
 */
CalibrationResult calibrate_installation_angle(const LinkageGeometry& geom,
                                               double target, double lcd,
                                               double lo = 0.0,
                                               double hi = 1.5707963267948966);

}  // namespace limbkin
