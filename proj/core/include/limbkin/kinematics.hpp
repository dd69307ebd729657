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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "limbkin/geometry.hpp"

namespace limbkin {

/// Solution of the driving four-bar at one lifting angle.
struct FourBarSolution {
  double lAC = 0.0;        // diagonal A-C, m
  double angle_BAC = 0.0;  // rad
  double angle_DAC = 0.0;  // rad
  double theta_A = 0.0;    // angle_BAC + angle_DAC
  double theta_s = 0.0;    // theta_A - theta_ins
};

/// Arguments of acos within this distance outside [-1, 1] are clamped;
/// anything further is an infeasible triangle.
inline constexpr double kAcosTolerance = 1e-9;

/// acos with the tolerance above. Throws InfeasibleLinkage naming `triangle`.
double clamped_acos(double arg, std::string_view triangle);

/// Number of times clamped_acos clamped an argument that was outside
/// [-1, 1] (but within tolerance). Process-wide, monotone.
std::uint64_t acos_clamp_count();

/// Wheel ground point from the lifting angle:
/// p = (l1 cos theta_l, l1 sin theta_l + h - r). Throws RangeError outside
/// [theta_dn, theta_up].
Point2 fk_wheel_position(const LinkageGeometry& geom, double theta_l);

/// Same expression without the workspace check (terrain contact search
/// probes the whole closed interval and needs the raw map).
Point2 wheel_position_unchecked(const LinkageGeometry& geom, double theta_l);

/// l_AC from triangle ACD with the angle at D equal to pi - theta_l - theta_ins.
double coupler_diagonal(const LinkageGeometry& geom, double theta_l);

/// Servo angle for a lifting angle via the two cosine-law triangles.
FourBarSolution servo_angle(const LinkageGeometry& geom, double theta_l);

/// Sampling step used by workspace_check (0.1 deg).
inline constexpr double kWorkspaceSampleStep = 0.0017453292519943296;

struct WorkspaceReport {
  bool feasible = false;
  bool monotonic = false;
  int direction = 0;  // +1 increasing theta_s(theta_l), -1 decreasing
  double theta_s_min = 0.0;
  double theta_s_max = 0.0;
  double theta_l_at_min = 0.0;
  double theta_l_at_max = 0.0;
  std::size_t samples = 0;
  /// Whether [theta_dn, theta_up] covers the [-30, 50] deg contour-following
  /// requirement.
  bool covers_requirement = false;
  std::vector<std::string> failures;

  bool passes() const { return feasible && monotonic; }
};

/// Samples theta_l over [theta_dn, theta_up] at <= 0.1 deg. Never throws for
/// infeasibility; failures are listed in the report.
WorkspaceReport workspace_check(const LinkageGeometry& geom);

/**
 * Kinematics bound to one geometry.
 *
 * The workspace report (feasibility, monotonicity and the theta_s range) is
 * computed once at construction, so the numeric inverse can rely on it.
 */
class Kinematics {
 public:
  explicit Kinematics(const LinkageGeometry& geom);

  const LinkageGeometry& geometry() const noexcept { return geom_; }
  const WorkspaceReport& workspace() const noexcept { return report_; }

  FourBarSolution servo_angle(double theta_l) const;

  /// theta_l such that servo_angle(theta_l).theta_s == theta_s, by bisection
  /// over the workspace. Throws ConfigError when the mapping is infeasible or
  /// not monotonic, RangeError when theta_s is outside the achievable range.
  double inverse_servo(double theta_s) const;

  Point2 fk_from_servo(double theta_s) const;

  LimbState limb_state(double theta_l, double theta_z) const;

 private:
  LinkageGeometry geom_;
  WorkspaceReport report_;
};

inline double inverse_servo(const LinkageGeometry& geom, double theta_s) {
  return Kinematics(geom).inverse_servo(theta_s);
}

inline Point2 fk_from_servo(const LinkageGeometry& geom, double theta_s) {
  return Kinematics(geom).fk_from_servo(theta_s);
}

}  // namespace limbkin
