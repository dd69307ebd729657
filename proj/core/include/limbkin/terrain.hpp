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

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "limbkin/geometry.hpp"
#include "limbkin/kinematics.hpp"

namespace limbkin {

/// Width of the linear blend at each edge of a soft span, m.
inline constexpr double kSoftBlend = 0.05;

struct SoftSpan {
  double x_start = 0.0;
  double x_end = 0.0;
  double depth = 0.0;  // prescribed sinkage, m
};

/// One piece of a terrain description: length measured along the slope.
struct TerrainSegment {
  double length = 0.0;  // m
  double slope = 0.0;   // rad, positive climbs
  std::optional<double> sinkage;  // m, marks the segment soft
};

/**
 * Piecewise-linear ground with soft spans.
 *
 * The effective surface is the nominal polyline lowered inside each soft span
 * by its depth, with linear ramps of kSoftBlend at the span edges. It is kept
 * as its own polyline so contact queries are exact.
 */
class TerrainProfile {
 public:
  TerrainProfile(std::vector<Point2> vertices, std::vector<SoftSpan> soft_spans);

  const std::vector<Point2>& vertices() const noexcept { return vertices_; }
  const std::vector<SoftSpan>& soft_spans() const noexcept { return soft_; }
  const std::vector<Point2>& effective_polyline() const noexcept { return effective_; }

  double x_min() const noexcept { return vertices_.front().x; }
  double x_max() const noexcept { return vertices_.back().x; }

  double nominal_height(double x) const;
  double effective_height(double x) const;
  /// nominal - effective at x.
  double sinkage(double x) const;

  /// Largest |slope| of the effective surface, rad.
  double max_slope() const;

  /// Reflection x -> -x.
  TerrainProfile mirrored() const;

 private:
  double offset(double x) const;
  void check_range(double x) const;

  std::vector<Point2> vertices_;
  std::vector<SoftSpan> soft_;
  std::vector<Point2> effective_;
};

/// Assembles segments left to right from (0, 0). The first segment must be
/// flat; |slope| must stay below 90 deg.
TerrainProfile build_terrain(std::span<const TerrainSegment> segments);

/// Climb 30 deg, descend 30 deg, then a 50-deg-walled trap with a 100 mm soft floor.
std::vector<TerrainSegment> fig2_segments();
TerrainProfile fig2_terrain();

double effective_height(const TerrainProfile& profile, double x);

struct RoverPose {
  double x = 0.0;      // front-axle ground track
  double z = 0.0;
  double pitch = 0.0;  // rad, nose up positive
};

/// Two-axle kinematic body with both axle ground points on the effective
/// surface. Fixed-point iteration on the rear-axle x (<= 50 iterations,
/// 1e-9 m). Throws RangeError or ConvergenceError.
RoverPose solve_rover_pose(const TerrainProfile& profile, double x_front, double wheelbase);

enum class Saturation { None, Hanging, Jammed };

std::string_view to_string(Saturation s);

/// Wheel centre in the world frame for a lifting angle.
Point2 wheel_centre(const LinkageGeometry& geom, const RoverPose& pose,
                    double mount_offset, double theta_l);

struct Clearance {
  double value = 0.0;  // signed: negative means penetration
  Point2 closest;      // nearest point of the effective surface
  Point2 normal;       // unit surface normal at `closest`, pointing out of the ground
};

/// Signed distance between the wheel circle and the effective surface.
Clearance wheel_clearance(const LinkageGeometry& geom, const RoverPose& pose,
                          const TerrainProfile& profile, double mount_offset,
                          double theta_l);

struct ContactResult {
  double theta_l = 0.0;
  Point2 contact;
  double contact_angle = 0.0;  // surface normal vs vertical, rad
  double sinkage = 0.0;        // m
  double clearance = 0.0;
  Saturation saturation = Saturation::None;
};

/// Lowers the passive limb from theta_up until the wheel first touches the
/// effective surface: the largest theta_l with zero clearance.
ContactResult contact_solve(const LinkageGeometry& geom, const RoverPose& pose,
                            const TerrainProfile& profile, double mount_offset = 0.0);

enum class Direction { Forward, Reverse };

struct TraverseOptions {
  double wheelbase = 0.726;
  double mount_offset = 0.0;
  double step = 0.01;
  double w = 9.8;
  Direction direction = Direction::Forward;
};

struct TraverseRecord {
  double distance = 0.0;
  RoverPose pose;           // x in the original terrain frame, pitch nose-up along travel
  double theta_l = 0.0;
  double theta_s = 0.0;     // NaN if the four-bar cannot reach theta_l
  double T_s = 0.0;         // NaN if singular or unreachable
  Point2 contact;           // original terrain frame
  double contact_angle = 0.0;  // in the direction of travel
  double sinkage = 0.0;
  double clearance = 0.0;
  Saturation saturation = Saturation::None;
};

struct TraverseTrace {
  std::vector<TraverseRecord> records;
};

/// Marches the front axle over the terrain. Reverse drives towards -x; it is
/// computed on the mirrored profile and mapped back.
TraverseTrace traverse(const Kinematics& kin, const TerrainProfile& profile,
                       const TraverseOptions& options);

}  // namespace limbkin
