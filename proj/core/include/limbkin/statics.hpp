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

#include <span>
#include <string>
#include <vector>

#include "limbkin/geometry.hpp"

namespace limbkin {

/// Reference gravity load for torque demand, N.
inline constexpr double kReferenceLoad = 9.8;

/// |sin theta_C| at or below this is a transmission singularity.
inline constexpr double kSingularSin = 1e-6;

struct InternalAngles {
  double theta_B = 0.0;  // angle ABC at the coupler/crank joint
  double theta_C = 0.0;  // angle BCD at the coupler/rocker joint
};

struct ForceResolution {
  double theta_B = 0.0;
  double theta_C = 0.0;
  double F_BC = 0.0;  // coupler member force, N
  double T_s = 0.0;   // servo torque, N·m, negative = opposing the load moment

  double magnitude() const;
};

InternalAngles internal_angles(const LinkageGeometry& geom, double theta_l);

/**
 * Quasi-static servo torque holding a wheel load w.
 *
 * Moment balance of the rocker about D gives the coupler force
 * F_BC = l1 w cos(theta_l) / (lCD sin theta_C); that force acts on the
 * crank at arm lAB, so T_s = -lAB l1 w cos(theta_l) sin(theta_B) / (lCD sin theta_C).
 * Negating w gives the ground-loading mode.
 *
 * Throws SingularityError when |sin theta_C| <= 1e-6.
 */
ForceResolution servo_torque(const LinkageGeometry& geom, double theta_l, double w);

/// Load moment over the servo-angle rate, dtheta_s/dtheta_l by central
/// difference (h = 1e-6). Independent check on servo_torque.
double virtual_work_torque(const LinkageGeometry& geom, double theta_l, double w);

struct TorquePeak {
  double max_abs_torque = 0.0;
  double theta_l = 0.0;
};

/// Largest |T_s| over the workspace, sampled at 0.1 deg.
TorquePeak max_torque_over_workspace(const LinkageGeometry& geom, double w);

struct ServoMargin {
  std::string name;
  double capacity = 0.0;  // N·m
  double margin = 0.0;    // capacity / demand
  bool pass = false;
};

struct SizingReport {
  double reference_load = kReferenceLoad;
  double reference_demand = 0.0;  // max |T_s| at the reference load
  double theta_l_at_max = 0.0;
  double load_scale = 1.0;
  double demand = 0.0;  // reference_demand * load_scale
  double safety_factor = 1.5;
  std::vector<ServoMargin> servos;

  bool all_pass() const;
};

/// Sizes each servo against the scaled workspace torque demand. Throws
/// RangeError for load_scale <= 0.
SizingReport motor_sizing(const LinkageGeometry& geom, double load_scale,
                          std::span<const ServoSpec> servos,
                          double safety_factor = 1.5);

ServoMargin servo_margin(const ServoSpec& servo, double demand, double safety_factor);

}  // namespace limbkin
