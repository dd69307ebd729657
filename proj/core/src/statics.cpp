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

#include "limbkin/statics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "limbkin/errors.hpp"
#include "limbkin/kinematics.hpp"
#include "limbkin/units.hpp"

namespace limbkin {

double ForceResolution::magnitude() const { return std::abs(T_s); }

InternalAngles internal_angles(const LinkageGeometry& geom, double theta_l) {
  const double lAC = coupler_diagonal(geom, theta_l);
  if (!(lAC > 0.0)) throw InfeasibleLinkage("ACD", "infeasible linkage: diagonal AC collapses");
  const double lAC2 = lAC * lAC;
  const double lAB2 = geom.lAB * geom.lAB;
  const double lBC2 = geom.lBC * geom.lBC;
  InternalAngles a;
  a.theta_B = clamped_acos((lAB2 + lBC2 - lAC2) / (2.0 * geom.lAB * geom.lBC), "ABC");
  a.theta_C = clamped_acos((lAC2 + lBC2 - lAB2) / (2.0 * lAC * geom.lBC), "ABC") +
              clamped_acos((lAC2 + geom.lCD * geom.lCD - geom.lAD * geom.lAD) /
                               (2.0 * lAC * geom.lCD),
                           "ACD");
  return a;
}

ForceResolution servo_torque(const LinkageGeometry& geom, double theta_l, double w) {
  const InternalAngles a = internal_angles(geom, theta_l);
  const double sin_C = std::sin(a.theta_C);
  if (!(std::abs(sin_C) > kSingularSin)) {
    throw SingularityError("transmission singularity: |sin theta_C| = " +
                           std::to_string(std::abs(sin_C)) + " at theta_l = " +
                           std::to_string(rad_to_deg(theta_l)) + " deg");
  }
  ForceResolution f;
  f.theta_B = a.theta_B;
  f.theta_C = a.theta_C;
  const double load_moment = geom.l1 * w * std::cos(theta_l);
  f.F_BC = load_moment / (geom.lCD * sin_C);
  f.T_s = -(geom.lAB * load_moment * std::sin(a.theta_B)) / (geom.lCD * sin_C);
  return f;
}

double virtual_work_torque(const LinkageGeometry& geom, double theta_l, double w) {
  constexpr double h = 1e-6;
  const double rate =
      (servo_angle(geom, theta_l + h).theta_s - servo_angle(geom, theta_l - h).theta_s) / (2.0 * h);
  if (!(std::abs(rate) > 1e-9)) {
    throw SingularityError("servo angle rate vanishes at theta_l = " +
                           std::to_string(rad_to_deg(theta_l)) + " deg");
  }
  return geom.l1 * w * std::cos(theta_l) / rate;
}

TorquePeak max_torque_over_workspace(const LinkageGeometry& geom, double w) {
  const double span = geom.theta_up - geom.theta_dn;
  const auto n = static_cast<std::size_t>(std::ceil(span / kWorkspaceSampleStep - 1e-9)) + 1;
  TorquePeak peak;
  for (std::size_t i = 0; i < n; ++i) {
    const double theta_l =
        i + 1 == n ? geom.theta_up : geom.theta_dn + span * static_cast<double>(i) / (n - 1);
    const double t = servo_torque(geom, theta_l, w).magnitude();
    if (i == 0 || t > peak.max_abs_torque) {
      peak.max_abs_torque = t;
      peak.theta_l = theta_l;
    }
  }
  return peak;
}

ServoMargin servo_margin(const ServoSpec& servo, double demand, double safety_factor) {
  ServoMargin m;
  m.name = servo.name;
  m.capacity = servo.steady_torque;
  if (demand > 0.0) {
    m.margin = servo.steady_torque / demand;
    m.pass = m.margin >= safety_factor;
  } else {
    m.margin = INFINITY;
    m.pass = true;
  }
  return m;
}

bool SizingReport::all_pass() const {
  return std::all_of(servos.begin(), servos.end(), [](const ServoMargin& m) { return m.pass; });
}

SizingReport motor_sizing(const LinkageGeometry& geom, double load_scale,
                          std::span<const ServoSpec> servos, double safety_factor) {
  if (!(load_scale > 0.0) || !std::isfinite(load_scale)) {
    throw RangeError("load_scale must be positive");
  }
  SizingReport report;
  const TorquePeak peak = max_torque_over_workspace(geom, kReferenceLoad);
  report.reference_demand = peak.max_abs_torque;
  report.theta_l_at_max = peak.theta_l;
  report.load_scale = load_scale;
  report.demand = peak.max_abs_torque * load_scale;
  report.safety_factor = safety_factor;
  for (const auto& s : servos) report.servos.push_back(servo_margin(s, report.demand, safety_factor));
  return report;
}

}  // namespace limbkin
