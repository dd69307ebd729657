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

#include <string>
#include <string_view>
#include <vector>

namespace limbkin {

/// Planar point in the limb plane: x forward, z up. Metres.
struct Point2 {
  double x = 0.0;
  double z = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/**
 * Mechanism parameters of the wheel-on-limb.
 *
 * The limb is a parallelogram of long side l1 pivoting at height h above
 * the rover ground datum; the test wheel of radius r hangs from its far end.
 * The parallelogram is driven by a four-bar A-B-C-D: A is the servo pivot,
 * AB the servo crank, BC the coupler, CD the rocker fixed to the limb at D,
 * and AD the ground link mounted at the installation angle theta_ins.
 *
 * All lengths in metres, all angles in radians.
 */
struct LinkageGeometry {
  double l1 = 0.370;
  double l2 = 0.120;  // layout only; no kinematic effect
  double lAD = 0.102;
  double lAB = 0.120;
  double lBC = 0.130;
  double lCD = 0.160;
  double theta_ins = 0.0;
  double h = 0.150;
  double r = 0.100;
  double theta_up = 1.0471975511965976;    // +60 deg
  double theta_dn = -0.69813170079773179;  // -40 deg

  /// Throws ConfigError naming the field and the violated constraint.
  void validate() const;

  LinkageGeometry with_lcd(double lcd) const;
  LinkageGeometry with_theta_ins(double angle) const;

  bool in_workspace(double theta_l, double tol = 1e-12) const {
    return theta_l >= theta_dn - tol && theta_l <= theta_up + tol;
  }

  friend bool operator==(const LinkageGeometry&, const LinkageGeometry&) = default;
};

/// Installation angle recorded for the reference link set by
/// calibrate_installation_angle (|min theta_s| = 45.64 deg at lCD = 160 mm).
inline constexpr double kCalibratedInstallAngle = 1.4081027664225245;  // 80.678 deg

/// Reference link lengths with the recorded calibrated installation angle and
/// the assumed h, r defaults.
LinkageGeometry reference_geometry();

/// Parameter names whose values are not design data (h, r are assumed
/// defaults; theta_ins is calibrated). Reports list these.
std::vector<std::string> assumed_parameters();

enum class ServoRole { Lift, Steer, Lock };

std::string_view to_string(ServoRole role);
ServoRole servo_role_from_string(std::string_view s);

struct ServoSpec {
  std::string name;
  ServoRole role = ServoRole::Lift;
  double steady_torque = 0.0;  // N·m
  double rated_speed = 0.0;    // rad/s
  double angle_min = 0.0;      // rad
  double angle_max = 0.0;      // rad

  void validate() const;

  friend bool operator==(const ServoSpec&, const ServoSpec&) = default;
};

/// Servo-1 (lift, 500 kg·cm), Servo-2 (steer, 20 kg·cm), Servo-3 (lock, 2 kg·cm).
std::vector<ServoSpec> reference_servos();

/// Wheel steer range about the vertical axis.
inline constexpr double kSteerMin = 0.0;
inline constexpr double kSteerMax = 1.5707963267948966;

/// Limb configuration at one instant.
struct LimbState {
  double theta_l = 0.0;
  double theta_s = 0.0;
  Point2 wheel_pos;
  double theta_z = 0.0;
};

}  // namespace limbkin
