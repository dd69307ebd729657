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

#include "limbkin/geometry.hpp"

#include <cmath>
#include <string>

#include "limbkin/errors.hpp"
#include "limbkin/units.hpp"

namespace limbkin {

namespace {

void require_positive(double value, const char* field) {
  if (!std::isfinite(value)) throw ConfigError(std::string(field) + " must be finite");
  if (!(value > 0.0)) throw ConfigError(std::string(field) + " must be positive");
}

void require_finite(double value, const char* field) {
  if (!std::isfinite(value)) throw ConfigError(std::string(field) + " must be finite");
}

}  // namespace

void LinkageGeometry::validate() const {
  require_positive(l1, "l1");
  require_positive(l2, "l2");
  require_positive(lAD, "lAD");
  require_positive(lAB, "lAB");
  require_positive(lBC, "lBC");
  require_positive(lCD, "lCD");
  require_positive(h, "h");
  require_positive(r, "r");
  require_finite(theta_ins, "theta_ins");
  require_finite(theta_up, "theta_up");
  require_finite(theta_dn, "theta_dn");
  if (!(theta_dn < theta_up)) throw ConfigError("theta_dn must be less than theta_up");
  if (theta_up >= kPi / 2.0 || theta_dn <= -kPi / 2.0) {
    throw ConfigError("theta_dn and theta_up must lie strictly inside (-90, 90) deg");
  }
}

LinkageGeometry LinkageGeometry::with_lcd(double lcd) const {
  LinkageGeometry g = *this;
  g.lCD = lcd;
  return g;
}

LinkageGeometry LinkageGeometry::with_theta_ins(double angle) const {
  LinkageGeometry g = *this;
  g.theta_ins = angle;
  return g;
}

LinkageGeometry reference_geometry() {
  LinkageGeometry g;
  g.theta_ins = kCalibratedInstallAngle;
  return g;
}

std::vector<std::string> assumed_parameters() { return {"h", "r", "theta_ins"}; }

std::string_view to_string(ServoRole role) {
  switch (role) {
    case ServoRole::Lift: return "lift";
    case ServoRole::Steer: return "steer";
    case ServoRole::Lock: return "lock";
  }
  return "lift";
}

ServoRole servo_role_from_string(std::string_view s) {
  if (s == "lift") return ServoRole::Lift;
  if (s == "steer") return ServoRole::Steer;
  if (s == "lock") return ServoRole::Lock;
  throw ConfigError("unknown servo role '" + std::string(s) + "' (expected lift, steer or lock)");
}

void ServoSpec::validate() const {
  if (name.empty()) throw ConfigError("servo name must not be empty");
  const std::string prefix = "servo '" + name + "': ";
  if (!std::isfinite(steady_torque) || !(steady_torque > 0.0)) {
    throw ConfigError(prefix + "steady_torque must be positive");
  }
  if (!std::isfinite(rated_speed) || !(rated_speed > 0.0)) {
    throw ConfigError(prefix + "rated_speed must be positive");
  }
  if (!std::isfinite(angle_min) || !std::isfinite(angle_max)) {
    throw ConfigError(prefix + "angle limits must be finite");
  }
  if (!(angle_min < angle_max)) throw ConfigError(prefix + "angle_min must be less than angle_max");
}

std::vector<ServoSpec> reference_servos() {
  const double speed = seconds_per_60deg_to_rad_per_s(0.12);
  return {
      {"servo1", ServoRole::Lift, kgcm_to_newton_metre(500.0), speed, deg_to_rad(-90.0),
       deg_to_rad(135.0)},
      {"servo2", ServoRole::Steer, kgcm_to_newton_metre(20.0), speed, kSteerMin, kSteerMax},
      {"servo3", ServoRole::Lock, kgcm_to_newton_metre(2.0), speed, 0.0, kSteerMax},
  };
}

}  // namespace limbkin
