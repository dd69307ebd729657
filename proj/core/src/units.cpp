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

#include "limbkin/units.hpp"

#include <cmath>
#include <string>

#include "limbkin/errors.hpp"

namespace limbkin {

namespace {
constexpr double kKgcmToNm = kStandardGravity / 100.0;
constexpr double kSixtyDeg = kPi / 3.0;
}  // namespace

double kgcm_to_newton_metre(double kgcm) {
  if (!(kgcm >= 0.0)) {
    throw RangeError("torque rating must be non-negative, got " + std::to_string(kgcm) + " kg·cm");
  }
  return kgcm * kKgcmToNm;
}

double newton_metre_to_kgcm(double nm) {
  if (!(nm >= 0.0)) {
    throw RangeError("torque rating must be non-negative, got " + std::to_string(nm) + " N·m");
  }
  return nm / kKgcmToNm;
}

double seconds_per_60deg_to_rad_per_s(double seconds) {
  if (!(seconds > 0.0) || !std::isfinite(seconds)) {
    throw RangeError("servo speed rating must be positive, got " + std::to_string(seconds) + " s/60deg");
  }
  return kSixtyDeg / seconds;
}

double rad_per_s_to_seconds_per_60deg(double rad_per_s) {
  if (!(rad_per_s > 0.0) || !std::isfinite(rad_per_s)) {
    throw RangeError("servo speed must be positive, got " + std::to_string(rad_per_s) + " rad/s");
  }
  return kSixtyDeg / rad_per_s;
}

}  // namespace limbkin
