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

#include <numbers>

namespace limbkin {

inline constexpr double kPi = std::numbers::pi;

/// Standard gravity, m/s^2. One kilogram-force is this many newtons.
inline constexpr double kStandardGravity = 9.80665;

constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

constexpr double mm_to_m(double mm) { return mm / 1000.0; }
constexpr double m_to_mm(double m) { return m * 1000.0; }

/// Servo datasheets quote torque in kg·cm. 1 kgf·cm = 9.80665 N × 0.01 m.
/// Throws RangeError for negative input.
double kgcm_to_newton_metre(double kgcm);
double newton_metre_to_kgcm(double nm);

/// Hobby-servo speed ratings are "seconds per 60 degrees".
double seconds_per_60deg_to_rad_per_s(double seconds);
double rad_per_s_to_seconds_per_60deg(double rad_per_s);

}  // namespace limbkin
