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

#include "limbkin/kinematics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <string>

#include "limbkin/errors.hpp"
#include "limbkin/units.hpp"

namespace limbkin {

namespace {

std::atomic<std::uint64_t> g_clamps{0};

std::string fmt_deg(double rad) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f deg", rad_to_deg(rad));
  return buf;
}

void check_workspace(const LinkageGeometry& geom, double theta_l) {
  if (!std::isfinite(theta_l) || !geom.in_workspace(theta_l)) {
    throw RangeError("theta_l = " + fmt_deg(theta_l) + " outside workspace [" +
                     fmt_deg(geom.theta_dn) + ", " + fmt_deg(geom.theta_up) + "]");
  }
}

}  // namespace

double clamped_acos(double arg, std::string_view triangle) {
  if (!(std::abs(arg) <= 1.0)) {
    if (!(std::abs(arg) <= 1.0 + kAcosTolerance)) {
      throw InfeasibleLinkage(std::string(triangle),
                              "infeasible linkage: triangle " + std::string(triangle) +
                                  " cannot close (cosine " + std::to_string(arg) + ")");
    }
    g_clamps.fetch_add(1, std::memory_order_relaxed);
    arg = std::clamp(arg, -1.0, 1.0);
  }
  return std::acos(arg);
}

std::uint64_t acos_clamp_count() { return g_clamps.load(std::memory_order_relaxed); }

Point2 wheel_position_unchecked(const LinkageGeometry& geom, double theta_l) {
  return {geom.l1 * std::cos(theta_l), geom.l1 * std::sin(theta_l) + geom.h - geom.r};
}

Point2 fk_wheel_position(const LinkageGeometry& geom, double theta_l) {
  check_workspace(geom, theta_l);
  return wheel_position_unchecked(geom, theta_l);
}

double coupler_diagonal(const LinkageGeometry& geom, double theta_l) {
  const double theta_D = kPi - theta_l - geom.theta_ins;
  const double sq = geom.lAD * geom.lAD + geom.lCD * geom.lCD -
                    2.0 * geom.lAD * geom.lCD * std::cos(theta_D);
  return std::sqrt(std::max(sq, 0.0));
}

FourBarSolution servo_angle(const LinkageGeometry& geom, double theta_l) {
  FourBarSolution s;
  s.lAC = coupler_diagonal(geom, theta_l);
  if (!(s.lAC > 0.0)) {
    throw InfeasibleLinkage("ACD", "infeasible linkage: diagonal AC collapses at theta_l = " +
                                       fmt_deg(theta_l));
  }
  const double lAC2 = s.lAC * s.lAC;
  s.angle_BAC = clamped_acos(
      (geom.lAB * geom.lAB + lAC2 - geom.lBC * geom.lBC) / (2.0 * geom.lAB * s.lAC), "ABC");
  s.angle_DAC = clamped_acos(
      (geom.lAD * geom.lAD + lAC2 - geom.lCD * geom.lCD) / (2.0 * geom.lAD * s.lAC), "ACD");
  s.theta_A = s.angle_BAC + s.angle_DAC;
  s.theta_s = s.theta_A - geom.theta_ins;
  return s;
}

WorkspaceReport workspace_check(const LinkageGeometry& geom) {
  WorkspaceReport report;
  const double span = geom.theta_up - geom.theta_dn;
  const auto intervals = static_cast<std::size_t>(std::ceil(span / kWorkspaceSampleStep - 1e-9));
  const std::size_t n = std::max<std::size_t>(intervals, 1) + 1;
  report.samples = n;
  report.covers_requirement =
      geom.theta_dn <= deg_to_rad(-30.0) + 1e-12 && geom.theta_up >= deg_to_rad(50.0) - 1e-12;

  report.feasible = true;
  bool increasing = true;
  bool decreasing = true;
  double prev = 0.0;
  bool have_prev = false;
  bool have_range = false;

  for (std::size_t i = 0; i < n; ++i) {
    const double theta_l =
        i + 1 == n ? geom.theta_up : geom.theta_dn + span * static_cast<double>(i) / (n - 1);
    double theta_s = 0.0;
    try {
      theta_s = servo_angle(geom, theta_l).theta_s;
    } catch (const InfeasibleLinkage& e) {
      if (report.feasible) {
        report.failures.push_back("triangle " + e.triangle() + " infeasible at theta_l = " +
                                  fmt_deg(theta_l));
      }
      report.feasible = false;
      have_prev = false;
      continue;
    }
    if (!have_range || theta_s < report.theta_s_min) {
      report.theta_s_min = theta_s;
      report.theta_l_at_min = theta_l;
    }
    if (!have_range || theta_s > report.theta_s_max) {
      report.theta_s_max = theta_s;
      report.theta_l_at_max = theta_l;
    }
    have_range = true;
    if (have_prev) {
      if (!(theta_s > prev)) increasing = false;
      if (!(theta_s < prev)) decreasing = false;
    }
    prev = theta_s;
    have_prev = true;
  }

  report.monotonic = report.feasible && (increasing || decreasing);
  report.direction = report.monotonic ? (increasing ? 1 : -1) : 0;
  if (report.feasible && !report.monotonic) {
    report.failures.push_back("theta_s(theta_l) is not monotonic over the workspace");
  }
  return report;
}

Kinematics::Kinematics(const LinkageGeometry& geom) : geom_(geom), report_(workspace_check(geom)) {}

FourBarSolution Kinematics::servo_angle(double theta_l) const {
  return limbkin::servo_angle(geom_, theta_l);
}

double Kinematics::inverse_servo(double theta_s) const {
  if (!report_.passes()) {
    std::string why = report_.failures.empty() ? "workspace check failed" : report_.failures.front();
    throw ConfigError("servo mapping not invertible: " + why);
  }
  constexpr double kEdge = 1e-12;
  if (!std::isfinite(theta_s) || theta_s < report_.theta_s_min - kEdge ||
      theta_s > report_.theta_s_max + kEdge) {
    throw RangeError("theta_s = " + fmt_deg(theta_s) + " outside achievable range [" +
                     fmt_deg(report_.theta_s_min) + ", " + fmt_deg(report_.theta_s_max) + "]");
  }

  // f(lo) <= 0 <= f(hi) after orienting by the monotone direction.
  const double dir = static_cast<double>(report_.direction);
  auto f = [&](double theta_l) { return dir * (servo_angle(theta_l).theta_s - theta_s); };
  double lo = geom_.theta_dn;
  double hi = geom_.theta_up;
  double f_lo = f(lo);
  double f_hi = f(hi);
  if (f_lo >= 0.0) return lo;
  if (f_hi <= 0.0) return hi;

  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if (f_mid < 0.0) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  return -f_lo < f_hi ? lo : hi;
}

Point2 Kinematics::fk_from_servo(double theta_s) const {
  return fk_wheel_position(geom_, inverse_servo(theta_s));
}

LimbState Kinematics::limb_state(double theta_l, double theta_z) const {
  if (!(theta_z >= kSteerMin && theta_z <= kSteerMax)) {
    throw RangeError("theta_z = " + fmt_deg(theta_z) + " outside [0, 90] deg");
  }
  LimbState s;
  s.theta_l = theta_l;
  s.wheel_pos = fk_wheel_position(geom_, theta_l);
  s.theta_s = servo_angle(theta_l).theta_s;
  s.theta_z = theta_z;
  return s;
}

}  // namespace limbkin
