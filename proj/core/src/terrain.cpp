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

#include "limbkin/terrain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "limbkin/errors.hpp"
#include "limbkin/statics.hpp"
#include "limbkin/units.hpp"

namespace limbkin {

namespace {

double interpolate(const std::vector<Point2>& poly, double x) {
  auto it = std::upper_bound(poly.begin(), poly.end(), x,
                             [](double v, const Point2& p) { return v < p.x; });
  if (it == poly.begin()) return poly.front().z;
  if (it == poly.end()) return poly.back().z;
  const Point2& a = *(it - 1);
  const Point2& b = *it;
  const double t = (x - a.x) / (b.x - a.x);
  return a.z + t * (b.z - a.z);
}

double blend_width(const SoftSpan& s) { return std::min(kSoftBlend, 0.5 * (s.x_end - s.x_start)); }

struct SegmentHit {
  double distance = 0.0;
  Point2 closest;
  Point2 normal;  // out of the ground
};

SegmentHit closest_on_segment(const Point2& a, const Point2& b, const Point2& c) {
  const double dx = b.x - a.x;
  const double dz = b.z - a.z;
  const double len2 = dx * dx + dz * dz;
  double t = ((c.x - a.x) * dx + (c.z - a.z) * dz) / len2;
  t = std::clamp(t, 0.0, 1.0);
  SegmentHit hit;
  hit.closest = {a.x + t * dx, a.z + t * dz};
  hit.distance = std::hypot(c.x - hit.closest.x, c.z - hit.closest.z);
  const double len = std::sqrt(len2);
  hit.normal = {-dz / len, dx / len};
  return hit;
}

}  // namespace

TerrainProfile::TerrainProfile(std::vector<Point2> vertices, std::vector<SoftSpan> soft_spans)
    : vertices_(std::move(vertices)), soft_(std::move(soft_spans)) {
  if (vertices_.size() < 2) throw ConfigError("terrain needs at least two vertices");
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (!std::isfinite(vertices_[i].x) || !std::isfinite(vertices_[i].z)) {
      throw ConfigError("terrain vertices must be finite");
    }
    if (i > 0 && !(vertices_[i].x > vertices_[i - 1].x)) {
      throw ConfigError("terrain x must be strictly increasing (vertex " + std::to_string(i) + ")");
    }
  }
  std::sort(soft_.begin(), soft_.end(),
            [](const SoftSpan& a, const SoftSpan& b) { return a.x_start < b.x_start; });
  for (std::size_t i = 0; i < soft_.size(); ++i) {
    const SoftSpan& s = soft_[i];
    if (!(s.depth >= 0.0) || !std::isfinite(s.depth)) {
      throw ConfigError("soft span sinkage depth must be non-negative");
    }
    if (!(s.x_end > s.x_start)) throw ConfigError("soft span must have x_end > x_start");
    if (s.x_start < x_min() || s.x_end > x_max()) {
      throw ConfigError("soft span must lie within the terrain x range");
    }
    if (i > 0 && s.x_start < soft_[i - 1].x_end) throw ConfigError("soft spans must not overlap");
  }

  std::vector<double> xs;
  for (const auto& v : vertices_) xs.push_back(v.x);
  for (const auto& s : soft_) {
    const double b = blend_width(s);
    xs.insert(xs.end(), {s.x_start, s.x_start + b, s.x_end - b, s.x_end});
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  effective_.reserve(xs.size());
  for (double x : xs) effective_.push_back({x, interpolate(vertices_, x) - offset(x)});
}

double TerrainProfile::offset(double x) const {
  for (const auto& s : soft_) {
    if (x < s.x_start || x > s.x_end) continue;
    const double b = blend_width(s);
    return s.depth * std::min({1.0, (x - s.x_start) / b, (s.x_end - x) / b});
  }
  return 0.0;
}

void TerrainProfile::check_range(double x) const {
  if (!(x >= x_min() && x <= x_max())) {
    throw RangeError("x = " + std::to_string(x) + " m outside terrain range [" +
                     std::to_string(x_min()) + ", " + std::to_string(x_max()) + "]");
  }
}

double TerrainProfile::nominal_height(double x) const {
  check_range(x);
  return interpolate(vertices_, x);
}

double TerrainProfile::effective_height(double x) const {
  check_range(x);
  return interpolate(effective_, x);
}

double TerrainProfile::sinkage(double x) const {
  return nominal_height(x) - effective_height(x);
}

double TerrainProfile::max_slope() const {
  double m = 0.0;
  for (std::size_t i = 1; i < effective_.size(); ++i) {
    const double s = std::atan2(std::abs(effective_[i].z - effective_[i - 1].z),
                                effective_[i].x - effective_[i - 1].x);
    m = std::max(m, s);
  }
  return m;
}

TerrainProfile TerrainProfile::mirrored() const {
  std::vector<Point2> v;
  v.reserve(vertices_.size());
  for (auto it = vertices_.rbegin(); it != vertices_.rend(); ++it) v.push_back({-it->x, it->z});
  std::vector<SoftSpan> s;
  for (const auto& span : soft_) s.push_back({-span.x_end, -span.x_start, span.depth});
  return TerrainProfile(std::move(v), std::move(s));
}

TerrainProfile build_terrain(std::span<const TerrainSegment> segments) {
  if (segments.empty()) throw ConfigError("terrain needs at least one segment");
  if (segments.front().slope != 0.0) throw ConfigError("first terrain segment must be flat");

  std::vector<Point2> vertices{{0.0, 0.0}};
  std::vector<SoftSpan> soft;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const TerrainSegment& seg = segments[i];
    const std::string where = "terrain segment " + std::to_string(i) + ": ";
    if (!(seg.length > 0.0) || !std::isfinite(seg.length)) {
      throw ConfigError(where + "length must be positive");
    }
    if (!std::isfinite(seg.slope) || std::abs(seg.slope) >= kPi / 2.0) {
      throw ConfigError(where + "slope must lie strictly between -90 and 90 deg (x must increase)");
    }
    const Point2 a = vertices.back();
    const Point2 b{a.x + seg.length * std::cos(seg.slope), a.z + seg.length * std::sin(seg.slope)};
    if (!(b.x > a.x)) throw ConfigError(where + "x must be strictly increasing");
    vertices.push_back(b);
    if (seg.sinkage) {
      if (!(*seg.sinkage >= 0.0)) throw ConfigError(where + "sinkage depth must be non-negative");
      soft.push_back({a.x, b.x, *seg.sinkage});
    }
  }
  return TerrainProfile(std::move(vertices), std::move(soft));
}

std::vector<TerrainSegment> fig2_segments() {
  const double wall_depth = 0.06;
  const double wall = wall_depth / std::sin(deg_to_rad(50.0));
  return {
      {2.0, 0.0, std::nullopt},
      {2.4, deg_to_rad(30.0), std::nullopt},
      {2.0, 0.0, std::nullopt},
      {2.4, deg_to_rad(-30.0), std::nullopt},
      {2.0, 0.0, std::nullopt},
      {wall, deg_to_rad(-50.0), std::nullopt},
      {1.2, 0.0, 0.100},
      {wall, deg_to_rad(50.0), std::nullopt},
      {2.0, 0.0, std::nullopt},
  };
}

TerrainProfile fig2_terrain() {
  const auto segs = fig2_segments();
  return build_terrain(segs);
}

double effective_height(const TerrainProfile& profile, double x) {
  return profile.effective_height(x);
}

RoverPose solve_rover_pose(const TerrainProfile& profile, double x_front, double wheelbase) {
  if (!(wheelbase > 0.0)) throw RangeError("wheelbase must be positive");
  if (!(x_front - wheelbase >= profile.x_min()) || !(x_front <= profile.x_max())) {
    throw RangeError("rover axles outside terrain range at x_front = " + std::to_string(x_front));
  }
  const double z_front = profile.effective_height(x_front);
  double x_rear = x_front - wheelbase;
  double pitch = 0.0;
  for (int iter = 0; iter < 50; ++iter) {
    const double z_rear = profile.effective_height(x_rear);
    pitch = std::atan2(z_front - z_rear, x_front - x_rear);
    const double next = x_front - wheelbase * std::cos(pitch);
    if (std::abs(next - x_rear) < 1e-9) return {x_front, z_front, pitch};
    x_rear = next;
  }
  throw ConvergenceError("rover pose did not converge at x_front = " + std::to_string(x_front));
}

std::string_view to_string(Saturation s) {
  switch (s) {
    case Saturation::None: return "none";
    case Saturation::Hanging: return "hanging";
    case Saturation::Jammed: return "jammed";
  }
  return "none";
}

Point2 wheel_centre(const LinkageGeometry& geom, const RoverPose& pose, double mount_offset,
                    double theta_l) {
  const double bx = mount_offset + geom.l1 * std::cos(theta_l);
  const double bz = geom.h + geom.l1 * std::sin(theta_l);
  const double c = std::cos(pose.pitch);
  const double s = std::sin(pose.pitch);
  return {pose.x + bx * c - bz * s, pose.z + bx * s + bz * c};
}

Clearance wheel_clearance(const LinkageGeometry& geom, const RoverPose& pose,
                          const TerrainProfile& profile, double mount_offset, double theta_l) {
  const Point2 c = wheel_centre(geom, pose, mount_offset, theta_l);
  const double gap = c.z - profile.effective_height(c.x);
  // The vertical gap bounds the distance, so segments beyond it can be skipped.
  const double reach = std::max(geom.r, std::abs(gap)) + 1e-12;
  const auto& poly = profile.effective_polyline();
  auto first = std::lower_bound(poly.begin(), poly.end(), c.x - reach,
                                [](const Point2& p, double v) { return p.x < v; });
  std::size_t i = first == poly.begin() ? 0 : static_cast<std::size_t>(first - poly.begin()) - 1;

  SegmentHit best;
  best.distance = std::numeric_limits<double>::infinity();
  for (; i + 1 < poly.size() && poly[i].x <= c.x + reach; ++i) {
    const SegmentHit hit = closest_on_segment(poly[i], poly[i + 1], c);
    if (hit.distance < best.distance) best = hit;
  }

  Clearance out;
  out.closest = best.closest;
  if (gap >= 0.0) {
    out.value = best.distance - geom.r;
    out.normal = best.distance > 1e-12
                     ? Point2{(c.x - best.closest.x) / best.distance, (c.z - best.closest.z) / best.distance}
                     : best.normal;
  } else {
    out.value = -best.distance - geom.r;
    out.normal = best.distance > 1e-12
                     ? Point2{(best.closest.x - c.x) / best.distance, (best.closest.z - c.z) / best.distance}
                     : best.normal;
  }
  return out;
}

ContactResult contact_solve(const LinkageGeometry& geom, const RoverPose& pose,
                            const TerrainProfile& profile, double mount_offset) {
  auto clearance = [&](double theta_l) {
    return wheel_clearance(geom, pose, profile, mount_offset, theta_l);
  };
  auto finish = [&](double theta_l, const Clearance& c, Saturation sat) {
    ContactResult r;
    r.theta_l = theta_l;
    r.contact = c.closest;
    r.contact_angle = std::atan2(-c.normal.x, c.normal.z);
    r.sinkage = profile.sinkage(c.closest.x);
    r.clearance = c.value;
    r.saturation = sat;
    return r;
  };

  const Clearance top = clearance(geom.theta_up);
  if (top.value <= 0.0) return finish(geom.theta_up, top, Saturation::Jammed);

  // Lower the limb in coarse steps until the wheel first touches, then
  // bisect the last step down to double precision.
  constexpr double kScan = 0.0043633231299858239;  // 0.25 deg
  const double span = geom.theta_up - geom.theta_dn;
  const auto steps = static_cast<std::size_t>(std::ceil(span / kScan));
  double hi = geom.theta_up;
  Clearance c_hi = top;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double lo = k == steps ? geom.theta_dn : geom.theta_up - span * static_cast<double>(k) / steps;
    const Clearance c_lo = clearance(lo);
    if (c_lo.value <= 0.0) {
      double a = lo;
      double b = hi;
      for (int iter = 0; iter < 200 && b - a > 1e-13; ++iter) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const Clearance cm = clearance(mid);
        if (cm.value <= 0.0) {
          a = mid;
        } else {
          b = mid;
          c_hi = cm;
        }
      }
      return finish(b, c_hi, Saturation::None);
    }
    hi = lo;
    c_hi = c_lo;
  }
  return finish(geom.theta_dn, c_hi, Saturation::Hanging);
}

TraverseTrace traverse(const Kinematics& kin, const TerrainProfile& profile,
                       const TraverseOptions& options) {
  if (!(options.step > 0.0)) throw RangeError("traverse step must be positive");
  if (!(options.wheelbase > 0.0)) throw RangeError("wheelbase must be positive");
  const LinkageGeometry& geom = kin.geometry();
  const bool reverse = options.direction == Direction::Reverse;
  const TerrainProfile mirrored = reverse ? profile.mirrored() : profile;
  const TerrainProfile& ground = reverse ? mirrored : profile;

  const double start = ground.x_min() + options.wheelbase;
  const double stop =
      ground.x_max() - (std::abs(options.mount_offset) + geom.l1 + geom.h + geom.r) - 1e-6;
  if (!(stop >= start)) throw RangeError("terrain too short for the rover and limb");

  const auto n = static_cast<std::size_t>(std::floor((stop - start) / options.step + 1e-9)) + 1;
  const double sign = reverse ? -1.0 : 1.0;
  TraverseTrace trace;
  trace.records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = start + static_cast<double>(i) * options.step;
    const RoverPose pose = solve_rover_pose(ground, x, options.wheelbase);
    const ContactResult contact = contact_solve(geom, pose, ground, options.mount_offset);

    TraverseRecord rec;
    rec.distance = x - start;
    rec.pose = {sign * pose.x, pose.z, pose.pitch};
    rec.theta_l = contact.theta_l;
    rec.contact = {sign * contact.contact.x, contact.contact.z};
    rec.contact_angle = contact.contact_angle;
    rec.sinkage = contact.sinkage;
    rec.clearance = contact.clearance;
    rec.saturation = contact.saturation;
    rec.theta_s = std::numeric_limits<double>::quiet_NaN();
    rec.T_s = std::numeric_limits<double>::quiet_NaN();
    try {
      rec.theta_s = kin.servo_angle(contact.theta_l).theta_s;
      rec.T_s = servo_torque(geom, contact.theta_l, options.w).T_s;
    } catch (const InfeasibleLinkage&) {
    } catch (const SingularityError&) {
    }
    trace.records.push_back(rec);
  }
  return trace;
}

}  // namespace limbkin
