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

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "limbkin/errors.hpp"
#include "limbkin/kinematics.hpp"
#include "limbkin/terrain.hpp"
#include "limbkin/units.hpp"
#include "oracles.hpp"

using namespace limbkin;

namespace {

constexpr double kWheelbase = 0.726;

TerrainProfile flat(double x0, double x1) { return TerrainProfile({{x0, 0.0}, {x1, 0.0}}, {}); }

// Flat contact angle from the closed form p_z = r - h + l1 sin(theta_l) = 0.
double flat_contact_angle(const LinkageGeometry& g, double drop) {
  return std::asin((g.r - g.h - drop) / g.l1);
}

// Symmetric triangular bump centred at x = 0.
TerrainProfile triangle_bump() {
  return TerrainProfile({{-4.0, 0.0}, {-0.5, 0.0}, {0.0, 0.2}, {0.5, 0.0}, {4.0, 0.0}}, {});
}

}  // namespace

TEST_CASE("build_terrain") {
  SUBCASE("single flat segment") {
    const TerrainSegment seg{10.0, 0.0, std::nullopt};
    const TerrainProfile t = build_terrain(std::span(&seg, 1));
    REQUIRE(t.vertices().size() == 2);
    CHECK(t.vertices()[0].x == 0.0);
    CHECK(t.vertices()[0].z == 0.0);
    CHECK(t.vertices()[1].x == 10.0);
    CHECK(t.vertices()[1].z == 0.0);
  }
  SUBCASE("45 deg ramp rises L sin 45") {
    const std::vector<TerrainSegment> segs{{1.0, 0.0, {}}, {2.0, deg_to_rad(45.0), {}}};
    const TerrainProfile t = build_terrain(segs);
    CHECK(t.vertices().back().z == doctest::Approx(2.0 * std::sin(kPi / 4.0)).epsilon(1e-14));
    CHECK(t.vertices().back().x == doctest::Approx(1.0 + 2.0 * std::cos(kPi / 4.0)).epsilon(1e-14));
  }
  SUBCASE("fig2 preset has the 30 deg faces and 50 deg trap walls") {
    const TerrainProfile t = fig2_terrain();
    std::vector<double> slopes;
    const auto& v = t.vertices();
    for (std::size_t i = 1; i < v.size(); ++i) {
      slopes.push_back(rad_to_deg(std::atan2(v[i].z - v[i - 1].z, v[i].x - v[i - 1].x)));
    }
    auto has = [&](double s) {
      return std::any_of(slopes.begin(), slopes.end(),
                         [&](double x) { return std::abs(x - s) < 1e-9; });
    };
    CHECK(has(30.0));
    CHECK(has(-30.0));
    CHECK(has(50.0));
    CHECK(has(-50.0));
    REQUIRE(t.soft_spans().size() == 1);
    CHECK(t.soft_spans()[0].depth == doctest::Approx(0.100));
    // The soft-span edge blends are steeper than the trap walls.
    CHECK(rad_to_deg(t.max_slope()) > 50.0);
  }
  SUBCASE("errors") {
    const std::vector<TerrainSegment> sloped_first{{1.0, 0.1, {}}};
    CHECK_THROWS_AS(build_terrain(sloped_first), ConfigError);
    const std::vector<TerrainSegment> negative_sink{{1.0, 0.0, {}}, {1.0, 0.0, -0.1}};
    CHECK_THROWS_AS(build_terrain(negative_sink), ConfigError);
    const std::vector<TerrainSegment> vertical{{1.0, 0.0, {}}, {1.0, kPi / 2.0, {}}};
    CHECK_THROWS_AS(build_terrain(vertical), ConfigError);
    CHECK_THROWS_AS(TerrainProfile({{0.0, 0.0}, {0.0, 1.0}}, {}), ConfigError);
    CHECK_THROWS_AS(TerrainProfile({{0.0, 0.0}, {2.0, 0.0}}, {{0.5, 1.0, 0.1}, {0.9, 1.5, 0.1}}),
                    ConfigError);
    CHECK_THROWS_AS(TerrainProfile({{0.0, 0.0}, {2.0, 0.0}}, {{1.5, 2.5, 0.1}}), ConfigError);
  }
}

TEST_CASE("effective_height") {
  const TerrainProfile t = flat(0.0, 5.0);
  for (double x : {0.0, 1.3, 5.0}) CHECK(effective_height(t, x) == 0.0);
  CHECK_THROWS_AS(effective_height(t, 5.1), RangeError);

  const TerrainProfile v({{0.0, 0.0}, {1.0, 0.3}, {2.0, -0.2}}, {});
  CHECK(v.effective_height(1.0) == 0.3);
  CHECK(v.effective_height(2.0) == -0.2);

  const TerrainProfile soft({{0.0, 0.0}, {3.0, 0.0}}, {{1.0, 2.0, 0.100}});
  CHECK(soft.effective_height(1.5) == doctest::Approx(-0.100).epsilon(1e-12));
  CHECK(soft.effective_height(1.0) == 0.0);
  CHECK(soft.effective_height(1.0 + kSoftBlend / 2.0) == doctest::Approx(-0.05).epsilon(1e-12));
  CHECK(std::abs(soft.sinkage(1.5) - 0.100) <= 1e-9);
}

TEST_CASE("solve_rover_pose") {
  SUBCASE("flat terrain") {
    const RoverPose p = solve_rover_pose(flat(0.0, 5.0), 2.0, kWheelbase);
    CHECK(p.pitch == 0.0);
    CHECK(p.z == 0.0);
  }
  SUBCASE("uniform 30 deg ramp") {
    const std::vector<TerrainSegment> segs{{0.5, 0.0, {}}, {5.0, deg_to_rad(30.0), {}}};
    const TerrainProfile t = build_terrain(segs);
    const RoverPose p = solve_rover_pose(t, 3.0, kWheelbase);
    CHECK(rad_to_deg(p.pitch) == doctest::Approx(30.0).epsilon(1e-10));
  }
  SUBCASE("ramp transition matches a bisection oracle") {
    const std::vector<TerrainSegment> segs{{2.0, 0.0, {}}, {4.0, deg_to_rad(30.0), {}}};
    const TerrainProfile t = build_terrain(segs);
    for (double x : {2.1, 2.3, 2.5, 2.7}) {
      const RoverPose p = solve_rover_pose(t, x, kWheelbase);
      const RoverPose o = oracle::pose_by_bisection(t, x, kWheelbase);
      CHECK(p.pitch > 0.0);
      CHECK(p.pitch < deg_to_rad(30.0));
      CHECK(std::abs(p.pitch - o.pitch) < 1e-8);
      CHECK(std::abs(p.z - o.z) < 1e-12);
    }
  }
  SUBCASE("axles out of range") {
    CHECK_THROWS_AS(solve_rover_pose(flat(0.0, 5.0), 0.5, kWheelbase), RangeError);
  }
}

TEST_CASE("contact_solve closed forms") {
  const LinkageGeometry g = reference_geometry();
  SUBCASE("flat ground") {
    const ContactResult c = contact_solve(g, {2.0, 0.0, 0.0}, flat(0.0, 5.0));
    CHECK(c.saturation == Saturation::None);
    CHECK(std::abs(c.theta_l - flat_contact_angle(g, 0.0)) < 1e-9);
    CHECK(rad_to_deg(c.theta_l) == doctest::Approx(-7.7664341685122436).epsilon(1e-9));
    CHECK(c.contact_angle == doctest::Approx(0.0));
    CHECK(c.sinkage == 0.0);
    CHECK(std::abs(c.clearance) < 1e-6);
  }
  SUBCASE("ground lowered by a soft span") {
    const TerrainProfile t({{-2.0, 0.0}, {3.0, 0.0}}, {{0.1, 0.8, 0.100}});
    const ContactResult c = contact_solve(g, {0.0, 0.0, 0.0}, t);
    CHECK(std::abs(c.theta_l - flat_contact_angle(g, 0.100)) < 1e-9);
    CHECK(rad_to_deg(c.theta_l) == doctest::Approx(-23.916534421854443).epsilon(1e-9));
    CHECK(std::abs(c.sinkage - 0.100) <= 1e-9);
  }
  SUBCASE("wheel hangs over a pit") {
    const TerrainProfile t({{-2.0, 0.0}, {0.1, 0.0}, {0.11, -1.0}, {3.0, -1.0}}, {});
    const ContactResult c = contact_solve(g, {0.0, 0.0, 0.0}, t);
    CHECK(c.saturation == Saturation::Hanging);
    CHECK(c.theta_l == g.theta_dn);
  }
  SUBCASE("wheel jammed by a wall") {
    const TerrainProfile t({{-2.0, 0.0}, {0.1, 0.0}, {0.11, 1.0}, {3.0, 1.0}}, {});
    const ContactResult c = contact_solve(g, {0.0, 0.0, 0.0}, t);
    CHECK(c.saturation == Saturation::Jammed);
  }
}

TEST_CASE("contour following is pose-relative on a uniform slope") {
  const LinkageGeometry g = reference_geometry();
  for (double deg : {-30.0, -15.0, 20.0, 30.0}) {
    const std::vector<TerrainSegment> segs{{0.5, 0.0, {}}, {6.0, deg_to_rad(deg), {}}};
    const TerrainProfile t = build_terrain(segs);
    const double x = 0.5 + 3.0 * std::cos(deg_to_rad(deg));
    const RoverPose p = solve_rover_pose(t, x, kWheelbase);
    const ContactResult c = contact_solve(g, p, t);
    CHECK(std::abs(c.theta_l - flat_contact_angle(g, 0.0)) < 1e-6);
  }
}

TEST_CASE("traverse") {
  const Kinematics kin(reference_geometry());
  const auto& g = kin.geometry();

  SUBCASE("flat terrain gives a constant trace") {
    const TraverseTrace tr = traverse(kin, flat(0.0, 4.0), {});
    REQUIRE(tr.records.size() > 10);
    for (const auto& r : tr.records) {
      CHECK(std::abs(r.theta_l - flat_contact_angle(g, 0.0)) < 1e-9);
      CHECK(r.saturation == Saturation::None);
    }
  }

  SUBCASE("fig2 preset") {
    const TerrainProfile t = fig2_terrain();
    const TraverseOptions opt;
    const TraverseTrace tr = traverse(kin, t, opt);
    REQUIRE(tr.records.size() > 100);
    double lo = INFINITY;
    double hi = -INFINITY;
    const double reach = std::abs(opt.mount_offset) + g.l1 + g.h + g.r;
    const double rise = opt.step * std::tan(t.max_slope());
    const double dpitch = 2.0 * rise / opt.wheelbase;
    const double bound = (rise + reach * dpitch) / (g.l1 * std::cos(std::max(-g.theta_dn, g.theta_up))) + dpitch;
    for (std::size_t i = 0; i < tr.records.size(); ++i) {
      const auto& r = tr.records[i];
      lo = std::min(lo, r.theta_l);
      hi = std::max(hi, r.theta_l);
      CHECK(r.clearance >= -1e-6);
      if (r.saturation == Saturation::None) CHECK(std::abs(r.clearance) <= 1e-6);
      CHECK(g.in_workspace(r.theta_l));
      if (i > 0) {
        CHECK(r.distance > tr.records[i - 1].distance);
        CHECK(std::abs(r.theta_l - tr.records[i - 1].theta_l) <= bound);
      }
    }
    CHECK(lo >= deg_to_rad(-40.0));
    CHECK(hi <= deg_to_rad(60.0));
    CHECK(hi - lo >= deg_to_rad(40.0));
  }

  SUBCASE("sinkage inside a fully soft flat span") {
    const TerrainProfile t({{0.0, 0.0}, {6.0, 0.0}}, {{0.0, 6.0, 0.080}});
    const TraverseTrace tr = traverse(kin, t, {});
    for (const auto& r : tr.records) CHECK(std::abs(r.sinkage - 0.080) <= 1e-9);
  }

  SUBCASE("reversing over a symmetric bump mirrors the trace") {
    const TerrainProfile t = triangle_bump();
    TraverseOptions fwd;
    TraverseOptions rev;
    rev.direction = Direction::Reverse;
    const TraverseTrace a = traverse(kin, t, fwd);
    const TraverseTrace b = traverse(kin, t, rev);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      CHECK(std::abs(a.records[i].theta_l - b.records[i].theta_l) < 1e-7);
      CHECK(std::abs(a.records[i].pose.x + b.records[i].pose.x) < 1e-9);
      CHECK(std::abs(a.records[i].pose.pitch - b.records[i].pose.pitch) < 1e-7);
    }
  }

  SUBCASE("setup errors") {
    TraverseOptions bad;
    bad.step = 0.0;
    CHECK_THROWS_AS(traverse(kin, flat(0.0, 4.0), bad), RangeError);
    CHECK_THROWS_AS(traverse(kin, flat(0.0, 1.0), {}), RangeError);
  }
}
