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

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "limbkin/errors.hpp"
#include "limbkin/sequencer.hpp"
#include "limbkin/units.hpp"

using namespace limbkin;

namespace {

const Kinematics& reference_kinematics() {
  static const Kinematics kin(reference_geometry());
  return kin;
}

DeploymentSequencer make_sequencer(SequencerPoses poses) {
  const auto servos = reference_servos();
  return DeploymentSequencer(reference_kinematics(), servos[0], servos[1], poses);
}

DeploymentSequencer reference_sequencer() {
  const auto& g = reference_kinematics().geometry();
  return make_sequencer({g.theta_up, 0.0, std::asin((g.r - g.h) / g.l1)});
}

}  // namespace

TEST_CASE("command parsing") {
  CHECK(Command::parse("deploy").op == Op::Deploy);
  CHECK(Command::parse("  lift ").op == Op::Lift);
  const Command s = Command::parse("steer 45");
  CHECK(s.op == Op::Steer);
  CHECK(s.steer_angle == doctest::Approx(kPi / 4.0));
  CHECK_THROWS_AS(Command::parse("jump"), ConfigError);
  CHECK_THROWS_AS(Command::parse("steer"), ConfigError);
  CHECK_THROWS_AS(Command::parse("steer abc"), ConfigError);
}

TEST_CASE("nominal deploy, place, lift, stow, lock cycle") {
  const DeploymentSequencer seq = reference_sequencer();
  SequencerState s = seq.initial_state();
  CHECK(s.mode == Mode::Stowed);

  auto step = [&](Op op) {
    auto [next, traj] = seq.command(s, {op});
    REQUIRE(traj.points.size() >= 1);
    CHECK(traj.points.back().theta_s == next.theta_s);
    CHECK(traj.points.back().theta_z == next.theta_z);
    CHECK(traj.points.back().locked == next.locked);
    CHECK(traj.points.front().theta_s == s.theta_s);
    s = next;
  };

  step(Op::Deploy);
  CHECK(s.mode == Mode::Deploying);
  s = seq.complete(s);
  CHECK(s.mode == Mode::Deployed);
  step(Op::Place);
  CHECK(s.mode == Mode::Placed);
  CHECK(reference_kinematics().inverse_servo(s.theta_s) ==
        doctest::Approx(seq.poses().place_theta_l).epsilon(1e-9));
  step(Op::Lift);
  CHECK(s.mode == Mode::Deployed);
  step(Op::Stow);
  CHECK(s.mode == Mode::Stowed);
  step(Op::Lock);
  CHECK(s.mode == Mode::Locked);
  CHECK(s.locked);
  step(Op::Unlock);
  CHECK(s.mode == Mode::Stowed);
  CHECK_FALSE(s.locked);
}

TEST_CASE("illegal transitions are named") {
  const DeploymentSequencer seq = reference_sequencer();
  const SequencerState stowed = seq.initial_state();
  try {
    seq.command(stowed, {Op::Place});
    FAIL("expected IllegalTransition");
  } catch (const IllegalTransition& e) {
    const std::string what = e.what();
    CHECK(what.find("place") != std::string::npos);
    CHECK(what.find("Stowed") != std::string::npos);
  }
  const SequencerState locked = seq.command(stowed, {Op::Lock}).first;
  CHECK_THROWS_AS(seq.command(locked, {Op::Steer, 0.1}), IllegalTransition);
  CHECK_THROWS_AS(seq.command(locked, {Op::Deploy}), IllegalTransition);
  CHECK_THROWS_AS(seq.complete(stowed), IllegalTransition);
  const SequencerState deploying = seq.command(stowed, {Op::Deploy}).first;
  CHECK_THROWS_AS(seq.command(deploying, {Op::Place}), IllegalTransition);
}

TEST_CASE("steer limits") {
  const DeploymentSequencer seq = reference_sequencer();
  const SequencerState s = seq.initial_state();
  CHECK_THROWS_AS(seq.command(s, {Op::Steer, deg_to_rad(91.0)}), RangeError);
  CHECK_THROWS_AS(seq.command(s, {Op::Steer, deg_to_rad(-1.0)}), RangeError);
  const auto [next, traj] = seq.command(s, {Op::Steer, deg_to_rad(90.0)});
  CHECK(next.mode == Mode::Stowed);
  CHECK(next.theta_z == deg_to_rad(90.0));
  CHECK(traj.duration() == doctest::Approx(0.18).epsilon(1e-12));
}

TEST_CASE("rated speed: 60 deg of servo travel takes 0.12 s") {
  const Kinematics& kin = reference_kinematics();
  const auto& g = kin.geometry();
  const double stow_ts = kin.servo_angle(g.theta_up).theta_s;
  const double deploy_tl = kin.inverse_servo(stow_ts - deg_to_rad(60.0));
  const DeploymentSequencer seq = make_sequencer({g.theta_up, deploy_tl, deploy_tl});
  const auto [next, traj] = seq.command(seq.initial_state(), {Op::Deploy});
  CHECK(std::abs(next.theta_s - stow_ts) == doctest::Approx(deg_to_rad(60.0)).epsilon(1e-9));
  CHECK(traj.duration() == doctest::Approx(0.12).epsilon(1e-9));
}

TEST_CASE("lock is a step") {
  const DeploymentSequencer seq = reference_sequencer();
  const auto [next, traj] = seq.command(seq.initial_state(), {Op::Lock});
  CHECK(traj.duration() == 0.0);
  CHECK(traj.points.back().locked);
}

TEST_CASE("torque budget") {
  const Kinematics& kin = reference_kinematics();
  const auto& g = kin.geometry();
  const auto servos = reference_servos();
  ServoTrajectory lift;
  lift.points.push_back({0.0, kin.servo_angle(g.theta_dn).theta_s, 0.0, false});
  lift.points.push_back({0.3, kin.servo_angle(g.theta_up).theta_s, 0.0, false});

  SUBCASE("lifter passes with margin > 10") {
    const BudgetReport r = validate_torque_budget(lift, kin, 9.8, std::span(&servos[0], 1));
    CHECK(r.pass());
    CHECK(r.demand == doctest::Approx(2.8).epsilon(0.05));
    CHECK(r.servos[0].margin > 10.0);
  }
  SUBCASE("locker fails the same trajectory") {
    const BudgetReport r = validate_torque_budget(lift, kin, 9.8, std::span(&servos[2], 1));
    CHECK_FALSE(r.pass());
  }
  SUBCASE("empty trajectory is a vacuous pass") {
    const BudgetReport r = validate_torque_budget({}, kin, 9.8, std::span(&servos[0], 1));
    CHECK(r.pass());
    CHECK(r.demand == 0.0);
  }
  SUBCASE("monotone in load") {
    bool failed = false;
    for (double w = 1.0; w <= 400.0; w *= 1.5) {
      const bool pass = validate_torque_budget(lift, kin, w, std::span(&servos[0], 1)).pass();
      if (failed) CHECK_FALSE(pass);
      failed = failed || !pass;
    }
    CHECK(failed);
  }
}

TEST_CASE("mode graph is closed under random command sequences") {
  const DeploymentSequencer seq = reference_sequencer();
  const std::vector<Op> ops{Op::Deploy, Op::Place, Op::Lift, Op::Stow,
                            Op::Lock,   Op::Unlock, Op::Steer};
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> pick(0, ops.size());
  std::uniform_real_distribution<double> steer(0.0, kPi / 2.0);
  SequencerState s = seq.initial_state();
  for (int i = 0; i < 5000; ++i) {
    const std::size_t k = pick(rng);
    if (k == ops.size()) {
      if (s.mode == Mode::Deploying) {
        s = seq.complete(s);
        CHECK(s.mode == Mode::Deployed);
      } else {
        CHECK_THROWS_AS(seq.complete(s), IllegalTransition);
      }
      continue;
    }
    const Command cmd{ops[k], steer(rng)};
    if (!seq.accepts(s.mode, cmd.op)) {
      CHECK_THROWS_AS(seq.command(s, cmd), IllegalTransition);
      continue;
    }
    const auto [next, traj] = seq.command(s, cmd);
    CHECK(traj.points.back().theta_s == next.theta_s);
    CHECK(traj.points.back().theta_z == next.theta_z);
    CHECK(next.locked == (next.mode == Mode::Locked));
    switch (cmd.op) {
      case Op::Deploy: CHECK(next.mode == Mode::Deploying); break;
      case Op::Place: CHECK(next.mode == Mode::Placed); break;
      case Op::Lift: CHECK(next.mode == Mode::Deployed); break;
      case Op::Stow: CHECK(next.mode == Mode::Stowed); break;
      case Op::Lock: CHECK(next.mode == Mode::Locked); break;
      case Op::Unlock: CHECK(next.mode == Mode::Stowed); break;
      case Op::Steer: CHECK(next.mode == s.mode); break;
    }
    s = next;
  }
}
