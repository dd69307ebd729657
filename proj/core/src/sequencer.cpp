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

#include "limbkin/sequencer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <string>

#include "limbkin/errors.hpp"
#include "limbkin/statics.hpp"
#include "limbkin/units.hpp"

namespace limbkin {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Stowed: return "Stowed";
    case Mode::Deploying: return "Deploying";
    case Mode::Deployed: return "Deployed";
    case Mode::Placed: return "Placed";
    case Mode::Locked: return "Locked";
  }
  return "Stowed";
}

std::string_view to_string(Op op) {
  switch (op) {
    case Op::Deploy: return "deploy";
    case Op::Place: return "place";
    case Op::Lift: return "lift";
    case Op::Stow: return "stow";
    case Op::Lock: return "lock";
    case Op::Unlock: return "unlock";
    case Op::Steer: return "steer";
  }
  return "deploy";
}

Command Command::parse(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::string word;
  in >> word;
  std::transform(word.begin(), word.end(), word.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  Command cmd;
  if (word == "deploy") cmd.op = Op::Deploy;
  else if (word == "place") cmd.op = Op::Place;
  else if (word == "lift") cmd.op = Op::Lift;
  else if (word == "stow") cmd.op = Op::Stow;
  else if (word == "lock") cmd.op = Op::Lock;
  else if (word == "unlock") cmd.op = Op::Unlock;
  else if (word == "steer") {
    cmd.op = Op::Steer;
    double deg = 0.0;
    if (!(in >> deg)) throw ConfigError("steer needs an angle in degrees: '" + std::string(line) + "'");
    cmd.steer_angle = deg_to_rad(deg);
  } else {
    throw ConfigError("unknown sequencer command '" + std::string(line) + "'");
  }
  std::string extra;
  if (in >> extra) throw ConfigError("trailing text in sequencer command '" + std::string(line) + "'");
  return cmd;
}

DeploymentSequencer::DeploymentSequencer(Kinematics kin, ServoSpec lift, ServoSpec steer,
                                         SequencerPoses poses)
    : kin_(std::move(kin)), lift_(std::move(lift)), steer_(std::move(steer)), poses_(poses) {
  lift_.validate();
  steer_.validate();
  const auto& g = kin_.geometry();
  for (double tl : {poses_.stow_theta_l, poses_.deploy_theta_l, poses_.place_theta_l}) {
    if (!g.in_workspace(tl)) throw ConfigError("sequencer pose outside the limb workspace");
  }
  stow_theta_s_ = kin_.servo_angle(poses_.stow_theta_l).theta_s;
  deploy_theta_s_ = kin_.servo_angle(poses_.deploy_theta_l).theta_s;
  place_theta_s_ = kin_.servo_angle(poses_.place_theta_l).theta_s;
}

SequencerState DeploymentSequencer::initial_state() const {
  return {Mode::Stowed, stow_theta_s_, 0.0, false};
}

bool DeploymentSequencer::accepts(Mode mode, Op op) const {
  switch (op) {
    case Op::Deploy: return mode == Mode::Stowed;
    case Op::Place: return mode == Mode::Deployed;
    case Op::Lift: return mode == Mode::Placed;
    case Op::Stow: return mode == Mode::Deployed;
    case Op::Lock: return mode == Mode::Stowed;
    case Op::Unlock: return mode == Mode::Locked;
    case Op::Steer: return mode != Mode::Locked;
  }
  return false;
}

ServoTrajectory DeploymentSequencer::move(const SequencerState& from,
                                          const SequencerState& to) const {
  const double duration = std::max(std::abs(to.theta_s - from.theta_s) / lift_.rated_speed,
                                   std::abs(to.theta_z - from.theta_z) / steer_.rated_speed);
  ServoTrajectory traj;
  traj.points.push_back({0.0, from.theta_s, from.theta_z, from.locked});
  traj.points.push_back({duration, to.theta_s, to.theta_z, to.locked});
  return traj;
}

std::pair<SequencerState, ServoTrajectory> DeploymentSequencer::command(
    const SequencerState& state, const Command& cmd) const {
  if (!accepts(state.mode, cmd.op)) {
    throw IllegalTransition("illegal transition: cannot " + std::string(to_string(cmd.op)) +
                            " while " + std::string(to_string(state.mode)));
  }
  SequencerState next = state;
  switch (cmd.op) {
    case Op::Deploy:
      next.mode = Mode::Deploying;
      next.theta_s = deploy_theta_s_;
      break;
    case Op::Place:
      next.mode = Mode::Placed;
      next.theta_s = place_theta_s_;
      break;
    case Op::Lift:
      next.mode = Mode::Deployed;
      next.theta_s = deploy_theta_s_;
      break;
    case Op::Stow:
      next.mode = Mode::Stowed;
      next.theta_s = stow_theta_s_;
      break;
    case Op::Lock:
      next.mode = Mode::Locked;
      next.locked = true;
      break;
    case Op::Unlock:
      next.mode = Mode::Stowed;
      next.locked = false;
      break;
    case Op::Steer:
      if (!(cmd.steer_angle >= kSteerMin && cmd.steer_angle <= kSteerMax)) {
        throw RangeError("steer angle " + std::to_string(rad_to_deg(cmd.steer_angle)) +
                         " deg outside [0, 90] deg");
      }
      next.theta_z = cmd.steer_angle;
      break;
  }
  return {next, move(state, next)};
}

SequencerState DeploymentSequencer::complete(const SequencerState& state) const {
  if (state.mode != Mode::Deploying) {
    throw IllegalTransition("illegal transition: no deploy motion to complete while " +
                            std::string(to_string(state.mode)));
  }
  SequencerState next = state;
  next.mode = Mode::Deployed;
  return next;
}

bool BudgetReport::pass() const {
  return setpoints_in_limits &&
         std::all_of(servos.begin(), servos.end(), [](const ServoMargin& m) { return m.pass; });
}

BudgetReport validate_torque_budget(const ServoTrajectory& trajectory, const Kinematics& kin,
                                    double w, std::span<const ServoSpec> servos,
                                    double safety_factor) {
  BudgetReport report;
  report.w = w;
  report.safety_factor = safety_factor;

  for (const auto& p : trajectory.points) {
    for (const auto& s : servos) {
      const double v = s.role == ServoRole::Lift ? p.theta_s
                       : s.role == ServoRole::Steer ? p.theta_z
                                                    : s.angle_min;
      if (v < s.angle_min || v > s.angle_max) report.setpoints_in_limits = false;
    }
  }

  auto probe = [&](double theta_s) {
    try {
      const double theta_l = kin.inverse_servo(theta_s);
      const double t = servo_torque(kin.geometry(), theta_l, w).magnitude();
      if (t > report.demand) {
        report.demand = t;
        report.theta_s_at_max = theta_s;
      }
    } catch (const RangeError&) {
      report.setpoints_in_limits = false;
    }
  };

  constexpr double kProbeStep = 0.0087266462599716477;  // 0.5 deg
  const auto& pts = trajectory.points;
  if (!pts.empty()) probe(pts.front().theta_s);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double a = pts[i - 1].theta_s;
    const double b = pts[i].theta_s;
    const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::abs(b - a) / kProbeStep)));
    for (std::size_t k = 1; k <= n; ++k) {
      probe(k == n ? b : a + (b - a) * static_cast<double>(k) / static_cast<double>(n));
    }
  }

  for (const auto& s : servos) report.servos.push_back(servo_margin(s, report.demand, safety_factor));
  return report;
}

}  // namespace limbkin
