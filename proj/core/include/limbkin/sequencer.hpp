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

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "limbkin/geometry.hpp"
#include "limbkin/kinematics.hpp"
#include "limbkin/statics.hpp"

namespace limbkin {

enum class Mode { Stowed, Deploying, Deployed, Placed, Locked };

std::string_view to_string(Mode mode);

enum class Op { Deploy, Place, Lift, Stow, Lock, Unlock, Steer };

std::string_view to_string(Op op);

struct Command {
  Op op = Op::Deploy;
  double steer_angle = 0.0;  // rad, Steer only

  /// "deploy", "place", "lift", "stow", "lock", "unlock", "steer <deg>".
  static Command parse(std::string_view line);
};

struct SequencerState {
  Mode mode = Mode::Stowed;
  double theta_s = 0.0;  // Servo-1 setpoint
  double theta_z = 0.0;  // Servo-2 setpoint
  bool locked = false;   // Servo-3

  friend bool operator==(const SequencerState&, const SequencerState&) = default;
};

struct Setpoint {
  double t = 0.0;
  double theta_s = 0.0;
  double theta_z = 0.0;
  bool locked = false;
};

/// Time-stamped setpoints; linear between points (constant velocity).
struct ServoTrajectory {
  std::vector<Setpoint> points;

  double duration() const { return points.empty() ? 0.0 : points.back().t; }
};

/// Lifting angles the sequencer drives to.
struct SequencerPoses {
  double stow_theta_l = 0.0;
  double deploy_theta_l = 0.0;
  double place_theta_l = 0.0;  // the contact solution for the current pose
};

/**
 * Mode graph:
 *
 *   Stowed <-> Locked          (lock / unlock)
 *   Stowed -> Deploying        (deploy)
 *   Deploying -> Deployed      (complete)
 *   Deployed <-> Placed        (place / lift)
 *   Deployed -> Stowed         (stow)
 *
 * Steer is accepted in every mode except Locked and leaves the mode alone.
 * Servo-1 and Servo-2 move at their rated speeds; the lock is a step.
 */
class DeploymentSequencer {
 public:
  DeploymentSequencer(Kinematics kin, ServoSpec lift, ServoSpec steer, SequencerPoses poses);

  SequencerState initial_state() const;

  /// Throws IllegalTransition, or RangeError for a steer angle outside [0, 90] deg.
  std::pair<SequencerState, ServoTrajectory> command(const SequencerState& state,
                                                     const Command& cmd) const;

  /// Ends a deploy motion. Throws IllegalTransition unless Deploying.
  SequencerState complete(const SequencerState& state) const;

  bool accepts(Mode mode, Op op) const;

  const Kinematics& kinematics() const noexcept { return kin_; }
  const ServoSpec& lift_servo() const noexcept { return lift_; }
  const ServoSpec& steer_servo() const noexcept { return steer_; }
  const SequencerPoses& poses() const noexcept { return poses_; }

 private:
  ServoTrajectory move(const SequencerState& from, const SequencerState& to) const;

  Kinematics kin_;
  ServoSpec lift_;
  ServoSpec steer_;
  SequencerPoses poses_;
  double stow_theta_s_;
  double deploy_theta_s_;
  double place_theta_s_;
};

struct BudgetReport {
  double demand = 0.0;  // worst |T_s| along the trajectory, N·m
  double theta_s_at_max = 0.0;
  double w = 0.0;
  double safety_factor = 1.5;
  bool setpoints_in_limits = true;
  std::vector<ServoMargin> servos;

  bool pass() const;
};

/// Worst-case holding torque along the Servo-1 path, checked against each
/// servo. An empty trajectory passes with zero demand.
BudgetReport validate_torque_budget(const ServoTrajectory& trajectory, const Kinematics& kin,
                                    double w, std::span<const ServoSpec> servos,
                                    double safety_factor = 1.5);

}  // namespace limbkin
