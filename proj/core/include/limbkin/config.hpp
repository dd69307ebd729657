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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "limbkin/geometry.hpp"
#include "limbkin/terrain.hpp"
#include "limbkin/units.hpp"

namespace limbkin {

/// Run settings shared by the statics, optimizer, terrain and sequencer
/// front ends. SI units.
struct SimulationSettings {
  double w = 9.8;                // gravity load at the wheel, N
  double wheelbase = 0.726;      // m
  double mount_offset = 0.0;     // limb pivot ahead of the front axle, m
  double step = 0.01;            // traverse step, m
  double safety_factor = 1.5;
  double deploy_theta_l = 0.0;   // rad
  double calibration_target = deg_to_rad(45.64);  // |min theta_s|, rad
  double calibration_lcd = 0.160;                  // m
  double sweep_lcd_min = 0.100;
  double sweep_lcd_max = 0.250;
  double sweep_lcd_step = 0.005;
  double sweep_theta_step = deg_to_rad(1.0);
  double optimum_tolerance = 0.05;

  void validate() const;

  friend bool operator==(const SimulationSettings&, const SimulationSettings&) = default;
};

struct Config {
  LinkageGeometry geometry;
  std::vector<ServoSpec> servos;
  SimulationSettings simulation;

  const ServoSpec* servo_for(ServoRole role) const;

  friend bool operator==(const Config&, const Config&) = default;
};

/// Parses the structured-text config (JSON). Sections: `units`, `geometry`,
/// `servos`, `simulation`. Values are converted to SI at this boundary.
/// Throws ConfigError on parse failure, unknown keys, bad units or violated
/// invariants.
Config parse_config(std::string_view text);
Config load_config(const std::filesystem::path& path);

/// Canonical form: SI units, sorted keys, shortest round-trip doubles.
std::string serialize_config(const Config& config);

/// Reference geometry, the three servos and default settings.
Config default_config();

/**
 * Terrain file: the same structured text as a config, with a `units` section
 * and a `terrain` section holding either `segments` (length, slope, optional
 * sinkage; first segment flat) or `vertices` ([x, z] pairs) with optional
 * `soft_spans` (x_start, x_end, depth).
 */
TerrainProfile parse_terrain(std::string_view text);
TerrainProfile load_terrain(const std::filesystem::path& path);

}  // namespace limbkin
