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

#include "limbkin/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "json.hpp"

#include "limbkin/errors.hpp"

namespace limbkin {

namespace {

using nlohmann::json;

struct UnitScales {
  double length = 1.0;  // -> m
  double angle = 1.0;   // -> rad
  bool torque_kgcm = false;
  bool speed_s_per_60deg = false;
};

UnitScales read_units(const json& root) {
  UnitScales u;
  if (!root.contains("units")) return u;
  const json& units = root.at("units");
  if (!units.is_object()) throw ConfigError("units must be an object");
  for (const auto& [key, value] : units.items()) {
    if (!value.is_string()) throw ConfigError("units." + key + " must be a string");
    const auto s = value.get<std::string>();
    if (key == "length") {
      if (s == "m") u.length = 1.0;
      else if (s == "mm") u.length = 1e-3;
      else throw ConfigError("units.length must be \"m\" or \"mm\", got \"" + s + "\"");
    } else if (key == "angle") {
      if (s == "rad") u.angle = 1.0;
      else if (s == "deg") u.angle = kPi / 180.0;
      else throw ConfigError("units.angle must be \"rad\" or \"deg\", got \"" + s + "\"");
    } else if (key == "torque") {
      if (s == "Nm") u.torque_kgcm = false;
      else if (s == "kgcm") u.torque_kgcm = true;
      else throw ConfigError("units.torque must be \"Nm\" or \"kgcm\", got \"" + s + "\"");
    } else if (key == "speed") {
      if (s == "rad/s") u.speed_s_per_60deg = false;
      else if (s == "s/60deg") u.speed_s_per_60deg = true;
      else throw ConfigError("units.speed must be \"rad/s\" or \"s/60deg\", got \"" + s + "\"");
    } else {
      throw ConfigError("unknown key 'units." + key + "'");
    }
  }
  return u;
}

double number(const json& value, const std::string& path) {
  if (!value.is_number()) throw ConfigError(path + " must be a number");
  return value.get<double>();
}

// Reads the keys of `section` through a table of field setters; anything
// not in the table is rejected.
using Setter = std::function<void(const json&, const std::string&)>;

void read_section(const json& section, const std::string& name,
                  const std::map<std::string, Setter>& fields) {
  if (!section.is_object()) throw ConfigError(name + " must be an object");
  for (const auto& [key, value] : section.items()) {
    auto it = fields.find(key);
    if (it == fields.end()) throw ConfigError("unknown key '" + name + "." + key + "'");
    it->second(value, name + "." + key);
  }
}

Setter scaled(double& target, double scale) {
  return [&target, scale](const json& v, const std::string& path) {
    target = number(v, path) * scale;
  };
}

LinkageGeometry read_geometry(const json& section, const UnitScales& u) {
  LinkageGeometry g = reference_geometry();
  read_section(section, "geometry",
               {
                   {"l1", scaled(g.l1, u.length)},
                   {"l2", scaled(g.l2, u.length)},
                   {"lAD", scaled(g.lAD, u.length)},
                   {"lAB", scaled(g.lAB, u.length)},
                   {"lBC", scaled(g.lBC, u.length)},
                   {"lCD", scaled(g.lCD, u.length)},
                   {"h", scaled(g.h, u.length)},
                   {"r", scaled(g.r, u.length)},
                   {"theta_ins", scaled(g.theta_ins, u.angle)},
                   {"theta_up", scaled(g.theta_up, u.angle)},
                   {"theta_dn", scaled(g.theta_dn, u.angle)},
               });
  g.validate();
  return g;
}

ServoSpec read_servo(const json& entry, std::size_t index, const UnitScales& u) {
  const std::string name = "servos[" + std::to_string(index) + "]";
  ServoSpec s;
  bool has_role = false;
  read_section(entry, name,
               {
                   {"name",
                    [&](const json& v, const std::string& path) {
                      if (!v.is_string()) throw ConfigError(path + " must be a string");
                      s.name = v.get<std::string>();
                    }},
                   {"role",
                    [&](const json& v, const std::string& path) {
                      if (!v.is_string()) throw ConfigError(path + " must be a string");
                      s.role = servo_role_from_string(v.get<std::string>());
                      has_role = true;
                    }},
                   {"steady_torque",
                    [&](const json& v, const std::string& path) {
                      const double t = number(v, path);
                      if (t <= 0.0) throw ConfigError(path + " must be positive");
                      s.steady_torque = u.torque_kgcm ? kgcm_to_newton_metre(t) : t;
                    }},
                   {"rated_speed",
                    [&](const json& v, const std::string& path) {
                      const double r = number(v, path);
                      if (r <= 0.0) throw ConfigError(path + " must be positive");
                      s.rated_speed = u.speed_s_per_60deg ? seconds_per_60deg_to_rad_per_s(r) : r;
                    }},
                   {"angle_min", scaled(s.angle_min, u.angle)},
                   {"angle_max", scaled(s.angle_max, u.angle)},
               });
  if (!has_role) throw ConfigError(name + ".role is required");
  s.validate();
  return s;
}

SimulationSettings read_simulation(const json& section, const UnitScales& u) {
  SimulationSettings s;
  read_section(section, "simulation",
               {
                   {"w", scaled(s.w, 1.0)},
                   {"wheelbase", scaled(s.wheelbase, u.length)},
                   {"mount_offset", scaled(s.mount_offset, u.length)},
                   {"step", scaled(s.step, u.length)},
                   {"safety_factor", scaled(s.safety_factor, 1.0)},
                   {"deploy_theta_l", scaled(s.deploy_theta_l, u.angle)},
                   {"calibration_target", scaled(s.calibration_target, u.angle)},
                   {"calibration_lcd", scaled(s.calibration_lcd, u.length)},
                   {"sweep_lcd_min", scaled(s.sweep_lcd_min, u.length)},
                   {"sweep_lcd_max", scaled(s.sweep_lcd_max, u.length)},
                   {"sweep_lcd_step", scaled(s.sweep_lcd_step, u.length)},
                   {"sweep_theta_step", scaled(s.sweep_theta_step, u.angle)},
                   {"optimum_tolerance", scaled(s.optimum_tolerance, 1.0)},
               });
  s.validate();
  return s;
}

}  // namespace

void SimulationSettings::validate() const {
  auto positive = [](double v, const char* field) {
    if (!std::isfinite(v) || !(v > 0.0)) {
      throw ConfigError(std::string("simulation.") + field + " must be positive");
    }
  };
  if (!std::isfinite(w)) throw ConfigError("simulation.w must be finite");
  positive(wheelbase, "wheelbase");
  positive(step, "step");
  positive(safety_factor, "safety_factor");
  positive(calibration_target, "calibration_target");
  positive(calibration_lcd, "calibration_lcd");
  positive(sweep_lcd_min, "sweep_lcd_min");
  positive(sweep_lcd_step, "sweep_lcd_step");
  positive(sweep_theta_step, "sweep_theta_step");
  positive(optimum_tolerance, "optimum_tolerance");
  if (!std::isfinite(mount_offset)) throw ConfigError("simulation.mount_offset must be finite");
  if (!std::isfinite(deploy_theta_l)) throw ConfigError("simulation.deploy_theta_l must be finite");
  if (!(sweep_lcd_max >= sweep_lcd_min)) {
    throw ConfigError("simulation.sweep_lcd_max must not be less than sweep_lcd_min");
  }
}

const ServoSpec* Config::servo_for(ServoRole role) const {
  for (const auto& s : servos) {
    if (s.role == role) return &s;
  }
  return nullptr;
}

namespace {

std::string read_file(const std::filesystem::path& path, std::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + std::string(what) + " file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

json parse_root(std::string_view text, std::string_view what) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + " parse failure: " + e.what());
  }
  if (!root.is_object()) throw ConfigError(std::string(what) + " root must be an object");
  return root;
}

}  // namespace

Config parse_config(std::string_view text) {
  const json root = parse_root(text, "config");

  for (const auto& [key, value] : root.items()) {
    if (key != "units" && key != "geometry" && key != "servos" && key != "simulation") {
      throw ConfigError("unknown key '" + key + "'");
    }
  }

  const UnitScales units = read_units(root);
  Config config = default_config();
  if (root.contains("geometry")) config.geometry = read_geometry(root.at("geometry"), units);
  if (root.contains("servos")) {
    const json& list = root.at("servos");
    if (!list.is_array()) throw ConfigError("servos must be an array");
    config.servos.clear();
    for (std::size_t i = 0; i < list.size(); ++i) {
      config.servos.push_back(read_servo(list[i], i, units));
    }
  }
  if (root.contains("simulation")) {
    config.simulation = read_simulation(root.at("simulation"), units);
  }
  if (config.geometry.in_workspace(config.simulation.deploy_theta_l) == false) {
    throw ConfigError("simulation.deploy_theta_l must lie within [theta_dn, theta_up]");
  }
  return config;
}

Config load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path, "config"));
}

TerrainProfile parse_terrain(std::string_view text) {
  const json root = parse_root(text, "terrain");
  for (const auto& [key, value] : root.items()) {
    if (key != "units" && key != "terrain") throw ConfigError("unknown key '" + key + "'");
  }
  if (!root.contains("terrain")) throw ConfigError("missing 'terrain' section");
  const UnitScales u = read_units(root);
  const json& t = root.at("terrain");
  if (!t.is_object()) throw ConfigError("terrain must be an object");
  const bool has_segments = t.contains("segments");
  const bool has_vertices = t.contains("vertices");
  if (has_segments == has_vertices) {
    throw ConfigError("terrain needs exactly one of 'segments' or 'vertices'");
  }

  if (has_segments) {
    for (const auto& [key, value] : t.items()) {
      if (key != "segments") throw ConfigError("unknown key 'terrain." + key + "'");
    }
    const json& list = t.at("segments");
    if (!list.is_array()) throw ConfigError("terrain.segments must be an array");
    std::vector<TerrainSegment> segments;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string name = "terrain.segments[" + std::to_string(i) + "]";
      TerrainSegment seg;
      double sinkage = 0.0;
      bool soft = false;
      read_section(list[i], name,
                   {
                       {"length", scaled(seg.length, u.length)},
                       {"slope", scaled(seg.slope, u.angle)},
                       {"sinkage",
                        [&](const json& v, const std::string& path) {
                          sinkage = number(v, path) * u.length;
                          soft = true;
                        }},
                   });
      if (soft) seg.sinkage = sinkage;
      segments.push_back(seg);
    }
    return build_terrain(segments);
  }

  std::vector<Point2> vertices;
  std::vector<SoftSpan> spans;
  for (const auto& [key, value] : t.items()) {
    if (key == "vertices") {
      if (!value.is_array()) throw ConfigError("terrain.vertices must be an array");
      for (std::size_t i = 0; i < value.size(); ++i) {
        const std::string path = "terrain.vertices[" + std::to_string(i) + "]";
        const json& v = value[i];
        if (!v.is_array() || v.size() != 2) throw ConfigError(path + " must be an [x, z] pair");
        vertices.push_back({number(v[0], path) * u.length, number(v[1], path) * u.length});
      }
    } else if (key == "soft_spans") {
      if (!value.is_array()) throw ConfigError("terrain.soft_spans must be an array");
      for (std::size_t i = 0; i < value.size(); ++i) {
        SoftSpan span;
        read_section(value[i], "terrain.soft_spans[" + std::to_string(i) + "]",
                     {
                         {"x_start", scaled(span.x_start, u.length)},
                         {"x_end", scaled(span.x_end, u.length)},
                         {"depth", scaled(span.depth, u.length)},
                     });
        spans.push_back(span);
      }
    } else {
      throw ConfigError("unknown key 'terrain." + key + "'");
    }
  }
  return TerrainProfile(std::move(vertices), std::move(spans));
}

TerrainProfile load_terrain(const std::filesystem::path& path) {
  return parse_terrain(read_file(path, "terrain"));
}

std::string serialize_config(const Config& config) {
  const auto& g = config.geometry;
  const auto& s = config.simulation;
  json root;
  root["units"] = {{"length", "m"}, {"angle", "rad"}, {"torque", "Nm"}, {"speed", "rad/s"}};
  root["geometry"] = {
      {"l1", g.l1},       {"l2", g.l2},         {"lAD", g.lAD},
      {"lAB", g.lAB},     {"lBC", g.lBC},       {"lCD", g.lCD},
      {"h", g.h},         {"r", g.r},           {"theta_ins", g.theta_ins},
      {"theta_up", g.theta_up}, {"theta_dn", g.theta_dn},
  };
  json servos = json::array();
  for (const auto& sv : config.servos) {
    servos.push_back({{"name", sv.name},
                      {"role", std::string(to_string(sv.role))},
                      {"steady_torque", sv.steady_torque},
                      {"rated_speed", sv.rated_speed},
                      {"angle_min", sv.angle_min},
                      {"angle_max", sv.angle_max}});
  }
  root["servos"] = std::move(servos);
  root["simulation"] = {
      {"w", s.w},
      {"wheelbase", s.wheelbase},
      {"mount_offset", s.mount_offset},
      {"step", s.step},
      {"safety_factor", s.safety_factor},
      {"deploy_theta_l", s.deploy_theta_l},
      {"calibration_target", s.calibration_target},
      {"calibration_lcd", s.calibration_lcd},
      {"sweep_lcd_min", s.sweep_lcd_min},
      {"sweep_lcd_max", s.sweep_lcd_max},
      {"sweep_lcd_step", s.sweep_lcd_step},
      {"sweep_theta_step", s.sweep_theta_step},
      {"optimum_tolerance", s.optimum_tolerance},
  };
  return root.dump(2) + "\n";
}

Config default_config() {
  Config c;
  c.geometry = reference_geometry();
  c.servos = reference_servos();
  return c;
}

}  // namespace limbkin
