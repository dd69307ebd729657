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

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "limbkin/config.hpp"
#include "limbkin/errors.hpp"
#include "limbkin/kinematics.hpp"
#include "limbkin/optimizer.hpp"
#include "limbkin/sequencer.hpp"
#include "limbkin/statics.hpp"
#include "limbkin/terrain.hpp"
#include "limbkin/units.hpp"
#include "output.hpp"
#include "svg.hpp"

#ifndef LIMBKIN_VERSION
#define LIMBKIN_VERSION "0.0.0"
#endif

namespace limbkin::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kManifestName = "manifest.json";
constexpr const char* kConfigEnv = "LIMBKIN_CONFIG";

// ---------------------------------------------------------------------------
// Run context: resolved configuration and output routing.

struct ResolvedConfig {
  Config config;
  std::string source;  // file path, or "built-in defaults"
};

ResolvedConfig resolve_config(const std::string& flag) {
  if (!flag.empty()) return {load_config(flag), flag};
  if (const char* env = std::getenv(kConfigEnv); env && *env) return {load_config(env), env};
  return {default_config(), "built-in defaults"};
}

std::string timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Outputs {
 public:
  Outputs(std::string out_dir, std::ostream& out, std::ostream& err)
      : dir_(std::move(out_dir)), out_(out), err_(err) {
    if (!dir_.empty()) fs::create_directories(dir_);
  }

  bool to_dir() const { return !dir_.empty(); }

  /// The subcommand's main data product: stdout without --out-dir.
  void primary_csv(const std::string& name, const CsvTable& table) {
    if (to_dir()) {
      file(name, table.str(kManifestName));
    } else {
      out_ << table.str();
    }
  }

  void primary_json(const std::string& name, const json& doc) {
    if (to_dir()) {
      file(name, doc.dump(2) + "\n");
    } else {
      out_ << doc.dump(2) << "\n";
    }
  }

  /// Secondary products exist only with --out-dir.
  void csv(const std::string& name, const CsvTable& table) {
    if (to_dir()) file(name, table.str(kManifestName));
  }
  void json_file(const std::string& name, const json& doc) {
    if (to_dir()) file(name, doc.dump(2) + "\n");
  }
  void text_file(const std::string& name, const std::string& text) {
    if (to_dir()) file(name, text);
  }
  void svg(const std::string& name, std::span<const Panel> panels) {
    if (!to_dir()) return;
    emit_svg(fs::path(dir_) / name, panels);
    written_.push_back(name);
  }

  void summary(const std::string& line) { (to_dir() ? out_ : err_) << line << "\n"; }

  void manifest(const std::string& subcommand, const std::vector<std::string>& args,
                const ResolvedConfig& rc) {
    if (!to_dir() || written_.empty()) return;
    json m;
    m["tool"] = "limbkin";
    m["version"] = LIMBKIN_VERSION;
    m["timestamp"] = timestamp();
    m["subcommand"] = subcommand;
    m["arguments"] = args;
    m["config_source"] = rc.source;
    m["config"] = json::parse(serialize_config(rc.config));
    m["outputs"] = written_;
    write_atomic(fs::path(dir_) / kManifestName, m.dump(2) + "\n");
  }

 private:
  void file(const std::string& name, const std::string& text) {
    write_atomic(fs::path(dir_) / name, text);
    written_.push_back(name);
  }

  std::string dir_;
  std::ostream& out_;
  std::ostream& err_;
  std::vector<std::string> written_;
};

// ---------------------------------------------------------------------------
// Shared helpers.

std::string deg(double rad, int precision = 6) { return format_number(rad_to_deg(rad), precision); }
std::string mm(double m, int precision = 6) { return format_number(m_to_mm(m), precision); }
std::string num(double v, int precision = 6) { return format_number(v, precision); }

/// "start:end:step" in display units.
AxisRange parse_range(const std::string& text, double scale, const std::string& flag) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(flag + " expects start:end:step, got '" + text + "'");
    }
  }
  if (parts.size() != 3) throw ConfigError(flag + " expects start:end:step, got '" + text + "'");
  if (!(parts[2] > 0.0)) throw ConfigError(flag + " step must be positive");
  if (!(parts[1] >= parts[0])) throw ConfigError(flag + " end must not precede start");
  return {parts[0] * scale, parts[1] * scale, parts[2] * scale};
}

json geometry_json(const LinkageGeometry& g) {
  json j = {
      {"units", {{"length", "m"}, {"angle", "rad"}}},
      {"l1", g.l1},   {"l2", g.l2},   {"lAD", g.lAD},
      {"lAB", g.lAB}, {"lBC", g.lBC}, {"lCD", g.lCD},
      {"h", g.h},     {"r", g.r},     {"theta_ins", g.theta_ins},
      {"theta_up", g.theta_up},       {"theta_dn", g.theta_dn},
  };
  j["assumed_parameters"] = assumed_parameters();
  return j;
}

json margins_json(const std::vector<ServoMargin>& margins) {
  json list = json::array();
  for (const auto& m : margins) {
    list.push_back({{"name", m.name},
                    {"capacity_Nm", m.capacity},
                    {"margin", std::isfinite(m.margin) ? json(m.margin) : json(nullptr)},
                    {"pass", m.pass}});
  }
  return list;
}

std::vector<double> theta_grid(const LinkageGeometry& g, const std::optional<AxisRange>& sweep) {
  return (sweep ? *sweep : AxisRange{g.theta_dn, g.theta_up, deg_to_rad(1.0)}).values();
}

// ---------------------------------------------------------------------------
// Subcommands. Each returns the exit code; domain errors propagate as
// exceptions and are mapped in run().

struct KinOptions {
  std::optional<double> theta_l;
  std::optional<double> theta_s;
  std::string sweep;
};

int cmd_kin(const KinOptions& o, const ResolvedConfig& rc, Outputs& io) {
  const Kinematics kin(rc.config.geometry);
  const auto& g = kin.geometry();
  std::vector<double> thetas;
  if (o.theta_l) {
    thetas.push_back(deg_to_rad(*o.theta_l));
  } else if (o.theta_s) {
    thetas.push_back(kin.inverse_servo(deg_to_rad(*o.theta_s)));
  } else {
    thetas = theta_grid(g, o.sweep.empty() ? std::nullopt
                                           : std::optional(parse_range(o.sweep, kPi / 180.0, "--sweep")));
  }
  CsvTable table({"theta_l_deg", "theta_s_deg", "px_mm", "pz_mm", "lac_mm"});
  double lo = INFINITY, hi = -INFINITY;
  for (double tl : thetas) {
    const Point2 p = fk_wheel_position(g, tl);
    const FourBarSolution s = kin.servo_angle(tl);
    lo = std::min(lo, s.theta_s);
    hi = std::max(hi, s.theta_s);
    table.add_row({deg(tl), deg(s.theta_s), mm(p.x), mm(p.z), mm(s.lAC)});
  }
  io.primary_csv("kin.csv", table);
  io.summary("kin: " + std::to_string(table.size()) + " rows, theta_s in [" + deg(lo, 3) + ", " +
             deg(hi, 3) + "] deg");
  return kExitOk;
}

struct TorqueOptions {
  std::optional<double> theta_l;
  std::optional<double> w;
  std::string sweep;
  double load_scale = 1.0;
};

int cmd_torque(const TorqueOptions& o, const ResolvedConfig& rc, Outputs& io) {
  const auto& g = rc.config.geometry;
  const double w = o.w.value_or(rc.config.simulation.w);
  std::vector<double> thetas;
  if (o.theta_l) {
    thetas.push_back(deg_to_rad(*o.theta_l));
    if (!g.in_workspace(thetas.back())) {
      throw RangeError("theta_l = " + num(*o.theta_l, 3) + " deg outside the workspace");
    }
  } else {
    thetas = theta_grid(g, o.sweep.empty() ? std::nullopt
                                           : std::optional(parse_range(o.sweep, kPi / 180.0, "--sweep")));
  }
  CsvTable table({"theta_l_deg", "theta_B_deg", "theta_C_deg", "F_BC_N", "T_s_Nm"});
  double peak = 0.0, at = thetas.front();
  for (double tl : thetas) {
    const ForceResolution f = servo_torque(g, tl, w);
    if (std::abs(f.T_s) > peak) {
      peak = std::abs(f.T_s);
      at = tl;
    }
    table.add_row({deg(tl), deg(f.theta_B), deg(f.theta_C), num(f.F_BC), num(f.T_s)});
  }
  io.primary_csv("torque.csv", table);

  if (io.to_dir()) {
    const SizingReport r = motor_sizing(g, o.load_scale * w / kReferenceLoad, rc.config.servos,
                                        rc.config.simulation.safety_factor);
    io.json_file("sizing.json", {{"reference_load_N", r.reference_load},
                                 {"reference_demand_Nm", r.reference_demand},
                                 {"theta_l_at_max_deg", rad_to_deg(r.theta_l_at_max)},
                                 {"load_scale", r.load_scale},
                                 {"demand_Nm", r.demand},
                                 {"safety_factor", r.safety_factor},
                                 {"servos", margins_json(r.servos)},
                                 {"all_pass", r.all_pass()},
                                 {"geometry", geometry_json(g)}});
  }
  io.summary("torque: " + std::to_string(table.size()) + " rows at w = " + num(w, 3) +
             " N, max |T_s| = " + num(peak, 4) + " N*m at theta_l = " + deg(at, 2) + " deg");
  return kExitOk;
}

struct SweepOptions {
  std::string lcd;
  std::optional<double> theta_step;
  std::optional<double> w;
  std::string criterion = "moderate";
  bool svg = false;
};

int cmd_sweep(const SweepOptions& o, const ResolvedConfig& rc, Outputs& io) {
  const auto& g = rc.config.geometry;
  const auto& sim = rc.config.simulation;
  const double w = o.w.value_or(sim.w);
  const AxisRange lcd = o.lcd.empty() ? AxisRange{sim.sweep_lcd_min, sim.sweep_lcd_max, sim.sweep_lcd_step}
                                      : parse_range(o.lcd, 1e-3, "--lcd");
  const AxisRange theta{g.theta_dn, g.theta_up,
                        o.theta_step ? deg_to_rad(*o.theta_step) : sim.sweep_theta_step};
  OptimumCriteria criteria;
  criteria.kind = optimum_criterion_from_string(o.criterion);
  criteria.angle_fraction = sim.optimum_tolerance;
  criteria.torque_fraction = sim.optimum_tolerance;

  const SweepGrid grid = sweep(g, theta, lcd, w);

  CsvTable longform({"lcd_mm", "theta_l_deg", "theta_s_deg", "T_s_Nm", "feasible"});
  for (std::size_t r = 0; r < grid.rows(); ++r) {
    for (std::size_t c = 0; c < grid.cols(); ++c) {
      const bool ok = grid.feasible(r, c);
      longform.add_row({mm(grid.lcd_axis()[r], 3), deg(grid.theta_l_axis()[c]),
                        ok ? deg(*grid.theta_s(r, c)) : "nan", ok ? num(*grid.torque(r, c)) : "nan",
                        ok ? "1" : "0"});
    }
  }

  std::optional<Optimum> best;
  std::string no_optimum;
  try {
    best = select_optimum(grid, criteria);
  } catch (const RangeError& e) {
    no_optimum = e.what();
  }
  const std::vector<RowAggregate> table = best ? best->table : aggregate(grid);

  CsvTable agg({"lcd_mm", "min_theta_s_deg", "max_abs_T_s_Nm", "feasible_cells", "fully_feasible",
                "selected"});
  for (std::size_t r = 0; r < table.size(); ++r) {
    const auto& a = table[r];
    agg.add_row({mm(a.lcd, 3), a.min_theta_s ? deg(*a.min_theta_s) : "nan",
                 a.max_abs_torque ? num(*a.max_abs_torque) : "nan", std::to_string(a.feasible_cells),
                 a.fully_feasible ? "1" : "0", best && best->row == r ? "1" : "0"});
  }
  io.csv("sweep_long.csv", longform);
  io.primary_csv("sweep_aggregate.csv", agg);

  json report = {{"criterion", std::string(to_string(criteria.kind))},
                 {"tolerance", sim.optimum_tolerance},
                 {"w_N", w},
                 {"lcd_axis_mm", {m_to_mm(lcd.start), m_to_mm(lcd.stop), m_to_mm(lcd.step)}},
                 {"theta_step_deg", rad_to_deg(theta.step)},
                 {"geometry", geometry_json(g)}};
  if (best) {
    report["optimum"] = {{"lcd_mm", m_to_mm(best->lcd)},
                         {"min_theta_s_deg", rad_to_deg(best->min_theta_s)},
                         {"max_abs_T_s_Nm", best->max_abs_torque}};
  } else {
    report["optimum"] = nullptr;
    report["error"] = no_optimum;
  }
  io.json_file("optimum.json", report);

  if (o.svg) {
    Series angle{"min theta_s", {}, {}};
    Series torque{"max |T_s|", {}, {}};
    for (const auto& a : table) {
      angle.x.push_back(m_to_mm(a.lcd));
      angle.y.push_back(a.min_theta_s ? rad_to_deg(*a.min_theta_s) : NAN);
      torque.x.push_back(m_to_mm(a.lcd));
      torque.y.push_back(a.max_abs_torque ? *a.max_abs_torque : NAN);
    }
    const std::vector<Panel> panels{
        {"(a) driving angle: minimum theta_s over the workspace", "lCD (mm)", "theta_s (deg)", {angle}},
        {"(b) driving torque: maximum |T_s| over the workspace", "lCD (mm)", "T_s (N*m)", {torque}},
    };
    io.svg("sweep.svg", panels);
  }

  if (!best) throw RangeError(no_optimum);
  io.summary("sweep: " + std::to_string(grid.rows()) + "x" + std::to_string(grid.cols()) +
             " grid, optimum lCD = " + mm(best->lcd, 1) + " mm, min theta_s = " +
             deg(best->min_theta_s, 2) + " deg, max |T_s| = " + num(best->max_abs_torque, 4) + " N*m");
  return kExitOk;
}

struct CalibrateOptions {
  std::optional<double> target;
  std::optional<double> lcd;
  std::optional<double> w;
};

// Reported torque scale the calibrated geometry is cross-checked against.
constexpr double kTorqueCheckTarget = 2.8;
constexpr double kTorqueCheckTolerance = 0.15;

int cmd_calibrate(const CalibrateOptions& o, const ResolvedConfig& rc, Outputs& io, std::ostream& err) {
  const auto& sim = rc.config.simulation;
  const double target = o.target ? deg_to_rad(*o.target) : sim.calibration_target;
  const double lcd = o.lcd ? mm_to_m(*o.lcd) : sim.calibration_lcd;
  const double w = o.w.value_or(sim.w);
  const LinkageGeometry base = rc.config.geometry.with_lcd(lcd);

  CalibrationResult result;
  try {
    result = calibrate_installation_angle(base, target, lcd);
  } catch (const CalibrationError& e) {
    CsvTable curve({"theta_ins_deg", "residual_deg"});
    for (const auto& [ins, res] : e.residual_curve()) curve.add_row({deg(ins), deg(res)});
    io.primary_csv("calibration_residual.csv", curve);
    io.json_file("calibration.json", {{"converged", false},
                                      {"error", e.what()},
                                      {"target_deg", rad_to_deg(target)},
                                      {"lcd_mm", m_to_mm(lcd)},
                                      {"geometry", geometry_json(base)}});
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }

  const LinkageGeometry calibrated = base.with_theta_ins(result.theta_ins);
  const TorquePeak peak = max_torque_over_workspace(calibrated, w);
  const bool torque_ok = std::abs(peak.max_abs_torque - kTorqueCheckTarget) <= kTorqueCheckTolerance;
  json report = {{"converged", true},
                 {"theta_ins_rad", result.theta_ins},
                 {"theta_ins_deg", rad_to_deg(result.theta_ins)},
                 {"min_theta_s_deg", rad_to_deg(result.min_theta_s)},
                 {"target_deg", rad_to_deg(target)},
                 {"residual_deg", rad_to_deg(result.residual)},
                 {"lcd_mm", m_to_mm(lcd)},
                 {"torque_check",
                  {{"w_N", w},
                   {"max_abs_T_s_Nm", peak.max_abs_torque},
                   {"theta_l_at_max_deg", rad_to_deg(peak.theta_l)},
                   {"target_Nm", kTorqueCheckTarget},
                   {"tolerance_Nm", kTorqueCheckTolerance},
                   {"pass", torque_ok}}},
                 {"geometry", geometry_json(calibrated)}};
  io.primary_json("calibration.json", report);
  Config updated = rc.config;
  updated.geometry = calibrated;
  io.text_file("calibrated_config.json", serialize_config(updated));
  io.summary("calibrate: theta_ins = " + deg(result.theta_ins, 6) + " deg, min theta_s = " +
             deg(result.min_theta_s, 4) + " deg, residual = " + format_number(rad_to_deg(result.residual), 9) +
             " deg, max |T_s| = " + num(peak.max_abs_torque, 4) + " N*m (" +
             (torque_ok ? "within" : "OUTSIDE") + " 2.8 +/- 0.15)");
  return kExitOk;
}

struct SimulateOptions {
  std::string terrain = "fig2";
  std::optional<double> step;
  std::optional<double> w;
  bool reverse = false;
  bool svg = false;
};

int cmd_simulate(const SimulateOptions& o, const ResolvedConfig& rc, Outputs& io) {
  const auto& sim = rc.config.simulation;
  const TerrainProfile terrain = o.terrain == "fig2" ? fig2_terrain() : load_terrain(o.terrain);
  TraverseOptions opt;
  opt.wheelbase = sim.wheelbase;
  opt.mount_offset = sim.mount_offset;
  opt.step = o.step.value_or(sim.step);
  opt.w = o.w.value_or(sim.w);
  opt.direction = o.reverse ? Direction::Reverse : Direction::Forward;
  if (!(opt.step > 0.0)) throw ConfigError("--step must be positive");

  const Kinematics kin(rc.config.geometry);
  const TraverseTrace trace = traverse(kin, terrain, opt);

  CsvTable table({"distance_m", "pitch_deg", "theta_l_deg", "theta_s_deg", "T_s_Nm", "contact_x_m",
                  "contact_z_m", "contact_angle_deg", "sinkage_mm", "saturated"});
  double lo = INFINITY, hi = -INFINITY;
  std::size_t saturated = 0;
  for (const auto& r : trace.records) {
    lo = std::min(lo, r.theta_l);
    hi = std::max(hi, r.theta_l);
    if (r.saturation != Saturation::None) ++saturated;
    table.add_row({num(r.distance), deg(r.pose.pitch), deg(r.theta_l), deg(r.theta_s), num(r.T_s),
                   num(r.contact.x), num(r.contact.z), deg(r.contact_angle), mm(r.sinkage, 3),
                   std::string(to_string(r.saturation))});
  }
  io.primary_csv("trace.csv", table);

  if (o.svg) {
    Series ground{"effective surface", {}, {}};
    for (const auto& v : terrain.effective_polyline()) {
      ground.x.push_back(v.x);
      ground.y.push_back(v.z);
    }
    Series contact{"wheel contact", {}, {}};
    Series limb{"theta_l", {}, {}};
    for (const auto& r : trace.records) {
      contact.x.push_back(r.contact.x);
      contact.y.push_back(r.contact.z);
      limb.x.push_back(r.pose.x);
      limb.y.push_back(rad_to_deg(r.theta_l));
    }
    const std::vector<Panel> panels{
        {"terrain contour", "x (m)", "z (m)", {ground, contact}},
        {"limb angle relative to the rover", "front axle x (m)", "theta_l (deg)", {limb}},
    };
    io.svg("trace.svg", panels);
  }

  io.summary("simulate: " + std::to_string(trace.records.size()) + " steps, theta_l in [" +
             deg(lo, 2) + ", " + deg(hi, 2) + "] deg, " + std::to_string(saturated) + " saturated");
  return kExitOk;
}

struct SequenceOptions {
  std::string script;
  std::optional<double> w;
  std::string servo;
};

int cmd_sequence(const SequenceOptions& o, const ResolvedConfig& rc, Outputs& io) {
  const Config& cfg = rc.config;
  const ServoSpec* lift = cfg.servo_for(ServoRole::Lift);
  const ServoSpec* steer = cfg.servo_for(ServoRole::Steer);
  if (!lift || !steer) throw ConfigError("sequence needs servos with the lift and steer roles");

  std::vector<const ServoSpec*> budget_servos;
  if (o.servo.empty()) {
    budget_servos.push_back(lift);
  } else {
    for (const auto& s : cfg.servos) {
      if (s.name == o.servo) budget_servos.push_back(&s);
    }
    if (budget_servos.empty()) throw ConfigError("no servo named '" + o.servo + "' in the config");
  }

  std::ifstream in(o.script);
  if (!in) throw ConfigError("cannot open script file '" + o.script + "'");
  std::vector<Command> commands;
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      commands.push_back(Command::parse(line));
    } catch (const ConfigError& e) {
      throw ConfigError(o.script + ":" + std::to_string(n) + ": " + e.what());
    }
  }

  const Kinematics kin(cfg.geometry);
  const auto& g = kin.geometry();
  // "place" drives the wheel to the contact solution for a level rover on flat ground.
  const TerrainProfile ground({{-1.0, 0.0}, {2.0, 0.0}}, {});
  const ContactResult contact = contact_solve(g, {0.0, 0.0, 0.0}, ground, cfg.simulation.mount_offset);
  const DeploymentSequencer seq(kin, *lift, *steer,
                                {g.theta_up, cfg.simulation.deploy_theta_l, contact.theta_l});

  CsvTable log({"t_s", "mode", "theta_s_deg", "theta_z_deg", "locked"});
  auto record = [&](double t, const SequencerState& s) {
    log.add_row({num(t), std::string(to_string(s.mode)), deg(s.theta_s), deg(s.theta_z),
                 s.locked ? "1" : "0"});
  };

  SequencerState state = seq.initial_state();
  ServoTrajectory all;
  all.points.push_back({0.0, state.theta_s, state.theta_z, state.locked});
  double t = 0.0;
  record(t, state);
  for (const auto& cmd : commands) {
    auto [next, traj] = seq.command(state, cmd);
    for (std::size_t i = 1; i < traj.points.size(); ++i) {
      Setpoint p = traj.points[i];
      p.t += t;
      all.points.push_back(p);
    }
    t += traj.duration();
    state = next;
    record(t, state);
    if (state.mode == Mode::Deploying) {
      state = seq.complete(state);
      record(t, state);
    }
  }
  io.primary_csv("sequence.csv", log);

  std::vector<ServoSpec> specs;
  for (const auto* s : budget_servos) specs.push_back(*s);
  const double w = o.w.value_or(cfg.simulation.w);
  const BudgetReport budget = validate_torque_budget(all, kin, w, specs, cfg.simulation.safety_factor);
  io.json_file("budget.json", {{"w_N", budget.w},
                               {"demand_Nm", budget.demand},
                               {"theta_s_at_max_deg", rad_to_deg(budget.theta_s_at_max)},
                               {"safety_factor", budget.safety_factor},
                               {"setpoints_in_limits", budget.setpoints_in_limits},
                               {"servos", margins_json(budget.servos)},
                               {"pass", budget.pass()},
                               {"duration_s", all.duration()},
                               {"commands", commands.size()},
                               {"geometry", geometry_json(g)}});
  io.summary("sequence: " + std::to_string(commands.size()) + " commands, " + num(t, 3) +
             " s, final mode " + std::string(to_string(state.mode)) + ", budget " +
             (budget.pass() ? "PASS" : "FAIL") + " (demand " + num(budget.demand, 4) + " N*m)");
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wheel-on-limb mechanism toolkit: kinematics, torque, design sweeps, "
               "terrain traverse and deployment sequencing.",
               "limbkin"};
  app.set_version_flag("--version", LIMBKIN_VERSION);
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  std::string config_path;
  std::string out_dir;
  app.add_option("--config", config_path,
                 "Configuration file (JSON); defaults to $LIMBKIN_CONFIG, then built-in values");
  app.add_option("--out-dir", out_dir, "Write all products and a manifest.json into this directory");

  KinOptions kin;
  auto* kin_cmd = app.add_subcommand("kin", "Forward and inverse limb kinematics");
  auto* kin_tl = kin_cmd->add_option("--theta-l", kin.theta_l, "Lifting angle (deg)");
  auto* kin_ts = kin_cmd->add_option("--theta-s", kin.theta_s, "Servo angle (deg), solved for theta_l");
  auto* kin_sw = kin_cmd->add_option("--sweep", kin.sweep, "theta_l range start:end:step (deg)");
  kin_tl->excludes(kin_ts)->excludes(kin_sw);
  kin_ts->excludes(kin_sw);

  TorqueOptions torque;
  auto* torque_cmd = app.add_subcommand("torque", "Servo torque and coupler force under a wheel load");
  auto* tq_tl = torque_cmd->add_option("--theta-l", torque.theta_l, "Lifting angle (deg)");
  auto* tq_sw = torque_cmd->add_option("--sweep", torque.sweep, "theta_l range start:end:step (deg)");
  tq_tl->excludes(tq_sw);
  torque_cmd->add_option("--w", torque.w, "Wheel load (N)");
  torque_cmd->add_option("--load-scale", torque.load_scale, "Extra load multiplier for sizing.json")
      ->check(CLI::PositiveNumber);

  SweepOptions sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep lCD against theta_l and select the optimum");
  sweep_cmd->add_option("--lcd", sw.lcd, "lCD range start:end:step (mm)");
  sweep_cmd->add_option("--theta-step", sw.theta_step, "theta_l step (deg)")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--w", sw.w, "Wheel load (N)");
  sweep_cmd->add_option("--criterion", sw.criterion, "moderate | min-torque | min-angle");
  sweep_cmd->add_flag("--svg", sw.svg, "Also write sweep.svg (needs --out-dir)");

  CalibrateOptions cal;
  auto* cal_cmd = app.add_subcommand("calibrate", "Solve the installation angle theta_ins");
  cal_cmd->add_option("--target", cal.target, "Magnitude of the minimum theta_s (deg)");
  cal_cmd->add_option("--lcd", cal.lcd, "lCD at which to calibrate (mm)")->check(CLI::PositiveNumber);
  cal_cmd->add_option("--w", cal.w, "Wheel load for the torque cross-check (N)");

  SimulateOptions simo;
  auto* sim_cmd = app.add_subcommand("simulate", "Quasi-static traverse over a terrain profile");
  sim_cmd->add_option("--terrain", simo.terrain, "'fig2' or a terrain file");
  sim_cmd->add_option("--step", simo.step, "Front-axle step (m)");
  sim_cmd->add_option("--w", simo.w, "Wheel load (N)");
  sim_cmd->add_flag("--reverse", simo.reverse, "Drive in -x");
  sim_cmd->add_flag("--svg", simo.svg, "Also write trace.svg (needs --out-dir)");

  SequenceOptions seqo;
  auto* seq_cmd = app.add_subcommand("sequence", "Run a deploy/place/lift/stow command script");
  seq_cmd->add_option("--script", seqo.script, "One command per line")->required();
  seq_cmd->add_option("--w", seqo.w, "Wheel load for the torque budget (N)");
  seq_cmd->add_option("--servo", seqo.servo, "Check the budget against this servo instead of the lifter");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  std::optional<ResolvedConfig> rc;
  std::optional<Outputs> io;
  // Products already written must stay traceable even when the run fails.
  auto finish = [&] {
    if (rc && io) io->manifest(name, args, *rc);
  };
  try {
    if ((sw.svg || simo.svg) && out_dir.empty()) throw ConfigError("--svg needs --out-dir");
    rc = resolve_config(config_path);
    io.emplace(out_dir, out, err);
    int code = kExitOk;
    if (name == "kin") code = cmd_kin(kin, *rc, *io);
    else if (name == "torque") code = cmd_torque(torque, *rc, *io);
    else if (name == "sweep") code = cmd_sweep(sw, *rc, *io);
    else if (name == "calibrate") code = cmd_calibrate(cal, *rc, *io, err);
    else if (name == "simulate") code = cmd_simulate(simo, *rc, *io);
    else if (name == "sequence") code = cmd_sequence(seqo, *rc, *io);
    finish();
    return code;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    finish();
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace limbkin::cli
