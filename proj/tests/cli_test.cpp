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
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "cli.hpp"
#include "output.hpp"
#include "svg.hpp"

namespace fs = std::filesystem;
using limbkin::cli::run;

namespace {

const fs::path kSource = LIMBKIN_SOURCE_DIR;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("limbkin_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

struct EnvGuard {
  explicit EnvGuard(const char* value) {
    if (value) ::setenv("LIMBKIN_CONFIG", value, 1);
    else ::unsetenv("LIMBKIN_CONFIG");
  }
  ~EnvGuard() { ::unsetenv("LIMBKIN_CONFIG"); }
};

}  // namespace

TEST_CASE("usage errors exit 2 with usage text") {
  EnvGuard env(nullptr);
  const Result r = invoke({"kin", "--no-such-flag"});
  CHECK(r.code == 2);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"kin", "--theta-l", "10", "--theta-s", "5"}).code == 2);
  CHECK(invoke({"kin", "--sweep", "1:2"}).code == 2);
  CHECK(invoke({"sweep", "--criterion", "best"}).code == 2);
  CHECK(invoke({"simulate", "--svg"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("domain errors exit 1 and name the constraint") {
  EnvGuard env(nullptr);
  const Result r = invoke({"kin", "--theta-l", "75"});
  CHECK(r.code == 1);
  CHECK(r.err.find("outside workspace") != std::string::npos);
}

TEST_CASE("kin emits the documented columns") {
  EnvGuard env(nullptr);
  const Result r = invoke({"kin", "--theta-l", "60"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"theta_l_deg", "theta_s_deg", "px_mm", "pz_mm", "lac_mm"});
  CHECK(std::stod(rows[1][2]) == doctest::Approx(185.0).epsilon(1e-9));
  CHECK(r.err.rfind("kin: 1 rows", 0) == 0);
}

TEST_CASE("sweep on the shipped config contains the selected 160 mm row") {
  EnvGuard env(nullptr);
  const Result r = invoke({"--config", (kSource / "configs/reference.json").string(), "sweep"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 32);
  bool found = false;
  for (const auto& row : rows) {
    if (row[0] != "160.000") continue;
    found = true;
    CHECK(row.back() == "1");
    CHECK(std::stod(row[2]) == doctest::Approx(2.8).epsilon(0.05));
  }
  CHECK(found);
}

TEST_CASE("simulate fig2 stays inside the workspace") {
  EnvGuard env(nullptr);
  const Result r = invoke({"simulate", "--terrain", "fig2"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() > 100);
  CHECK(rows[0].size() == 10);
  CHECK(rows[0].back() == "saturated");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double tl = std::stod(rows[i][2]);
    CHECK(tl >= -40.0);
    CHECK(tl <= 60.0);
  }
}

TEST_CASE("out-dir products, manifest and determinism") {
  EnvGuard env(nullptr);
  const fs::path a = scratch_dir("det_a");
  const fs::path b = scratch_dir("det_b");
  const fs::path cfg = kSource / "configs/reference.json";
  const std::string before = slurp(cfg);
  for (const auto& dir : {a, b}) {
    const Result r = invoke({"--config", cfg.string(), "--out-dir", dir.string(), "sweep", "--svg"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("sweep:", 0) == 0);
  }
  for (const char* name : {"sweep_long.csv", "sweep_aggregate.csv", "optimum.json", "sweep.svg"}) {
    CAPTURE(name);
    REQUIRE(fs::exists(a / name));
    CHECK(slurp(a / name) == slurp(b / name));
  }
  CHECK(slurp(a / "sweep_long.csv").rfind("# manifest: manifest.json\n", 0) == 0);
  const std::string manifest = slurp(a / "manifest.json");
  CHECK(manifest.find("\"sweep_aggregate.csv\"") != std::string::npos);
  CHECK(manifest.find("\"config\"") != std::string::npos);
  CHECK(manifest.find("\"timestamp\"") != std::string::npos);
  for (const auto& e : fs::directory_iterator(a)) {
    CHECK(e.path().filename().string().find(".tmp.") == std::string::npos);
  }
  CHECK(slurp(cfg) == before);
  const std::string report = slurp(a / "optimum.json");
  CHECK(report.find("assumed_parameters") != std::string::npos);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("config resolution: flag, then environment, then defaults") {
  const std::string good = (kSource / "configs/reference.json").string();
  {
    EnvGuard env("/definitely/missing.json");
    CHECK(invoke({"kin", "--theta-l", "0"}).code == 2);
    CHECK(invoke({"--config", good, "kin", "--theta-l", "0"}).code == 0);
  }
  {
    EnvGuard env(good.c_str());
    CHECK(invoke({"kin", "--theta-l", "0"}).code == 0);
  }
  {
    EnvGuard env(nullptr);
    CHECK(invoke({"kin", "--theta-l", "0"}).code == 0);
  }
}

TEST_CASE("calibrate reports the solved angle or a residual curve") {
  EnvGuard env(nullptr);
  const Result ok = invoke({"calibrate"});
  REQUIRE(ok.code == 0);
  CHECK(ok.out.find("\"theta_ins_deg\"") != std::string::npos);
  CHECK(ok.out.find("\"pass\": true") != std::string::npos);

  const fs::path dir = scratch_dir("calib");
  const Result bad = invoke({"--out-dir", dir.string(), "calibrate", "--target", "-500"});
  CHECK(bad.code == 1);
  const auto rows = parse_csv(slurp(dir / "calibration_residual.csv"));
  REQUIRE(rows.size() > 10);
  CHECK(rows[0] == std::vector<std::string>{"theta_ins_deg", "residual_deg"});
  CHECK(slurp(dir / "manifest.json").find("calibration_residual.csv") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("sequence scripts") {
  EnvGuard env(nullptr);
  const fs::path dir = scratch_dir("seq");
  fs::create_directories(dir);
  const fs::path good = kSource / "scripts/deploy_cycle.seq";
  const Result r = invoke({"sequence", "--script", good.string()});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  CHECK(rows[0] == std::vector<std::string>{"t_s", "mode", "theta_s_deg", "theta_z_deg", "locked"});
  CHECK(rows.back()[1] == "Locked");
  CHECK(r.err.find("budget PASS") != std::string::npos);
  CHECK(invoke({"sequence", "--script", good.string(), "--servo", "servo3"}).err.find("budget FAIL") !=
        std::string::npos);

  std::ofstream(dir / "illegal.seq") << "place\n";
  CHECK(invoke({"sequence", "--script", (dir / "illegal.seq").string()}).code == 1);
  std::ofstream(dir / "garbage.seq") << "deploy\nfly\n";
  const Result g = invoke({"sequence", "--script", (dir / "garbage.seq").string()});
  CHECK(g.code == 2);
  CHECK(g.err.find(":2:") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("format_number") {
  using limbkin::cli::format_number;
  CHECK(format_number(-0.0) == "0.000000");
  CHECK(format_number(-1e-12) == "0.000000");
  CHECK(format_number(1.5, 2) == "1.50");
  CHECK(format_number(NAN) == "nan");
}

TEST_CASE("emit_svg") {
  using limbkin::cli::Panel;
  using limbkin::cli::render_svg;
  using limbkin::cli::Series;

  SUBCASE("two points draw a single segment") {
    const std::vector<Panel> p{{"t", "x", "y", {Series{"s", {0.0, 1.0}, {0.0, 2.0}}}}};
    const std::string svg = render_svg(p);
    const auto d = svg.find("<path d=\"");
    REQUIRE(d != std::string::npos);
    const std::string path = svg.substr(d, svg.find('"', d + 9) - d);
    CHECK(std::count(path.begin(), path.end(), 'M') == 1);
    CHECK(std::count(path.begin(), path.end(), 'L') == 1);
  }
  SUBCASE("identical input gives identical bytes") {
    const std::vector<Panel> p{{"t", "x (m)", "y (deg)", {Series{"s", {0, 1, 2, 3}, {1, 4, 9, 16}}}}};
    const fs::path a = scratch_dir("svg_a.svg");
    const fs::path b = scratch_dir("svg_b.svg");
    limbkin::cli::emit_svg(a, p);
    limbkin::cli::emit_svg(b, p);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).find("y (deg)") != std::string::npos);
    fs::remove(a);
    fs::remove(b);
  }
  SUBCASE("dual panel") {
    const std::vector<Panel> p{{"(a)", "lCD (mm)", "theta_s (deg)", {Series{"a", {100, 160}, {-17, -45}}}},
                               {"(b)", "lCD (mm)", "T_s (N*m)", {Series{"b", {100, 160}, {4.3, 2.9}}}}};
    const std::string svg = render_svg(p);
    std::size_t panels = 0;
    for (auto pos = svg.find("class=\"panel\""); pos != std::string::npos;
         pos = svg.find("class=\"panel\"", pos + 1)) {
      ++panels;
    }
    CHECK(panels == 2);
  }
  SUBCASE("empty series is rejected") {
    const std::vector<Panel> none;
    CHECK_THROWS_AS(render_svg(none), std::invalid_argument);
    const std::vector<Panel> empty{{"t", "x", "y", {Series{"s", {}, {}}}}};
    CHECK_THROWS_AS(render_svg(empty), std::invalid_argument);
    const std::vector<Panel> nan{{"t", "x", "y", {Series{"s", {NAN}, {1.0}}}}};
    CHECK_THROWS_AS(render_svg(nan), std::invalid_argument);
  }
}
