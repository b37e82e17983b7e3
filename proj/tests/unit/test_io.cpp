// Copyright 2026 The mpent Authors
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


#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "mpent/csv.hpp"
#include "mpent/errors.hpp"
#include "mpent/figures.hpp"
#include "mpent/report.hpp"
#include "mpent/scenario.hpp"

namespace mpent {
namespace {

namespace fs = std::filesystem;

const fs::path kSource = MPENT_SOURCE_DIR;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mpent_test_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST(Scenario, MinimalDefaults) {
  const Scenario s = parse_scenario("name: demo\nqubits:\n  first: {rabi: 2.0}\n");
  EXPECT_EQ(s.name, "demo");
  EXPECT_EQ(s.first.rabi, 2.0);
  EXPECT_EQ(s.second.rabi, 2.0);
  EXPECT_EQ(s.sweep.x, std::vector<double>{2.0});
  EXPECT_EQ(s.sweep.t, std::vector<double>{1000.0});
  EXPECT_EQ(s.protocol.kappa, 130.0);
  EXPECT_FALSE(s.trajectories.enabled);
}

TEST(Scenario, GeneratedGrids) {
  const Scenario s = parse_scenario(
      "sweep:\n  x: {from: 0.1, to: 10, count: 3, spacing: log}\n"
      "  t: {from: 10, to: 30, count: 3}\n");
  ASSERT_EQ(s.sweep.x.size(), 3u);
  EXPECT_NEAR(s.sweep.x[1], 1.0, 1e-12);
  EXPECT_EQ(s.sweep.t, (std::vector<double>{10.0, 20.0, 30.0}));
}

TEST(Scenario, PresetSetsEfficiency) {
  const Scenario s = parse_scenario("preset: trapped_ion\nqubits:\n  first: {rabi: 3}\n");
  ASSERT_TRUE(s.preset.has_value());
  EXPECT_NEAR(s.first.efficiency, 3e-3, 1e-15);
  EXPECT_NEAR(s.second.efficiency, 3e-3, 1e-15);
}

TEST(Scenario, JsonIsAccepted) {
  const Scenario y = parse_scenario(
      "name: same\nqubits:\n  first: {rabi: 1.5, efficiency: 0.4}\nsweep:\n  t: [10, 20]\n");
  const Scenario j = parse_scenario(
      R"({"name": "same", "qubits": {"first": {"rabi": 1.5, "efficiency": 0.4}},
          "sweep": {"t": [10, 20]}})");
  EXPECT_EQ(y.name, j.name);
  EXPECT_EQ(y.first.rabi, j.first.rabi);
  EXPECT_EQ(y.first.efficiency, j.first.efficiency);
  EXPECT_EQ(y.sweep.t, j.sweep.t);
}

TEST(Scenario, TypeErrorReportsPosition) {
  try {
    parse_scenario("name: demo\nqubits:\n  first:\n    rabi: fast\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4);
    EXPECT_GT(e.column(), 0);
    EXPECT_NE(std::string(e.what()).find("rabi"), std::string::npos);
  }
}

TEST(Scenario, SyntaxErrorReportsPosition) {
  try {
    parse_scenario("name: demo\nsweep: [1, 2\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_GE(e.line(), 2);
  }
}

TEST(Scenario, UnknownKeyIsRejectedWithLine) {
  try {
    parse_scenario("name: demo\nqubits:\n  first: {rabi: 1}\nswep:\n  x: [1]\n");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("swep"), std::string::npos);
    EXPECT_NE(what.find("line 4"), std::string::npos);
  }
}

TEST(Scenario, DegenerateGridsAreRejected) {
  EXPECT_THROW(parse_scenario("sweep:\n  x: []\n"), ValidationError);
  EXPECT_THROW(parse_scenario("sweep:\n  t: [10, 5]\n"), ValidationError);
  EXPECT_THROW(parse_scenario("sweep:\n  t: [0]\n"), ValidationError);
  EXPECT_THROW(parse_scenario("sweep:\n  x: {from: 1, to: 2, count: 0}\n"), ValidationError);
}

TEST(Scenario, UnknownPresetAndMethodAreRejected) {
  EXPECT_THROW(parse_scenario("preset: warp_core\n"), ValidationError);
  EXPECT_THROW(parse_scenario("protocol: {method: bayes}\n"), ValidationError);
  EXPECT_THROW(parse_scenario(""), ParseError);
}

TEST(Scenario, RemovedShifterBreaksNetwork) {
  EXPECT_THROW(parse_scenario("network: {remove: [PS-c]}\n"), LaserLeakage);
}

TEST(Scenario, ShippedPresetFilesMatchBuiltins) {
  for (const std::string& name : builtin_preset_names()) {
    const ExperimentPreset file = load_preset(kSource / "presets" / (name + ".yaml"));
    const ExperimentPreset builtin = builtin_preset(name);
    EXPECT_EQ(file.t1_s, builtin.t1_s) << name;
    EXPECT_EQ(file.efficiency(), builtin.efficiency()) << name;
    EXPECT_EQ(file.coherence_time_s, builtin.coherence_time_s) << name;
    EXPECT_EQ(file.t1_placeholder, builtin.t1_placeholder) << name;
  }
  EXPECT_THROW(load_preset(kSource / "presets" / "missing.yaml"), IoError);
}

TEST(Csv, NumberFormatting) {
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.3333333333");
}

TEST(Csv, TableLayout) {
  CsvTable t("demo v1", {"a", "b"});
  t.add_row({1.0, std::nullopt});
  t.add_row({2.5, std::numeric_limits<double>::quiet_NaN()});
  EXPECT_EQ(t.str(), "# demo v1\na,b\n1,\n2.5,\n");
  EXPECT_THROW(t.add_row({1.0}), ValidationError);
}

TEST(Csv, AtomicWriteFailsCleanly) {
  const fs::path dir = scratch("atomic");
  write_file_atomic(dir / "x.txt", "hello");
  EXPECT_EQ(slurp(dir / "x.txt"), "hello");
  EXPECT_FALSE(fs::exists(dir / "x.txt.tmp"));
  EXPECT_THROW(write_file_atomic(dir / "x.txt" / "y.txt", "nope"), IoError);
}

class FigureGolden : public ::testing::Test {
 protected:
  static Scenario scenario() { return load_scenario(kSource / "scenarios" / "figures.scenario"); }
};

TEST_F(FigureGolden, HeadersAndRowCounts) {
  const Scenario s = scenario();
  const std::size_t nx = s.sweep.x.size(), nt = s.sweep.t.size();
  struct Golden {
    Figure fig;
    const char* schema;
    const char* header;
    std::size_t rows;
  };
  const Golden golden[] = {
      {Figure::fig2, "# mpent.fig2 v1", "x,t_over_t1,n_e,n_mm,n_pp", nx * nt},
      {Figure::fig3, "# mpent.fig3 v1", "x,t_over_t1,n_e,sd_e,n_mm,sd_mm,n_pp,sd_pp,ratio_mm_e",
       nx * nt},
      {Figure::fig4, "# mpent.fig4 v1", "x,sd_e,sd_mm,poisson_sd_e,poisson_sd_mm,q_e,q_mm", nx},
  };
  for (const Golden& g : golden) {
    const auto text = lines(make_figure(g.fig, s).str());
    ASSERT_GE(text.size(), 2u);
    EXPECT_EQ(text[0], g.schema);
    EXPECT_EQ(text[1], g.header);
    EXPECT_EQ(text.size() - 2, g.rows) << to_string(g.fig);
  }
  EXPECT_EQ(nx, 15u);
  EXPECT_EQ(nt, 6u);
}

TEST_F(FigureGolden, FigureClaims) {
  const Scenario s = scenario();
  // fig2: the undriven row is dark.
  for (const std::string& row : lines(make_figure(Figure::fig2, s).str()))
    if (row.rfind("0,", 0) == 0) EXPECT_EQ(row.substr(row.find(',', 2)), ",0,0,0");
  // fig4: the last row is x = 20; q_mm is the last column.
  const auto fig4 = lines(make_figure(Figure::fig4, s).str());
  const std::string& last = fig4.back();
  EXPECT_EQ(last.substr(0, 3), "20,");
  EXPECT_NEAR(std::stod(last.substr(last.rfind(',') + 1)), 1.0 / 6.0, 0.02);
  // fig3: ratio column at x = 20, latest time.
  const auto fig3 = lines(make_figure(Figure::fig3, s).str());
  const std::string& r3 = fig3.back();
  EXPECT_EQ(r3.substr(0, 3), "20,");
  EXPECT_NEAR(std::stod(r3.substr(r3.rfind(',') + 1)), 2.0, 0.02);
}

TEST_F(FigureGolden, RerunsAreByteIdentical) {
  const Scenario s = scenario();
  const fs::path a = scratch("fig_a"), b = scratch("fig_b");
  for (Figure f : {Figure::fig2, Figure::fig3, Figure::fig4}) {
    const fs::path pa = run_figure(f, s, a);
    const fs::path pb = run_figure(f, s, b);
    EXPECT_EQ(slurp(pa), slurp(pb)) << to_string(f);
  }
}

TEST(Report, ShippedScenariosReportEntanglementTimes) {
  const ScenarioReport ion = run_scenario(kSource / "scenarios" / "trapped_ion.scenario");
  EXPECT_TRUE(ion.passed());
  const double ms = ion.json.at("avg_entanglement_time_ms").get<double>();
  EXPECT_GE(ms, 1.26);
  EXPECT_LE(ms, 1.54);
  const ScenarioReport dot = run_scenario(kSource / "scenarios" / "quantum_dot.scenario");
  EXPECT_TRUE(dot.passed());
  const double us = dot.json.at("avg_entanglement_time_us").get<double>();
  EXPECT_GE(us, 4.7);
  EXPECT_LE(us, 5.7);
}

TEST(Report, TrajectoryBlockIsReproducible) {
  const fs::path path = kSource / "scenarios" / "trajectory_check.json";
  Scenario s = load_scenario(path);
  s.trajectories.n_traj = 500;
  const ScenarioReport a = run_scenario(s);
  const ScenarioReport b = run_scenario(s);
  EXPECT_EQ(a.json.dump(), b.json.dump());
  ASSERT_TRUE(a.json.contains("trajectory_validation"));
  const fs::path da = scratch("rep_a"), db = scratch("rep_b");
  EXPECT_EQ(slurp(write_report(a, s, da)), slurp(write_report(b, s, db)));
}

TEST(Report, SingleTrajectoryFailsCrossChecks) {
  Scenario s = load_scenario(kSource / "scenarios" / "trajectory_check.json");
  s.trajectories.n_traj = 1;
  const ScenarioReport r = run_scenario(s);
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.failures().empty());
  EXPECT_THROW(require_cross_checks(r), CrossCheckFailure);
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    if (std::string(MPENT_CLI).empty()) GTEST_SKIP() << "command-line tool not built";
  }
  static int run(const std::string& args) {
    const std::string cmd = std::string(MPENT_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  static std::string scenario(const std::string& name) {
    return (kSource / "scenarios" / name).string();
  }
};

TEST_F(Cli, SuccessfulRun) {
  const fs::path out = scratch("cli_ok");
  EXPECT_EQ(run("run --scenario " + scenario("trapped_ion.scenario") + " --out " + out.string()),
            0);
  std::ifstream in(out / "report.json");
  const nlohmann::json j = nlohmann::json::parse(in);
  EXPECT_TRUE(j.at("passed").get<bool>());
}

TEST_F(Cli, FlagsOverrideScenario) {
  const fs::path out = scratch("cli_flags");
  ASSERT_EQ(run("run --scenario " + scenario("trapped_ion.scenario") + " --out " + out.string() +
                " --kappa 200 --method poisson"),
            0);
  std::ifstream in(out / "report.json");
  const nlohmann::json j = nlohmann::json::parse(in);
  EXPECT_EQ(j.at("classification").at("kappa").get<double>(), 200.0);
  EXPECT_EQ(j.at("classification").at("result").at("method").get<std::string>(), "poisson");
}

TEST_F(Cli, FigureCommandWritesCsv) {
  const fs::path out = scratch("cli_fig");
  EXPECT_EQ(run("figure --figure fig2 --scenario " + scenario("figures.scenario") + " --out " +
                out.string()),
            0);
  EXPECT_TRUE(fs::exists(out / "fig2.csv"));
  EXPECT_EQ(run("figure --figure fig9 --scenario " + scenario("figures.scenario") + " --out " +
                out.string()),
            1);
}

TEST_F(Cli, ValidationExitCode) {
  const fs::path dir = scratch("cli_bad");
  std::ofstream(dir / "bad.scenario") << "sweep:\n  x: []\n";
  EXPECT_EQ(run("run --scenario " + (dir / "bad.scenario").string()), 1);
  EXPECT_EQ(run("run --scenario " + scenario("trapped_ion.scenario") + " --method bayes"), 1);
  EXPECT_EQ(run("run --bogus-flag"), 1);
}

TEST_F(Cli, CrossCheckExitCode) {
  const fs::path out = scratch("cli_xc");
  EXPECT_EQ(run("run --scenario " + scenario("trajectory_check.json") + " --n-traj 1 --out " +
                out.string()),
            2);
  // The report is still written for inspection.
  EXPECT_TRUE(fs::exists(out / "report.json"));
}

TEST_F(Cli, IoExitCode) {
  EXPECT_EQ(run("run --scenario /nonexistent/x.scenario"), 3);
  const fs::path dir = scratch("cli_io");
  std::ofstream(dir / "file") << "x";
  EXPECT_EQ(run("run --scenario " + scenario("trapped_ion.scenario") + " --out " +
                (dir / "file" / "sub").string()),
            3);
}

TEST_F(Cli, Calibrate) { EXPECT_EQ(run("calibrate --x 3 --target 0.9"), 0); }

}  // namespace
}  // namespace mpent
