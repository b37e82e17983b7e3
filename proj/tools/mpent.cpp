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

// mpent: figure tables and scenario reports from the command line.
//
//   mpent run --scenario scenarios/trapped_ion.scenario --out out
//   mpent figure --figure fig4 --scenario scenarios/figures.scenario
//   mpent calibrate --x 3 --target 0.9
//
// Exit codes: 0 success, 1 validation, 2 cross-check failure, 3 I/O.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mpent/errors.hpp"
#include "mpent/figures.hpp"
#include "mpent/protocol.hpp"
#include "mpent/report.hpp"
#include "mpent/scenario.hpp"

namespace {

enum Exit { kOk = 0, kValidation = 1, kCrossCheck = 2, kIo = 3 };

struct Overrides {
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_traj;
  std::string method;
  std::optional<double> kappa;
};

void apply(const Overrides& o, mpent::Scenario& s) {
  if (!o.out.empty()) s.output.dir = o.out;
  if (o.seed) s.trajectories.seed = *o.seed;
  if (o.n_traj) s.trajectories.n_traj = *o.n_traj;
  if (!o.method.empty()) s.protocol.method = mpent::parse_classify_method(o.method);
  if (o.kappa) s.protocol.kappa = *o.kappa;
  s.validate();
}

int run(const std::string& scenario_path, const Overrides& o) {
  mpent::Scenario s = mpent::load_scenario(scenario_path);
  apply(o, s);
  const mpent::ScenarioReport report = mpent::run_scenario(s);
  const auto path = mpent::write_report(report, s);
  std::cout << "wrote " << path.string() << "\n";
  const auto& cls = report.json["classification"];
  if (!cls["result"].is_null())
    std::cout << "confidence " << cls["result"]["confidence"].get<double>() << " ("
              << cls["result"]["method"].get<std::string>() << ", kappa " << s.protocol.kappa
              << ")\n";
  if (report.json.contains("avg_entanglement_time_ms"))
    std::cout << "avg entanglement time " << report.json["avg_entanglement_time_ms"].get<double>()
              << " ms\n";
  mpent::require_cross_checks(report);
  return kOk;
}

int figure(const std::string& which, const std::string& scenario_path, const Overrides& o) {
  mpent::Scenario s = mpent::load_scenario(scenario_path);
  apply(o, s);
  const auto path = mpent::run_figure(mpent::parse_figure(which), s, s.output.dir);
  std::cout << "wrote " << path.string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiphoton fluorescence entanglement: counting statistics and heralding"};
  app.require_subcommand(1);

  Overrides o;
  std::string scenario_path;
  auto add_overrides = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", scenario_path, "Scenario file (YAML or JSON)")
        ->required();
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--seed", o.seed, "Trajectory seed");
    cmd->add_option("--n-traj", o.n_traj, "Trajectories per state")->check(CLI::PositiveNumber);
    cmd->add_option("--method", o.method, "gaussian, poisson or empirical");
    cmd->add_option("--kappa", o.kappa, "eta t / T1 at the herald")->check(CLI::PositiveNumber);
  };

  CLI::App* run_cmd = app.add_subcommand("run", "Run the full scenario pipeline");
  add_overrides(run_cmd);

  std::string which;
  CLI::App* fig_cmd = app.add_subcommand("figure", "Write a figure table as CSV");
  fig_cmd->add_option("--figure", which, "fig2, fig3 or fig4")->required();
  add_overrides(fig_cmd);

  double x = 3.0, target = 0.9, eta = 1.0;
  std::string cal_method = "gaussian";
  CLI::App* cal_cmd = app.add_subcommand("calibrate", "Smallest eta t / T1 reaching a confidence");
  cal_cmd->add_option("--x", x, "Drive x = Omega T1")->check(CLI::NonNegativeNumber);
  cal_cmd->add_option("--target", target, "Target confidence")->check(CLI::Range(0.0, 1.0));
  cal_cmd->add_option("--efficiency", eta, "Detection efficiency")->check(CLI::Range(0.0, 1.0));
  cal_cmd->add_option("--method", cal_method, "gaussian or poisson");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*run_cmd) return run(scenario_path, o);
    if (*fig_cmd) return figure(which, scenario_path, o);
    mpent::CalibrationOptions opts;
    opts.method = mpent::parse_classify_method(cal_method);
    opts.target = target;
    std::cout << mpent::calibrate_kappa(x, eta, opts) << "\n";
    return kOk;
  } catch (const mpent::CrossCheckFailure& e) {
    std::cerr << "cross-check failure: " << e.what() << "\n";
    return kCrossCheck;
  } catch (const mpent::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const mpent::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
}
