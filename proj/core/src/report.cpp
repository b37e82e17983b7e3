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

#include "mpent/report.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mpent/csv.hpp"
#include "mpent/errors.hpp"
#include "mpent/trajectories.hpp"

namespace mpent {
namespace {

using nlohmann::json;

json params_json(const DriveParams& p) {
  return {{"rabi", p.rabi},
          {"t1", p.t1},
          {"efficiency", p.efficiency},
          {"background_rate", p.background_rate},
          {"dephasing", p.dephasing}};
}

json stats_json(const CountingStats& s) {
  json j = {{"state", std::string(to_string(s.state))},
            {"mean", s.mean},
            {"variance", s.variance},
            {"sd", s.sd()}};
  j["q"] = s.q ? json(*s.q) : json(nullptr);
  return j;
}

json classification_json(const ClassificationReport& r) {
  return {{"method", std::string(to_string(r.method))},
          {"threshold", r.threshold},
          {"error_e", r.error_e},
          {"error_mm", r.error_mm},
          {"confidence", r.confidence},
          {"confidence_std_error", r.confidence_std_error},
          {"pp_cutoff", r.pp_cutoff},
          {"error_pp", r.error_pp},
          {"acceptance", r.acceptance},
          {"p_success", r.p_success},
          {"fidelity_without_pp", r.fidelity_without_pp},
          {"fidelity_with_pp", r.fidelity_with_pp}};
}

CrossCheck deterministic_check(std::string name, double expected, double observed,
                               double tolerance) {
  CrossCheck c;
  c.name = std::move(name);
  c.expected = expected;
  c.observed = observed;
  c.tolerance = tolerance;
  c.passed = std::abs(observed - expected) <= tolerance;
  return c;
}

CrossCheck statistical_check(std::string name, double expected, const Estimate& observed) {
  CrossCheck c;
  c.name = std::move(name);
  c.expected = expected;
  c.observed = observed.value;
  c.std_error = observed.std_error;
  c.tolerance = 3.0 * observed.std_error;
  c.passed = std::abs(observed.value - expected) <= c.tolerance;
  return c;
}

double bloch_path_difference(const DriveParams& p) {
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(0.5 * i * p.t1);
  const auto exact = evolve_bloch(p, BlochState::ground(), grid);
  const auto rk = evolve_bloch_adaptive(p, BlochState::ground(), grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    worst = std::max({worst, std::abs(exact[i].p_e - rk[i].p_e), std::abs(exact[i].coh - rk[i].coh)});
  return worst;
}

bool same_qubits(const DriveParams& a, const DriveParams& b) {
  return a.rabi == b.rabi && a.t1 == b.t1 && a.efficiency == b.efficiency &&
         a.background_rate == b.background_rate && a.dephasing == b.dephasing;
}

}  // namespace

void to_json(nlohmann::json& j, const CrossCheck& c) {
  j = {{"name", c.name},         {"passed", c.passed},       {"expected", c.expected},
       {"observed", c.observed}, {"tolerance", c.tolerance}, {"std_error", c.std_error}};
}

bool ScenarioReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CrossCheck& c) { return c.passed; });
}

nlohmann::json ScenarioReport::failures() const {
  nlohmann::json out = nlohmann::json::array();
  for (const CrossCheck& c : checks)
    if (!c.passed) out.push_back(c);
  return out;
}

ScenarioReport run_scenario(const Scenario& s) {
  s.validate();
  const ModeNetwork network = s.network();
  const DetectionModel model = build_network(network, s.first.efficiency, s.first.t1);
  const double t1 = s.first.t1;
  const double eta = s.first.efficiency;

  ScenarioReport out;
  json& r = out.json;
  r["schema"] = "mpent.report v1";
  r["name"] = s.name;
  r["qubits"] = {{"first", params_json(s.first)}, {"second", params_json(s.second)}};
  r["network"] = {{"removed_shifters", s.removed_shifters},
                  {"amp_first", {model.amp[0].real(), model.amp[0].imag()}},
                  {"amp_second", {model.amp[1].real(), model.amp[1].imag()}},
                  {"laser_at_d", std::abs(model.laser_amp_at_d)}};

  // Counting table over the sweep.
  json table = json::array();
  for (double x : s.sweep.x) {
    DriveParams a = s.first, b = s.second;
    a.rabi = b.rabi = x;
    for (JointSpinState st : kJointSpinStates) {
      const CountingSeries series(st, a, b, model, s.sweep.t.back() * t1, s.quadrature);
      for (double t : s.sweep.t) {
        json row = stats_json(series.stats_at(t * t1));
        row["x"] = x;
        row["t_over_t1"] = t;
        table.push_back(std::move(row));
      }
    }
  }
  r["counting"] = std::move(table);

  // Classification at eta t / T1 = kappa.
  const double t_herald = s.protocol.kappa * t1 / eta;
  const CountingStats e = counting_stats(JointSpinState::PM, s.first, s.second, t_herald, model,
                                         s.quadrature);
  const CountingStats mm = counting_stats(JointSpinState::MM, s.first, s.second, t_herald, model,
                                          s.quadrature);
  const CountingStats pp = counting_stats(JointSpinState::PP, s.first, s.second, t_herald, model,
                                          s.quadrature);
  json cls = {{"kappa", s.protocol.kappa},
              {"efficiency", eta},
              {"t_over_t1", t_herald / t1},
              {"target", s.protocol.target},
              {"e", stats_json(e)},
              {"mm", stats_json(mm)},
              {"pp", stats_json(pp)}};
  try {
    ClassificationReport c;
    if (s.protocol.method == ClassifyMethod::empirical) {
      TrajectoryOptions o;
      o.n_traj = s.trajectories.n_traj;
      o.seed = s.trajectories.seed;
      auto counts = [&](JointSpinState st, std::uint64_t k) {
        o.seed = trajectory_seed(s.trajectories.seed, k);
        return simulate(st, s.first, s.second, model, t_herald, o).d_counts();
      };
      c = classify_empirical(counts(JointSpinState::PM, 1), counts(JointSpinState::MM, 3),
                             counts(JointSpinState::PP, 0));
    } else {
      c = classify(e, mm, pp, s.protocol.method);
    }
    cls["result"] = classification_json(c);
    cls["meets_target"] = c.confidence >= s.protocol.target;
  } catch (const Indistinguishable& ex) {
    cls["result"] = nullptr;
    cls["indistinguishable"] = ex.what();
    cls["meets_target"] = false;
  }
  r["classification"] = std::move(cls);
  r["ideal_success_probability"] = ideal_success_probability();

  // Entanglement time.
  json et = {{"kappa", s.protocol.kappa}};
  const double eta_time = s.preset ? s.preset->efficiency() : eta;
  et["efficiency"] = eta_time;
  et["half_cycle_t1"] = s.protocol.kappa / eta_time;
  et["in_t1"] = 4.0 * s.protocol.kappa / eta_time;
  r["avg_entanglement_time_t1"] = 4.0 * s.protocol.kappa / eta_time;
  if (s.preset) {
    const EntanglementTime time = avg_entanglement_time(*s.preset, s.protocol.kappa);
    et["preset"] = {{"name", s.preset->name},
                    {"t1_s", s.preset->t1_s},
                    {"collection_eff", s.preset->collection_eff},
                    {"detection_eff", s.preset->detection_eff},
                    {"coherence_time_s", s.preset->coherence_time_s},
                    {"t1_placeholder", s.preset->t1_placeholder},
                    {"coherence_placeholder", s.preset->coherence_placeholder},
                    {"note", s.preset->note}};
    et["seconds"] = time.seconds;
    et["coherence_ratio"] = time.coherence_ratio;
    r["avg_entanglement_time_ms"] = time.seconds * 1e3;
    r["avg_entanglement_time_us"] = time.seconds * 1e6;
    r["avg_entanglement_time_ns"] = time.seconds * 1e9;
  }
  r["entanglement_time"] = std::move(et);

  // Mismatch tolerance at the herald time.
  const MismatchReport mis = mismatch_analysis(s.first, s.second, t_herald, model, s.quadrature);
  r["mismatch"] = {{"t_over_t1", t_herald / t1},
                   {"mean_pp", mis.mean_pp},
                   {"mean_pm", mis.mean_pm},
                   {"mean_mp", mis.mean_mp},
                   {"mean_mm", mis.mean_mm},
                   {"sd_pm", mis.sd_pm},
                   {"sd_mp", mis.sd_mp},
                   {"difference", mis.difference},
                   {"allowed", mis.allowed},
                   {"coherent", mis.coherent},
                   {"large_field", mis.large_field},
                   {"tolerable_t1_ratio", mis.tolerable_t1_ratio},
                   {"tolerable_t1_discrepancy", mis.tolerable_t1_discrepancy},
                   {"tolerable_rate_discrepancy", mis.tolerable_rate_discrepancy}};

  // Internal cross-checks.
  out.checks.push_back(
      deterministic_check("network.laser_at_d", 0.0, std::abs(model.laser_amp_at_d), 1e-10));
  out.checks.push_back(
      deterministic_check("bloch.first.propagator_vs_rk45", 0.0, bloch_path_difference(s.first), 1e-7));
  out.checks.push_back(
      deterministic_check("bloch.second.propagator_vs_rk45", 0.0, bloch_path_difference(s.second), 1e-7));
  if (same_qubits(s.first, s.second) && s.first.background_rate == 0.0 &&
      s.first.dephasing == 0.0) {
    const double t_long = 500.0 * t1;
    for (JointSpinState st : {JointSpinState::PM, JointSpinState::MM}) {
      const double lt = mean_longtime(st, s.first.rabi, eta, 500.0);
      const double m = mean_general(st, s.first, s.second, t_long, model, s.quadrature);
      out.checks.push_back(deterministic_check(
          "counting.longtime_mean." + std::string(to_string(st)), lt, m, 0.01 * lt));
    }
  }

  if (s.trajectories.enabled) {
    DriveParams a = s.first, b = s.second;
    if (s.trajectories.efficiency) a.efficiency = b.efficiency = *s.trajectories.efficiency;
    const DetectionModel tmodel = build_network(network, a.efficiency, a.t1);
    const double t = s.trajectories.t * t1;
    json block = {{"n_traj", s.trajectories.n_traj},
                  {"seed", s.trajectories.seed},
                  {"t_over_t1", s.trajectories.t},
                  {"efficiency", a.efficiency}};
    json states = json::object();
    std::uint64_t k = 0;
    for (JointSpinState st : {JointSpinState::PM, JointSpinState::MM}) {
      const CountingStats det = counting_stats(st, a, b, t, tmodel, s.quadrature);
      TrajectoryOptions o;
      o.n_traj = s.trajectories.n_traj;
      o.seed = trajectory_seed(s.trajectories.seed, ++k);
      const TrajectoryEnsemble ens = simulate(st, a, b, tmodel, t, o);
      const EmpiricalDistribution d = empirical_distribution(ens.d_counts(), 1000, o.seed);
      const std::string prefix = "trajectory." + std::string(to_string(st)) + ".";
      out.checks.push_back(statistical_check(prefix + "mean", det.mean, d.mean));
      out.checks.push_back(statistical_check(prefix + "variance", det.variance, d.variance));
      if (det.q && d.q) out.checks.push_back(statistical_check(prefix + "q", *det.q, *d.q));
      states[std::string(to_string(st))] = {
          {"deterministic", stats_json(det)},
          {"empirical",
           {{"mean", d.mean.value},
            {"mean_std_error", d.mean.std_error},
            {"variance", d.variance.value},
            {"variance_std_error", d.variance.std_error},
            {"q", d.q ? json(d.q->value) : json(nullptr)},
            {"q_std_error", d.q ? json(d.q->std_error) : json(nullptr)}}}};
    }
    block["states"] = std::move(states);
    r["trajectory_validation"] = std::move(block);
  }

  r["cross_checks"] = out.checks;
  r["passed"] = out.passed();
  return out;
}

ScenarioReport run_scenario(const std::filesystem::path& path) {
  return run_scenario(load_scenario(path));
}

std::filesystem::path write_report(const ScenarioReport& report, const Scenario& scenario,
                                   const std::filesystem::path& out_dir) {
  const std::filesystem::path dir = out_dir.empty() ? scenario.output.dir : out_dir;
  const std::filesystem::path path = dir / scenario.output.report;
  write_file_atomic(path, report.json.dump(2) + "\n");
  return path;
}

void require_cross_checks(const ScenarioReport& report) {
  if (!report.passed()) throw CrossCheckFailure(report.failures().dump());
}

}  // namespace mpent
