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

#include "properties.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "mpent/counting.hpp"
#include "mpent/dynamics.hpp"
#include "mpent/errors.hpp"
#include "mpent/network.hpp"
#include "mpent/trajectories.hpp"

namespace mpent::properties {
namespace {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<>(lo, hi)(rng_); }
  std::uint64_t bits() { return rng_(); }
  JointSpinState state() { return kJointSpinStates[static_cast<std::size_t>(integer(0, 3))]; }

  DriveParams params() {
    DriveParams p;
    p.rabi = log_uniform(0.05, 20.0);
    p.t1 = uniform(1.0, 2.0);
    p.efficiency = uniform(0.05, 1.0);
    return p;
  }

 private:
  std::mt19937_64 rng_;
};

void record(Result& r, bool ok, const std::string& what) {
  ++r.cases;
  if (ok) return;
  if (r.failures++ == 0) r.first_failure = what;
}

bool close(double a, double b, double rel, double abs = 1e-14) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) + abs;
}

std::string describe(JointSpinState st, const DriveParams& a, const DriveParams& b, double t) {
  std::ostringstream ss;
  ss << to_string(st) << " x=(" << a.rabi << "," << b.rabi << ") t1=(" << a.t1 << "," << b.t1
     << ") eta=(" << a.efficiency << "," << b.efficiency << ") t=" << t;
  return ss.str();
}

Eigen::Matrix2cd random_unitary(Draw& d) {
  const double th = d.uniform(0.0, M_PI / 2);
  const double a = d.uniform(0.0, 2 * M_PI), b = d.uniform(0.0, 2 * M_PI);
  const double g = d.uniform(0.0, 2 * M_PI);
  const Complex i(0.0, 1.0);
  Eigen::Matrix2cd u;
  u << std::exp(i * a) * std::cos(th), -std::exp(-i * b) * std::sin(th),
      std::exp(i * b) * std::sin(th), std::exp(-i * a) * std::cos(th);
  return std::exp(i * g) * u;
}

}  // namespace

Result bloch_positivity(std::size_t cases, std::uint64_t seed) {
  Result r{"bloch positivity"};
  Draw d(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    DriveParams p = d.params();
    p.dephasing = d.integer(0, 1) ? d.uniform(0.0, 3.0) : 0.0;
    std::vector<double> grid{0.0};
    const int n = d.integer(5, 40);
    for (int i = 0; i < n; ++i) grid.push_back(grid.back() + d.log_uniform(1e-3, 5.0));
    const auto path = evolve_bloch(p, BlochState::ground(), grid);
    bool ok = true;
    for (const BlochState& s : path) ok = ok && s.is_physical(1e-12);
    record(r, ok, describe(JointSpinState::MM, p, p, grid.back()));
  }
  return r;
}

Result variance_nonnegative(std::size_t cases, std::uint64_t seed) {
  Result r{"variance non-negativity"};
  Draw d(seed);
  const ModeNetwork net = ModeNetwork::standard();
  for (std::size_t c = 0; c < cases; ++c) {
    const JointSpinState st = d.state();
    const DriveParams a = d.params();
    DriveParams b = d.params();
    const double t = d.uniform(0.1, 30.0);
    bool ok = true;
    try {
      const CountingSeries series(st, a, b, build_network(net, a.efficiency, a.t1), t);
      for (std::size_t i = 0; i <= series.steps(); ++i)
        ok = ok && series.variance(i) >= -1e-12 * std::max(1.0, series.mean(i));
    } catch (const NonPositiveVariance&) {
      ok = false;
    }
    record(r, ok, describe(st, a, b, t));
  }
  return r;
}

Result mean_linear_in_efficiency(std::size_t cases, std::uint64_t seed) {
  Result r{"eta-linearity of means"};
  Draw d(seed);
  const ModeNetwork net = ModeNetwork::standard();
  for (std::size_t c = 0; c < cases; ++c) {
    const JointSpinState st = d.state();
    DriveParams a = d.params();
    DriveParams b = d.params();
    a.efficiency = b.efficiency = 1.0;
    const double t = d.uniform(0.1, 30.0);
    const double eta = d.uniform(0.01, 1.0);
    const DetectionModel model = build_network(net);
    const double full = mean_general(st, a, b, t, model);
    a.efficiency = b.efficiency = eta;
    const double scaled = mean_general(st, a, b, t, model);
    record(r, close(scaled, eta * full, 1e-11), describe(st, a, b, t));
  }
  return r;
}

Result label_swap_symmetry(std::size_t cases, std::uint64_t seed) {
  Result r{"label-swap symmetry"};
  Draw d(seed);
  const ModeNetwork net = ModeNetwork::standard();
  const DetectionModel model = build_network(net);
  const DetectionModel swapped = build_network(net.with_qubits_swapped());
  auto mirror = [](JointSpinState s) {
    if (s == JointSpinState::PM) return JointSpinState::MP;
    if (s == JointSpinState::MP) return JointSpinState::PM;
    return s;
  };
  for (std::size_t c = 0; c < cases; ++c) {
    const JointSpinState st = d.state();
    const DriveParams a = d.params();
    const DriveParams b = d.params();
    const double t = d.uniform(0.1, 20.0);
    const CountingStats x = counting_stats(st, a, b, t, model);
    const CountingStats y = counting_stats(mirror(st), b, a, t, swapped);
    record(r, close(x.mean, y.mean, 1e-10) && close(x.variance, y.variance, 1e-9, 1e-12),
           describe(st, a, b, t));
  }
  return r;
}

Result network_unitarity(std::size_t cases, std::uint64_t seed) {
  Result r{"network unitarity"};
  Draw d(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    ModeNetwork net = ModeNetwork::standard();
    for (NetworkElement& e : net.elements) {
      if (e.kind == ElementKind::splitter) e.transfer = random_unitary(d);
      if (e.kind == ElementKind::phase_shifter) e.phase = d.uniform(0.0, 2 * M_PI);
    }
    bool ok = true;
    std::string what = "random unitary splitters";
    try {
      net.validate();
      // Total laser power over the terminal modes is conserved.
      const Complex laser = std::polar(d.uniform(0.1, 3.0), d.uniform(0.0, 2 * M_PI));
      const auto modes = net.propagate(laser);
      double power = 0.0;
      for (const std::string& m : net.terminal_modes()) power += std::norm(modes.at(m).laser);
      ok = close(power, std::norm(laser), 1e-12);
      // A perturbed splitter must be rejected.
      ModeNetwork bad = net;
      for (NetworkElement& e : bad.elements)
        if (e.kind == ElementKind::splitter) {
          e.transfer(0, 0) *= 1.0 + d.uniform(1e-6, 0.5);
          break;
        }
      try {
        bad.validate();
        ok = false;
        what = "non-unitary splitter accepted";
      } catch (const NonUnitarySplitter&) {
      }
    } catch (const Error& e) {
      ok = false;
      what = e.what();
    }
    record(r, ok, what);
  }
  return r;
}

Result laser_cancellation(std::size_t cases, std::uint64_t seed) {
  Result r{"laser cancellation"};
  Draw d(seed);
  const ModeNetwork net = ModeNetwork::standard();
  for (std::size_t c = 0; c < cases; ++c) {
    const Complex laser = std::polar(d.log_uniform(1e-3, 1e3), d.uniform(0.0, 2 * M_PI));
    const auto modes = net.propagate(laser);
    const ModeAmplitude& at_d = modes.at(net.detector);
    const bool ok = std::abs(at_d.laser) <= 1e-10 * std::abs(laser) &&
                    close(std::abs(at_d.fluorescence[0]), 0.5, 1e-12) &&
                    close(std::abs(at_d.fluorescence[1]), 0.5, 1e-12);
    record(r, ok, "laser amplitude " + std::to_string(std::abs(laser)));
  }
  return r;
}

Result seed_determinism(std::size_t cases, std::uint64_t seed) {
  Result r{"seed determinism"};
  Draw d(seed);
  const DetectionModel model = build_network(ModeNetwork::standard());
  for (std::size_t c = 0; c < cases; ++c) {
    const JointSpinState st = d.state();
    const DriveParams a = d.params();
    const DriveParams b = d.params();
    const double t = d.uniform(1.0, 10.0);
    TrajectoryOptions o;
    o.n_traj = static_cast<std::size_t>(d.integer(1, 600));
    o.seed = d.bits();
    o.threads = 1;
    const TrajectoryEnsemble x = simulate(st, a, b, model, t, o);
    o.threads = 3;
    const TrajectoryEnsemble y = simulate(st, a, b, model, t, o);
    bool ok = x.records.size() == y.records.size();
    for (std::size_t i = 0; ok && i < x.records.size(); ++i)
      ok = x.records[i].d_count == y.records[i].d_count &&
           x.records[i].b_count == y.records[i].b_count &&
           x.records[i].loss_count == y.records[i].loss_count;
    record(r, ok, describe(st, a, b, t) + " seed=" + std::to_string(o.seed));
  }
  return r;
}

std::vector<Result> run_all(std::size_t cases, std::uint64_t seed) {
  return {bloch_positivity(cases, seed),          variance_nonnegative(cases, seed + 1),
          mean_linear_in_efficiency(cases, seed + 2), label_swap_symmetry(cases, seed + 3),
          network_unitarity(cases, seed + 4),     laser_cancellation(cases, seed + 5),
          seed_determinism(cases, seed + 6)};
}

}  // namespace mpent::properties
