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


// Acceptance criteria AC1..AC10. Prints one PASS/FAIL line per criterion.
// Usage: mpent_acceptance [ACn ...]; no argument runs every criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mpent/counting.hpp"
#include "mpent/protocol.hpp"
#include "mpent/trajectories.hpp"
#include "properties.hpp"

namespace {

using mpent::ClassifyMethod;
using mpent::CountingStats;
using mpent::DetectionModel;
using mpent::DriveParams;
using S = mpent::JointSpinState;

struct Outcome {
  bool pass = false;
  std::string detail;
};

DriveParams drive(double x, double eta = 1.0) {
  DriveParams p;
  p.rabi = x;
  p.efficiency = eta;
  return p;
}

DetectionModel model(double eta = 1.0) {
  return mpent::build_network(mpent::ModeNetwork::standard(), eta);
}

std::vector<double> log_grid(double from, double to, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i)
    out.push_back(from * std::pow(to / from, static_cast<double>(i) / (count - 1)));
  out.back() = to;
  return out;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome ac1() {
  double worst = 0.0;
  std::string where;
  for (S st : {S::PM, S::MM})
    for (double x : {0.5, 1.0, 3.0, 10.0})
      for (double eta : {0.1, 1.0}) {
        const DriveParams p = drive(x, eta);
        const double got = mpent::mean_general(st, p, p, 500.0, model(eta));
        const double want = mpent::mean_longtime(st, x, eta, 500.0);
        const double rel = std::abs(got / want - 1.0);
        if (rel > worst) {
          worst = rel;
          std::ostringstream w;
          w << to_string(st) << " x=" << x << " eta=" << eta;
          where = w.str();
        }
      }
  return {worst < 0.01, "max relative deviation " + fmt("%.2e", worst) + " at " + where};
}

Outcome ac2() {
  const double t = 500.0;
  const double e50 = mpent::mean_longtime(S::PM, 50.0, 1.0, t) / (t / 8.0);
  const double mm50 = mpent::mean_longtime(S::MM, 50.0, 1.0, t) / (t / 4.0);
  const DriveParams p3 = drive(3.0);
  const double e3 = mpent::mean_general(S::PM, p3, p3, t, model()) / (t / 8.0);
  const bool pass = std::abs(e50 - 1.0) < 0.005 && std::abs(mm50 - 1.0) < 0.005 && e3 >= 0.90;
  return {pass, "x=50: E " + fmt("%.5f", e50) + ", MM " + fmt("%.5f", mm50) +
                    " of asymptote; x=3: E at " + fmt("%.4f", e3) + " of asymptote"};
}

Outcome ac3() {
  const DriveParams p = drive(20.0);
  const double q = mpent::mandel_q(S::MM, p, p, 1000.0, model());
  return {std::abs(q - 1.0 / 6.0) <= 0.02, "Q_MM(x=20, t=1000) = " + fmt("%.5f", q)};
}

Outcome ac4() {
  double worst = -1.0;
  double at = 0.0;
  for (double x : log_grid(0.1, 20.0, 40)) {
    const DriveParams p = drive(x);
    const double q = mpent::mandel_q(S::PM, p, p, 1000.0, model());
    if (q > worst) {
      worst = q;
      at = x;
    }
  }
  return {worst < 0.0, "max Q_E over 40 points " + fmt("%.3e", worst) + " at x=" + fmt("%.3g", at)};
}

Outcome ac5() {
  int changes = 0;
  double prev = 0.0, crossing = 0.0;
  bool first = true;
  for (double x : log_grid(0.1, 20.0, 60)) {
    const DriveParams p = drive(x);
    const double q = mpent::mandel_q(S::MM, p, p, 1000.0, model());
    if (!first && (q > 0.0) != (prev > 0.0)) {
      ++changes;
      crossing = x;
    }
    prev = q;
    first = false;
  }
  return {changes == 1,
          std::to_string(changes) + " sign change(s) over 60 points, last near x=" +
              fmt("%.3g", crossing)};
}

Outcome ac6() {
  constexpr std::size_t kTraj = 100'000;
  constexpr std::uint64_t kSeed = 6;
  int failures = 0, checks = 0;
  double worst = 0.0;
  std::string where;
  std::uint64_t k = 0;
  for (S st : {S::PM, S::MM})
    for (double x : {1.0, 3.0})
      for (double eta : {0.3, 1.0}) {
        const DriveParams p = drive(x, eta);
        const DetectionModel m = model(eta);
        const CountingStats det = mpent::counting_stats(st, p, p, 200.0, m);
        mpent::TrajectoryOptions o;
        o.n_traj = kTraj;
        o.seed = mpent::trajectory_seed(kSeed, ++k);
        const auto ens = mpent::simulate(st, p, p, m, 200.0, o);
        const auto d = mpent::empirical_distribution(ens.d_counts(), 1000, o.seed);
        const double z[3] = {(d.mean.value - det.mean) / d.mean.std_error,
                             (d.variance.value - det.variance) / d.variance.std_error,
                             (d.q->value - *det.q) / d.q->std_error};
        const char* names[3] = {"mean", "variance", "q"};
        for (int i = 0; i < 3; ++i) {
          ++checks;
          if (std::abs(z[i]) > 3.0) ++failures;
          if (std::abs(z[i]) > worst) {
            worst = std::abs(z[i]);
            std::ostringstream w;
            w << to_string(st) << " x=" << x << " eta=" << eta << " " << names[i];
            where = w.str();
          }
        }
        std::printf("  AC6 %s x=%g eta=%g: mean z=%+.2f var z=%+.2f q z=%+.2f\n",
                    std::string(to_string(st)).c_str(), x, eta, z[0], z[1], z[2]);
      }
  return {failures == 0, std::to_string(checks - failures) + "/" + std::to_string(checks) +
                             " within 3 se; largest |z| " + fmt("%.2f", worst) + " (" + where +
                             ")"};
}

Outcome ac7() {
  const double t = 130.0;
  const DriveParams p = drive(3.0);
  const DetectionModel m = model();
  const auto e = mpent::counting_stats(S::PM, p, p, t, m);
  const auto mm = mpent::counting_stats(S::MM, p, p, t, m);
  const auto pp = mpent::counting_stats(S::PP, p, p, t, m);
  const double gauss = mpent::classify(e, mm, pp, ClassifyMethod::gaussian).confidence;

  mpent::TrajectoryOptions o;
  o.n_traj = 100'000;
  std::vector<std::vector<std::uint32_t>> counts;
  std::uint64_t k = 0;
  for (S st : {S::PM, S::MM, S::PP}) {
    o.seed = mpent::trajectory_seed(7, ++k);
    counts.push_back(mpent::simulate(st, p, p, m, t, o).d_counts());
  }
  const auto emp = mpent::classify_empirical(counts[0], counts[1], counts[2]);
  return {gauss > 0.90 && emp.confidence > 0.90,
          "gaussian " + fmt("%.4f", gauss) + ", empirical " + fmt("%.4f", emp.confidence) +
              " +- " + fmt("%.4f", emp.confidence_std_error) + " (1e5 trajectories per state)"};
}

Outcome ac8() {
  const auto ion = mpent::avg_entanglement_time(mpent::builtin_preset("trapped_ion"));
  const auto dot = mpent::avg_entanglement_time(mpent::builtin_preset("quantum_dot"));
  const double ion_ms = ion.seconds * 1e3, dot_us = dot.seconds * 1e6;
  const bool pass = std::abs(ion.in_t1 / 1.7e5 - 1.0) <= 0.1 &&
                    std::abs(ion_ms / 1.4 - 1.0) <= 0.1 && std::abs(dot_us / 5.2 - 1.0) <= 0.1;
  return {pass, "trapped ion " + fmt("%.4g", ion.in_t1) + " T1 = " + fmt("%.4g", ion_ms) +
                    " ms; quantum dot " + fmt("%.4g", dot_us) + " us"};
}

Outcome ac9() {
  // Large field, eta t / T1 = 130, drive held fixed while T1' varies.
  const DriveParams p = drive(10.0);
  const auto r = mpent::mismatch_analysis(p, p, 130.0, model());
  const double d = r.tolerable_t1_discrepancy;
  return {std::abs(d - 0.10) <= 0.03,
          "boundary at T1 discrepancy " + fmt("%.1f", 100 * d) + "% (rate " +
              fmt("%.1f", 100 * r.tolerable_rate_discrepancy) + "%); target 10 +- 3%"};
}

Outcome ac10() {
  bool ok = true;
  std::string detail;
  for (const auto& r : mpent::properties::run_all(1000, 20261016)) {
    ok = ok && r.ok() && r.cases >= 1000;
    std::printf("  AC10 %-26s cases=%zu failures=%zu%s%s\n", r.name.c_str(), r.cases,
                r.failures, r.first_failure.empty() ? "" : "  first: ",
                r.first_failure.c_str());
    if (!r.ok()) detail += r.name + " ";
  }
  return {ok, ok ? "7 suites, 1000 cases each, zero failures" : "failing: " + detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}};
  std::set<std::string> wanted(argv + 1, argv + argc);
  bool all = true;
  int ran = 0;
  for (const auto& [name, fn] : criteria) {
    if (!wanted.empty() && !wanted.count(name)) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%-5s %s  %s  [%.1f s]\n", name.c_str(), o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && o.pass;
  }
  if (ran == 0) {
    std::fprintf(stderr, "unknown criterion\n");
    return EXIT_FAILURE;
  }
  return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
