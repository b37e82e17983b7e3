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

#include "mpent/figures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "mpent/errors.hpp"

namespace mpent {
namespace {

// Runs body(i) for i in [0, n) on a small thread pool. Each index writes
// only its own slot, so the result does not depend on scheduling.
template <class F>
void parallel_for(std::size_t n, F&& body) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next.store(n);
      }
    });
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

struct Column {
  std::vector<CountingStats> e, mm, pp;
};

// Counting statistics for the three distinct states at each requested time,
// for drive x on both qubits.
Column column(const Scenario& s, double x, const std::vector<double>& times,
              std::optional<double> efficiency) {
  DriveParams a = s.first, b = s.second;
  a.rabi = b.rabi = x;
  if (efficiency) a.efficiency = b.efficiency = *efficiency;
  const DetectionModel model = build_network(s.network(), a.efficiency, a.t1);
  const double t_max = times.back() * a.t1;
  Column out;
  for (JointSpinState st : {JointSpinState::PM, JointSpinState::MM, JointSpinState::PP}) {
    const CountingSeries series(st, a, b, model, t_max, s.quadrature);
    std::vector<CountingStats>& dst =
        st == JointSpinState::PM ? out.e : (st == JointSpinState::MM ? out.mm : out.pp);
    for (double t : times) dst.push_back(series.stats_at(t * a.t1));
  }
  return out;
}

std::optional<double> ratio(double num, double den) {
  if (den == 0.0) return std::nullopt;
  return num / den;
}

}  // namespace

std::string_view to_string(Figure figure) {
  switch (figure) {
    case Figure::fig2: return "fig2";
    case Figure::fig3: return "fig3";
    case Figure::fig4: return "fig4";
  }
  return "?";
}

Figure parse_figure(std::string_view text) {
  if (text == "fig2") return Figure::fig2;
  if (text == "fig3") return Figure::fig3;
  if (text == "fig4") return Figure::fig4;
  throw ValidationError("unknown figure '" + std::string(text) + "' (expected fig2, fig3, fig4)");
}

std::string figure_schema(Figure figure) { return "mpent." + std::string(to_string(figure)) + " v1"; }

CsvTable make_figure(Figure figure, const Scenario& scenario) {
  scenario.validate();
  const std::vector<double>& xs = scenario.sweep.x;
  const std::vector<double> times =
      figure == Figure::fig4 ? std::vector<double>{scenario.fig4_t} : scenario.sweep.t;
  const std::optional<double> eta =
      figure == Figure::fig3 ? std::nullopt : std::optional<double>(1.0);

  std::vector<Column> cols(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { cols[i] = column(scenario, xs[i], times, eta); });

  switch (figure) {
    case Figure::fig2: {
      CsvTable table(figure_schema(figure), {"x", "t_over_t1", "n_e", "n_mm", "n_pp"});
      for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t k = 0; k < times.size(); ++k)
          table.add_row({xs[i], times[k], cols[i].e[k].mean, cols[i].mm[k].mean,
                         cols[i].pp[k].mean});
      return table;
    }
    case Figure::fig3: {
      CsvTable table(figure_schema(figure), {"x", "t_over_t1", "n_e", "sd_e", "n_mm", "sd_mm",
                                             "n_pp", "sd_pp", "ratio_mm_e"});
      for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t k = 0; k < times.size(); ++k) {
          const CountingStats& e = cols[i].e[k];
          const CountingStats& mm = cols[i].mm[k];
          const CountingStats& pp = cols[i].pp[k];
          table.add_row({xs[i], times[k], e.mean, e.sd(), mm.mean, mm.sd(), pp.mean, pp.sd(),
                         ratio(mm.mean, e.mean)});
        }
      return table;
    }
    case Figure::fig4: {
      CsvTable table(figure_schema(figure), {"x", "sd_e", "sd_mm", "poisson_sd_e",
                                             "poisson_sd_mm", "q_e", "q_mm"});
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const CountingStats& e = cols[i].e[0];
        const CountingStats& mm = cols[i].mm[0];
        table.add_row({xs[i], e.sd(), mm.sd(), std::sqrt(e.mean), std::sqrt(mm.mean), e.q,
                       mm.q});
      }
      return table;
    }
  }
  throw ValidationError("unknown figure");
}

std::filesystem::path run_figure(Figure figure, const Scenario& scenario,
                                 const std::filesystem::path& out_dir) {
  const CsvTable table = make_figure(figure, scenario);
  const std::filesystem::path path = out_dir / (std::string(to_string(figure)) + ".csv");
  write_file_atomic(path, table.str());
  return path;
}

}  // namespace mpent
