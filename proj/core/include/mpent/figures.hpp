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

#pragma once

// Figure tables. Every time is t / T1 of qubit 1; E denotes the PM state.
//
//   fig2: x, t_over_t1, n_e, n_mm, n_pp            (eta = 1)
//   fig3: x, t_over_t1, n_e, sd_e, n_mm, sd_mm, n_pp, sd_pp, ratio_mm_e
//   fig4: x, sd_e, sd_mm, poisson_sd_e, poisson_sd_mm, q_e, q_mm
//         (eta = 1, t = Scenario::fig4_t)

#include <filesystem>
#include <string_view>

#include "mpent/csv.hpp"
#include "mpent/scenario.hpp"

namespace mpent {

enum class Figure { fig2, fig3, fig4 };

std::string_view to_string(Figure figure);
Figure parse_figure(std::string_view text);

/// Schema tag written on the first line of the CSV, e.g. "mpent.fig2 v1".
std::string figure_schema(Figure figure);

CsvTable make_figure(Figure figure, const Scenario& scenario);

/// Writes <out_dir>/<figure>.csv atomically and returns its path.
std::filesystem::path run_figure(Figure figure, const Scenario& scenario,
                                 const std::filesystem::path& out_dir);

}  // namespace mpent
