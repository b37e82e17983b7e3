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

// Scenario files: YAML (JSON is accepted as well, being a subset).
//
//   name: trapped_ion
//   preset: trapped_ion              # builtin name, {file: path} or a table
//   qubits:
//     first:  {rabi: 10, t1: 1, efficiency: 0.003}
//     second: {rabi: 10}             # missing fields copy `first`
//   network: {remove: []}            # phase-shifter labels to drop
//   sweep:
//     x: [0.5, 1, 3, 10]             # or {from: 0.1, to: 20, count: 40, spacing: log}
//     t: [100, 1000]                 # t / T1 of qubit 1
//   figures: {fig4_t: 1000}
//   protocol: {kappa: 130, target: 0.9, method: gaussian}
//   trajectories: {enabled: true, n_traj: 10000, seed: 1, t: 200, efficiency: 1}
//   quadrature: {dt: 0.05}
//   output: {dir: out, report: report.json}
//
// Unknown keys are rejected with their line number.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mpent/counting.hpp"
#include "mpent/dynamics.hpp"
#include "mpent/network.hpp"
#include "mpent/presets.hpp"
#include "mpent/protocol.hpp"

namespace mpent {

struct SweepSpec {
  std::vector<double> x;  ///< drive x, applied to both qubits
  std::vector<double> t;  ///< t / T1
};

struct ProtocolSpec {
  double kappa = kDefaultKappa;  ///< eta t / T1 at the herald
  double target = 0.9;
  ClassifyMethod method = ClassifyMethod::gaussian;
};

struct TrajectorySpec {
  bool enabled = false;
  std::size_t n_traj = 10'000;
  std::uint64_t seed = 1;
  double t = 200.0;  ///< t / T1
  std::optional<double> efficiency;  ///< defaults to the qubits' values
};

struct OutputSpec {
  std::filesystem::path dir = "out";
  std::string report = "report.json";
};

struct Scenario {
  std::string name = "scenario";
  DriveParams first;
  DriveParams second;
  std::vector<std::string> removed_shifters;
  std::optional<ExperimentPreset> preset;
  SweepSpec sweep;
  double fig4_t = 1000.0;
  ProtocolSpec protocol;
  TrajectorySpec trajectories;
  QuadratureOptions quadrature;
  OutputSpec output;

  ModeNetwork network() const;
  /// Throws ValidationError; grids must be non-empty and strictly ascending.
  void validate() const;
};

/// Throws ParseError for malformed text or wrongly typed values and
/// ValidationError for out-of-range values; both carry the line number.
/// Relative preset files resolve against base_dir.
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir = ".");

/// Throws IoError when the file cannot be read.
Scenario load_scenario(const std::filesystem::path& path);

/// Reads a preset table (name, t1_s, collection_eff, detection_eff,
/// coherence_time_s).
ExperimentPreset load_preset(const std::filesystem::path& path);

}  // namespace mpent
