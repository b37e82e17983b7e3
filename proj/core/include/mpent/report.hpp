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

// Full scenario pipeline: counting table over the sweep, classification at
// eta t / T1 = kappa, entanglement time, mismatch tolerance, optional
// trajectory validation, and internal cross-checks.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mpent/scenario.hpp"

namespace mpent {

struct CrossCheck {
  std::string name;
  bool passed = false;
  double expected = 0.0;
  double observed = 0.0;
  /// Allowed |observed - expected|.
  double tolerance = 0.0;
  /// Standard error of the observed value; 0 for deterministic checks.
  double std_error = 0.0;
};

void to_json(nlohmann::json& j, const CrossCheck& c);

struct ScenarioReport {
  nlohmann::json json;
  std::vector<CrossCheck> checks;

  bool passed() const;
  /// Failing checks only, as a JSON array.
  nlohmann::json failures() const;
};

ScenarioReport run_scenario(const Scenario& scenario);
ScenarioReport run_scenario(const std::filesystem::path& path);

/// Writes <output.dir>/<output.report> (or into out_dir when given) and
/// returns the path.
std::filesystem::path write_report(const ScenarioReport& report, const Scenario& scenario,
                                   const std::filesystem::path& out_dir = {});

/// Throws CrossCheckFailure carrying failures().dump() when any check failed.
void require_cross_checks(const ScenarioReport& report);

}  // namespace mpent
