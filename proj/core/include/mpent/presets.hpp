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

#include <string>
#include <string_view>
#include <vector>

namespace mpent {

/// Experimental platform numbers used for entanglement-time estimates.
struct ExperimentPreset {
  std::string name;
  double t1_s = 0.0;  ///< excited-state lifetime, seconds
  double collection_eff = 0.0;
  double detection_eff = 0.0;
  double coherence_time_s = 0.0;  ///< qubit coherence time, seconds
  /// Set when the value is a typical figure for the platform rather than
  /// a measured input of the estimate.
  bool t1_placeholder = false;
  bool coherence_placeholder = true;
  std::string note;

  double efficiency() const { return collection_eff * detection_eff; }
  /// All values positive and efficiency in (0, 1].
  void validate() const;
};

/// "trapped_ion", "quantum_dot" or "nv_center". Throws ValidationError for
/// other names.
ExperimentPreset builtin_preset(std::string_view name);

std::vector<std::string> builtin_preset_names();

}  // namespace mpent
