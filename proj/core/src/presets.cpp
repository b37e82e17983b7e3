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

#include "mpent/presets.hpp"

#include <cmath>
#include <string>

#include "mpent/errors.hpp"

namespace mpent {

void ExperimentPreset::validate() const {
  auto positive = [&](double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ValidationError("preset '" + name + "': " + field + " must be positive");
  };
  positive(t1_s, "t1_s");
  positive(collection_eff, "collection_eff");
  positive(detection_eff, "detection_eff");
  positive(coherence_time_s, "coherence_time_s");
  if (efficiency() > 1.0)
    throw ValidationError("preset '" + name + "': collection x detection exceeds 1");
}

ExperimentPreset builtin_preset(std::string_view name) {
  ExperimentPreset p;
  p.name = std::string(name);
  if (name == "trapped_ion") {
    // 2P1/2 lifetime of Yb+.
    p.t1_s = 8.1e-9;
    p.collection_eff = 0.02;
    p.detection_eff = 0.15;
    p.coherence_time_s = 1.0;
    p.note = "t1 is the Yb+ 2P1/2 lifetime; coherence time is an order-of-magnitude placeholder";
  } else if (name == "quantum_dot") {
    p.t1_s = 1e-10;
    p.collection_eff = 0.067;
    p.detection_eff = 0.15;
    p.coherence_time_s = 3e-6;
    p.note = "coherence time is a spin-echo order-of-magnitude placeholder";
  } else if (name == "nv_center") {
    p.t1_s = 12e-9;
    p.collection_eff = 0.02;
    p.detection_eff = 0.15;
    p.coherence_time_s = 1e-3;
    p.t1_placeholder = true;
    p.note = "t1 and coherence time are typical NV values";
  } else {
    throw ValidationError("unknown preset '" + std::string(name) + "'");
  }
  return p;
}

std::vector<std::string> builtin_preset_names() {
  return {"trapped_ion", "quantum_dot", "nv_center"};
}

}  // namespace mpent
