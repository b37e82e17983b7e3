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

#include "mpent/joint_state.hpp"

#include <string>

#include "mpent/errors.hpp"

namespace mpent {

std::string_view to_string(JointSpinState state) {
  switch (state) {
    case JointSpinState::PP: return "PP";
    case JointSpinState::PM: return "PM";
    case JointSpinState::MP: return "MP";
    case JointSpinState::MM: return "MM";
  }
  return "?";
}

JointSpinState parse_joint_state(std::string_view text) {
  if (text == "PP" || text == "++") return JointSpinState::PP;
  if (text == "PM" || text == "+-") return JointSpinState::PM;
  if (text == "MP" || text == "-+") return JointSpinState::MP;
  if (text == "MM" || text == "--") return JointSpinState::MM;
  throw ValidationError("unknown joint spin state '" + std::string(text) + "'");
}

}  // namespace mpent
