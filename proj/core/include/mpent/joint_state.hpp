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

#include <array>
#include <string_view>

namespace mpent {

/// Spin configuration of (qubit 1, qubit 2): P = |+>, M = |->.
/// PM and MP together form the E (entangling) branch.
enum class JointSpinState { PP, PM, MP, MM };

inline constexpr std::array<JointSpinState, 4> kJointSpinStates = {
    JointSpinState::PP, JointSpinState::PM, JointSpinState::MP, JointSpinState::MM};

std::string_view to_string(JointSpinState state);

/// Accepts "PP", "PM", "MP", "MM" and the sign forms "++", "+-", "-+", "--".
JointSpinState parse_joint_state(std::string_view text);

}  // namespace mpent
