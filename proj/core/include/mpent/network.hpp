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

// Symbolic mode algebra for the two-qubit interferometer. Every mode carries
// a linear combination of three sources: the input laser amplitude and the
// fluorescence operators sigma_{1,-}, sigma_{2,-} emitted by each qubit.

#include <array>
#include <complex>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mpent/joint_state.hpp"

namespace mpent {

using Complex = std::complex<double>;

enum class ElementKind { source, splitter, phase_shifter, qubit };

/// 50/50 splitter, out = T * in with T = [[1, i], [i, 1]] / sqrt(2).
Eigen::Matrix2cd fifty_fifty_splitter();

struct NetworkElement {
  ElementKind kind = ElementKind::splitter;
  /// Physical device name. Elements traversed twice (round-trip arms) share
  /// one label, so removing a device removes every pass through it.
  std::string label;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  double phase = 0.0;  ///< phase shifter, radians
  Eigen::Matrix2cd transfer = fifty_fifty_splitter();
  int qubit = 0;  ///< 1 or 2 for qubit elements
};

struct ModeAmplitude {
  Complex laser{0.0, 0.0};
  std::array<Complex, 2> fluorescence{};
};

class ModeNetwork {
 public:
  std::vector<NetworkElement> elements;
  std::string detector = "d";

  /// Round-trip Mach-Zehnder layout: BS-1 splits the laser into the qubit
  /// arm and the reference arm c; BS-2 splits and later recombines the two
  /// mirror-ended qubit arms; the returning b1 mode meets c again at BS-1.
  /// Both pi/2 shifters (a1 and c arms) are passed twice.
  static ModeNetwork standard();

  /// Copy with every phase-shifter pass named `label` replaced by a plain
  /// connection. Throws ValidationError if no phase shifter has that label.
  ModeNetwork without(std::string_view label) const;

  /// Copy with qubit indices 1 and 2 exchanged.
  ModeNetwork with_qubits_swapped() const;

  /// Structural checks. Throws ValidationError or NonUnitarySplitter.
  void validate() const;

  /// Amplitude of every mode for the given laser input amplitude.
  std::map<std::string, ModeAmplitude> propagate(Complex laser = 1.0) const;

  /// Modes produced by an element and consumed by none.
  std::vector<std::string> terminal_modes() const;

  /// Laser amplitude arriving at each qubit's input.
  std::array<Complex, 2> drive_amplitudes(Complex laser = 1.0) const;
};

/// Detector-mode field operator D = amp[0] sigma_{1,-} + amp[1] sigma_{2,-},
/// expressed in the frame where each qubit's drive is real and positive.
struct DetectionModel {
  std::array<Complex, 2> amp{Complex(0.5, 0.0), Complex(0.5, 0.0)};
  double rate_prefactor = 1.0;  ///< eta / T1
  Complex laser_amp_at_d{0.0, 0.0};
};

/// Propagates a unit laser amplitude and the two fluorescence sources
/// through the network and returns the detector-mode operator. Throws
/// LaserLeakage when |laser at d| > 1e-10.
DetectionModel build_network(const ModeNetwork& network, double efficiency = 1.0,
                             double t1 = 1.0);

/// zeta_s = 1 iff qubit s is in |->; only |-> spins fluoresce.
std::array<bool, 2> state_participation(JointSpinState state);

}  // namespace mpent
