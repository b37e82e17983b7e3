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

// Reference implementations that share no code with the library.

#include <complex>

namespace mpent::oracle {

/// Resonant two-level atom from the ground state with T1 = 1 and no extra
/// dephasing: closed-form excited population and its time derivative.
double excited_population(double x, double t);
double excited_population_rate(double x, double t);

/// Stationary g2(tau) of resonance fluorescence, T1 = 1.
double g2_stationary(double x, double tau);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

struct Atom {
  bool active = true;  ///< inactive atoms neither fluoresce nor get driven
  double x = 1.0;
  double t1 = 1.0;
  double efficiency = 1.0;
};

/// Exact mean and variance of detector clicks up to time t for two atoms
/// starting in |g g>, with the detector operator (sigma_1 + sigma_2) / 2.
/// Uses the tilted 16x16 Liouvillian: the first two derivatives of the
/// click generating function come from one block-triangular exponential.
Moments two_atom_counting(const Atom& first, const Atom& second, double t);

}  // namespace mpent::oracle
