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

// Resonant optical Bloch equations for one driven two-level transition and
// two-time dipole correlators via the quantum regression theorem.
//
// Time is measured in a caller-chosen unit; DriveParams::t1 is expressed in
// that unit (t1 = 1 makes every time argument read as t/T1). The drive
// strength is always stored as the dimensionless product x = Omega * T1.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mpent {

using Complex = std::complex<double>;
/// 2x2 density matrix in the (ground, excited) basis.
using Density = Eigen::Matrix2cd;
/// Column-stacked vec of a Density.
using DensityVec = Eigen::Vector4cd;
using Superoperator = Eigen::Matrix4cd;

struct DriveParams {
  double rabi = 0.0;             ///< x = Omega * T1 (dimensionless)
  double t1 = 1.0;               ///< relaxation time, > 0
  double efficiency = 1.0;       ///< eta, collection x detection, in [0, 1]
  double background_rate = 0.0;  ///< extraneous detector counts per T1
  double dephasing = 0.0;        ///< extra pure-dephasing rate in units of 1/T1

  /// Throws ValidationError when any field is out of range.
  void validate() const;

  double decay_rate() const { return 1.0 / t1; }
  double rabi_frequency() const { return rabi / t1; }
};

/// Excited population and optical coherence <sigma_->.
struct BlochState {
  double p_e = 0.0;
  Complex coh{0.0, 0.0};

  static BlochState ground() { return {}; }
  static BlochState from_density(const Density& rho);
  Density density() const;

  /// 0 <= p_e <= 1 and |coh|^2 <= p_e (1 - p_e), up to tol.
  bool is_physical(double tol = 1e-12) const;
};

/// Operator inserted into a regression-theorem correlator.
enum class Insertion : std::uint8_t { identity, raise, lower, number };

/// 2x2 matrix of an insertion: raise = |e><g|, lower = |g><e|,
/// number = raise * lower.
Density insertion_matrix(Insertion op);

/// <left(t1) middle(t2) right(t1)> for t1 <= t2. By the regression theorem
/// this equals Tr[middle * P(t2 - t1)(right rho(t1) left)].
struct Sandwich {
  Insertion left = Insertion::identity;
  Insertion middle = Insertion::identity;
  Insertion right = Insertion::identity;
};

/// Generator of the master equation acting on vec(rho).
Superoperator liouvillian(const DriveParams& params);

/// Exact propagator P(tau) = exp(L tau) of the linear Bloch map.
class BlochPropagator {
 public:
  explicit BlochPropagator(const DriveParams& params);

  Superoperator operator()(double tau) const;
  const Superoperator& generator() const { return generator_; }

 private:
  Superoperator generator_;
};

inline DensityVec vec(const Density& rho) {
  return DensityVec(rho(0, 0), rho(1, 0), rho(0, 1), rho(1, 1));
}

inline Density unvec(const DensityVec& v) {
  Density rho;
  rho << v(0), v(2), v(1), v(3);
  return rho;
}

/// Bloch state at each grid point. The grid must start at 0 and be strictly
/// ascending. Uses the exact propagator between consecutive points.
std::vector<BlochState> evolve_bloch(const DriveParams& params,
                                     const BlochState& initial,
                                     std::span<const double> grid);

struct AdaptiveOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 1e-3;
  std::size_t max_steps = 10'000'000;
};

/// Cross-check path: Dormand-Prince 5(4) on the hand-written Bloch
/// equations, independent of liouvillian().
std::vector<BlochState> evolve_bloch_adaptive(const DriveParams& params,
                                              const BlochState& initial,
                                              std::span<const double> grid,
                                              const AdaptiveOptions& options = {});

/// Stationary state. Without dephasing: p_e = x^2/(1+2x^2),
/// coh = -i x/(1+2x^2).
BlochState steady_state(const DriveParams& params);

/// Two-time correlator for an atom that starts in the ground state at t = 0.
Complex two_time(const DriveParams& params, Sandwich sandwich, double t1, double t2);

/// <sigma_-(t)> from the ground state.
Complex dipole(const DriveParams& params, double t);

/// <sigma_+(t1) sigma_-(t2)>.
Complex correlator_ee(const DriveParams& params, double t1, double t2);

/// <sigma_+(t1) sigma_+(t2) sigma_-(t2) sigma_-(t1)>.
double correlator_g2(const DriveParams& params, double t1, double t2);

/// Single-atom factors entering cross-atom terms of the counting variance.
struct MixedCorrelators {
  Complex dipole_t1;     ///< <sigma_-(t1)>
  Complex dipole_t2;     ///< <sigma_-(t2)>
  Complex first_order;   ///< <sigma_+(t1) sigma_-(t2)>
  Complex number_lower;  ///< <sigma_+(t2) sigma_-(t2) sigma_-(t1)>
  Complex raise_number;  ///< <sigma_+(t1) sigma_+(t2) sigma_-(t2)>
  Complex raise_raise;   ///< <sigma_+(t1) sigma_+(t2)>
  Complex lower_lower;   ///< <sigma_-(t2) sigma_-(t1)>
};

MixedCorrelators mixed_correlators(const DriveParams& params, double t1, double t2);

/// Samples of one two-time correlator on the lower triangle t1 <= t2 of a
/// uniform grid.
class CorrelationKernel {
 public:
  CorrelationKernel(double dt, std::size_t steps);

  double dt() const { return dt_; }
  std::size_t steps() const { return steps_; }
  double t_max() const { return dt_ * static_cast<double>(steps_); }

  /// Value at (t1, t2) = (i dt, j dt); requires i <= j <= steps.
  Complex at(std::size_t i, std::size_t j) const;
  Complex& at(std::size_t i, std::size_t j);

 private:
  double dt_;
  std::size_t steps_;
  std::vector<Complex> values_;
};

CorrelationKernel tabulate(const DriveParams& params, Sandwich sandwich, double t_max,
                           double dt);

}  // namespace mpent
