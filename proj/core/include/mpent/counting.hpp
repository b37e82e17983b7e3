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

// State-conditioned photon counting statistics at the detector mode.
//
// Mean:      n(t)   = int_0^t <D^dag D>(t') dt'
// Variance:  dn(t)^2 = n(t) + 2 int_0^t dt2 int_0^t2 dt1
//                      <<D^dag(t1) D^dag(t2) D(t2) D(t1)>>
// with D = sum_s amp_s sqrt(eta_s / T1_s) zeta_s sigma_{s,-}, atoms starting
// in the ground state at t = 0 and <<ABCD>> = <ABCD> - <AD><BC>. With
// |amp_s| = 1/2 the double-integral prefactor is eta^2 / (8 T1^2).

#include <cstddef>
#include <optional>
#include <vector>

#include "mpent/dynamics.hpp"
#include "mpent/joint_state.hpp"
#include "mpent/network.hpp"

namespace mpent {

struct CountingStats {
  double mean = 0.0;
  double variance = 0.0;
  std::optional<double> q;  ///< variance / mean - 1; empty when mean == 0
  double t = 0.0;
  JointSpinState state = JointSpinState::PP;

  double sd() const;
};

/// Long-time closed forms (t >> T1), x = Omega T1:
///   PP -> 0, PM/MP -> (eta/4) x^2/(1+2x^2) t/T1,
///   MM -> eta (x^2 + x^4)/(1+2x^2)^2 t/T1.
double mean_longtime(JointSpinState state, double x, double efficiency, double t_over_t1);

struct QuadratureOptions {
  /// Grid step, in the same unit as DriveParams::t1. Must not exceed
  /// min(T1)/20.
  double dt = 0.05;
  /// Beyond relax_cutoff * max(T1) the single-atom state is taken as
  /// stationary; correlations at lags beyond lag_cutoff * max(T1) are
  /// dropped. Both neglect terms of order exp(-cutoff / 2).
  double relax_cutoff = 40.0;
  double lag_cutoff = 40.0;
  /// Recompute with dt/2 and throw QuadratureResolution when mean or
  /// variance at the final time moves by more than convergence_tol.
  bool check_convergence = false;
  double convergence_tol = 0.005;

  void validate() const;
};

/// Counting statistics on every point of a uniform grid over [0, t_max].
/// Construction does all the work; queries are O(1).
class CountingSeries {
 public:
  CountingSeries(JointSpinState state, const DriveParams& first, const DriveParams& second,
                 const DetectionModel& model, double t_max, const QuadratureOptions& options = {});

  JointSpinState state() const { return state_; }
  double dt() const { return dt_; }
  std::size_t steps() const { return mean_.size() - 1; }
  double time(std::size_t i) const { return dt_ * static_cast<double>(i); }

  double mean(std::size_t i) const { return mean_.at(i); }
  double variance(std::size_t i) const { return variance_.at(i); }

  /// Throws NonPositiveVariance when the quadrature produced a negative
  /// variance at grid point i.
  CountingStats stats(std::size_t i) const;

  /// Statistics at any t in [0, t_max]: exact on grid points, linear
  /// interpolation of mean and variance in between.
  CountingStats stats_at(double t) const;

  /// Grid index of time t; throws ValidationError if t is not on the grid.
  std::size_t index_of(double t) const;

 private:
  JointSpinState state_;
  double dt_;
  std::vector<double> mean_;
  std::vector<double> variance_;
};

/// Mean detected count at time t for general (possibly unequal) qubits.
double mean_general(JointSpinState state, const DriveParams& first, const DriveParams& second,
                    double t, const DetectionModel& model, const QuadratureOptions& options = {});

/// Detected-count variance at time t.
double variance(JointSpinState state, const DriveParams& first, const DriveParams& second,
                double t, const DetectionModel& model, const QuadratureOptions& options = {});

/// Mandel Q at time t. Throws UndefinedQ when the mean is zero.
double mandel_q(JointSpinState state, const DriveParams& first, const DriveParams& second,
                double t, const DetectionModel& model, const QuadratureOptions& options = {});

/// Mean, variance and Q in one pass.
CountingStats counting_stats(JointSpinState state, const DriveParams& first,
                             const DriveParams& second, double t, const DetectionModel& model,
                             const QuadratureOptions& options = {});

}  // namespace mpent
