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

// Quantum-jump Monte Carlo unraveling of the two-qubit system on the
// 4-dimensional space |q1 q2>, basis index 2 * q1 + q2 with g = 0, e = 1.
//
// Channels: the detector-d port, its conjugate port b, and per-atom loss.
// The d and b ports are chosen so that their cross-atom dissipator terms
// cancel; together with loss they sum to each atom's local decay.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mpent/dynamics.hpp"
#include "mpent/joint_state.hpp"
#include "mpent/network.hpp"

namespace mpent {

using TwoQubitOp = Eigen::Matrix4cd;
using TwoQubitState = Eigen::Vector4cd;

enum class ChannelKind : std::uint8_t { detector, conjugate, loss, dephasing };

struct JumpChannel {
  ChannelKind kind = ChannelKind::loss;
  std::string name;
  TwoQubitOp op;  ///< collapse operator, rate already folded in
};

struct JumpChannelSet {
  std::vector<JumpChannel> channels;
  /// Sum of L^dag L over every channel.
  TwoQubitOp decay_operator() const;
};

/// Channels for the given spin state. Atoms in |+> are frozen spectators:
/// their sigma operators act as zero. Throws ChannelIncompleteness when
/// sum L^dag L differs from the atom-local decay by more than 1e-12.
JumpChannelSet build_channels(JointSpinState state, const DriveParams& first,
                              const DriveParams& second, const DetectionModel& model);

struct TrajectoryOptions {
  std::size_t n_traj = 10'000;
  std::uint64_t seed = 1;
  /// Upper bound on the propagation step, as a fraction of min(T1). The
  /// step is further reduced so the norm drops by < 10% per step.
  double max_step = 0.05;
  unsigned threads = 0;  ///< 0 = hardware concurrency
  /// When > 0, accumulate ensemble-averaged excited populations every
  /// population_dt (time units); the step is shrunk to divide it.
  double population_dt = 0.0;
};

struct TrajectoryRecord {
  std::uint32_t d_count = 0;
  std::uint32_t b_count = 0;
  std::uint32_t loss_count = 0;
};

struct PopulationTrace {
  std::vector<double> times;
  std::array<std::vector<double>, 2> mean;  ///< ensemble mean of p_e, per qubit
  std::array<std::vector<double>, 2> sem;   ///< standard error of the mean
};

struct TrajectoryEnsemble {
  JointSpinState state = JointSpinState::PP;
  std::uint64_t seed = 0;
  double duration = 0.0;
  std::vector<TrajectoryRecord> records;
  std::optional<PopulationTrace> populations;

  std::vector<std::uint32_t> d_counts() const;
};

/// Runs n_traj independent trajectories from |g g>. Trajectory i draws from
/// std::mt19937_64 seeded with splitmix64(seed, i), so the result does not
/// depend on the thread count. Background counts (DriveParams
/// background_rate) are added to d as a Poisson draw per trajectory.
TrajectoryEnsemble simulate(JointSpinState state, const DriveParams& first,
                            const DriveParams& second, const DetectionModel& model, double t,
                            const TrajectoryOptions& options = {});

/// Derived per-trajectory seed.
std::uint64_t trajectory_seed(std::uint64_t seed, std::uint64_t index);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;  ///< bootstrap standard error
};

struct EmpiricalDistribution {
  std::vector<double> histogram;  ///< P(n) for n = 0 .. max count
  std::size_t samples = 0;
  Estimate mean;
  Estimate variance;
  std::optional<Estimate> q;  ///< empty when every count is zero
};

/// Normalized histogram with bootstrap standard errors. Variance uses the
/// n - 1 denominator.
EmpiricalDistribution empirical_distribution(const std::vector<std::uint32_t>& counts,
                                             std::size_t resamples = 1000,
                                             std::uint64_t seed = 0x5eed);

/// Pearson chi-square goodness of fit against Poisson with the sample mean.
/// Tail bins are merged until each expected count is >= 5. Returns the
/// p-value; 1 when fewer than three bins remain.
double poisson_chi_square_pvalue(const std::vector<std::uint32_t>& counts);

/// Keeps each count independently with probability p.
std::vector<std::uint32_t> binomial_thin(const std::vector<std::uint32_t>& counts, double p,
                                         std::uint64_t seed);

}  // namespace mpent
