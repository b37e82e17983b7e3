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

// Postselection analysis: separating the entangling branch (PM or MP) from
// MM by the detected count, success probability, entanglement time and
// tolerance to unequal qubits.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mpent/counting.hpp"
#include "mpent/presets.hpp"

namespace mpent {

enum class ClassifyMethod { gaussian, poisson, empirical };

std::string_view to_string(ClassifyMethod method);
ClassifyMethod parse_classify_method(std::string_view text);

/// Counts n with pp_cutoff < n < threshold herald the entangling branch.
struct ClassificationReport {
  ClassifyMethod method = ClassifyMethod::gaussian;
  double threshold = 0.0;
  double error_e = 0.0;   ///< P(E count >= threshold)
  double error_mm = 0.0;  ///< P(MM count < threshold)
  /// 1 - max(error_e, error_mm): equal priors over {E, MM}.
  double confidence = 0.0;
  /// Binomial standard error of the confidence; empirical method only.
  double confidence_std_error = 0.0;
  double pp_cutoff = 0.0;
  double error_pp = 0.0;  ///< P(E count <= pp_cutoff)
  /// P(E count lands in the herald window).
  double acceptance = 0.0;
  /// ideal_success_probability() * acceptance.
  double p_success = 0.0;
  /// P(E | herald) with the four spin states equally likely, without and
  /// with the PP branch among the competitors.
  double fidelity_without_pp = 0.0;
  double fidelity_with_pp = 0.0;
};

/// Gaussian (equal z-scores) or Poisson (integer threshold minimizing the
/// larger tail) classification from counting moments. Throws
/// Indistinguishable when mean_MM - mean_E <= sqrt(var_E + var_MM), and
/// ValidationError for the empirical method (use classify_empirical).
ClassificationReport classify(const CountingStats& e, const CountingStats& mm,
                              const CountingStats& pp, ClassifyMethod method);

/// Integer threshold from sampled counts; the reported errors are the
/// empirical misclassification frequencies.
ClassificationReport classify_empirical(const std::vector<std::uint32_t>& e,
                                        const std::vector<std::uint32_t>& mm,
                                        const std::vector<std::uint32_t>& pp);

/// Weight of the PM + MP branch in the uniform initial superposition.
constexpr double ideal_success_probability() { return 0.5; }
/// Reference value for heralding on single photons.
constexpr double single_photon_success_probability() { return 0.25; }

inline constexpr double kDefaultKappa = 130.0;

struct EntanglementTime {
  double half_cycle_t1 = 0.0;  ///< tau / T1 = kappa / eta
  double in_t1 = 0.0;          ///< average time / T1 = 4 kappa / eta
  double seconds = 0.0;
  double coherence_ratio = 0.0;  ///< seconds / coherence_time_s
};

/// Average time to herald: two half-cycles of kappa T1 / eta per attempt
/// and 1 / ideal_success_probability() attempts.
EntanglementTime avg_entanglement_time(const ExperimentPreset& preset,
                                       double kappa = kDefaultKappa);

struct CalibrationOptions {
  ClassifyMethod method = ClassifyMethod::gaussian;
  double target = 0.9;
  double kappa_max = 1000.0;
  QuadratureOptions quadrature{};
};

/// Smallest eta t / T1 on the quadrature grid whose confidence reaches the
/// target for identical qubits with drive x and efficiency eta. Throws
/// ValidationError when kappa_max is not enough.
double calibrate_kappa(double x, double efficiency = 1.0, const CalibrationOptions& options = {});

struct MismatchReport {
  double mean_pp = 0.0, mean_pm = 0.0, mean_mp = 0.0, mean_mm = 0.0;
  double sd_pm = 0.0, sd_mp = 0.0;
  double difference = 0.0;  ///< |n_PM - n_MP|
  double allowed = 0.0;     ///< min(sd_PM, sd_MP)
  bool coherent = false;    ///< difference < allowed
  bool large_field = false;  ///< min(x1, x2) >= 3
  /// Largest T1' / T1 (qubit 2 relative to qubit 1, drive x held fixed)
  /// that still satisfies the criterion at the same t, and the matching
  /// relative discrepancies in T1 and in the decay rate.
  double tolerable_t1_ratio = 1.0;
  double tolerable_t1_discrepancy = 0.0;
  double tolerable_rate_discrepancy = 0.0;
};

MismatchReport mismatch_analysis(const DriveParams& first, const DriveParams& second, double t,
                                 const DetectionModel& model,
                                 const QuadratureOptions& options = {});

}  // namespace mpent
