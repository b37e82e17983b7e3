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

#include "mpent/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/distributions/poisson.hpp>

#include "mpent/errors.hpp"

namespace mpent {
namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// P(a < X < b) for X ~ N(m, sd); a degenerate sd is a point mass.
double normal_window(double m, double sd, double a, double b) {
  if (sd <= 0.0) return (m > a && m < b) ? 1.0 : 0.0;
  return std::max(0.0, normal_cdf((b - m) / sd) - normal_cdf((a - m) / sd));
}

void require_separated(const CountingStats& e, const CountingStats& mm) {
  const double gap = mm.mean - e.mean;
  const double combined = std::sqrt(std::max(0.0, e.variance) + std::max(0.0, mm.variance));
  if (!(gap > combined))
    throw Indistinguishable("E and MM means differ by " + std::to_string(gap) +
                            ", not more than the combined sd " + std::to_string(combined));
}

void finish(ClassificationReport& r, double accept_e, double accept_mm, double accept_pp) {
  r.confidence = 1.0 - std::max(r.error_e, r.error_mm);
  r.acceptance = accept_e;
  r.p_success = ideal_success_probability() * accept_e;
  const double e = 0.5 * accept_e;
  const double mm = 0.25 * accept_mm;
  const double pp = 0.25 * accept_pp;
  r.fidelity_without_pp = e + mm > 0.0 ? e / (e + mm) : 0.0;
  r.fidelity_with_pp = e + mm + pp > 0.0 ? e / (e + mm + pp) : 0.0;
}

// P(N <= k) for N ~ Poisson(m), k may be negative.
double poisson_cdf(double m, long k) {
  if (k < 0) return 0.0;
  if (m <= 0.0) return 1.0;
  return boost::math::cdf(boost::math::poisson_distribution<>(m), static_cast<double>(k));
}

double fraction_below(const std::vector<std::uint32_t>& xs, long k) {
  if (xs.empty()) return 0.0;
  std::size_t n = 0;
  for (std::uint32_t x : xs)
    if (static_cast<long>(x) < k) ++n;
  return static_cast<double>(n) / static_cast<double>(xs.size());
}

CountingStats sample_moments(const std::vector<std::uint32_t>& xs, JointSpinState state) {
  CountingStats s;
  s.state = state;
  if (xs.empty()) return s;
  double sum = 0.0, sq = 0.0;
  for (std::uint32_t x : xs) {
    sum += x;
    sq += static_cast<double>(x) * x;
  }
  const double n = static_cast<double>(xs.size());
  s.mean = sum / n;
  s.variance = xs.size() > 1 ? (sq - n * s.mean * s.mean) / (n - 1.0) : 0.0;
  return s;
}

}  // namespace

std::string_view to_string(ClassifyMethod method) {
  switch (method) {
    case ClassifyMethod::gaussian: return "gaussian";
    case ClassifyMethod::poisson: return "poisson";
    case ClassifyMethod::empirical: return "empirical";
  }
  return "?";
}

ClassifyMethod parse_classify_method(std::string_view text) {
  if (text == "gaussian") return ClassifyMethod::gaussian;
  if (text == "poisson") return ClassifyMethod::poisson;
  if (text == "empirical") return ClassifyMethod::empirical;
  throw ValidationError("unknown method '" + std::string(text) +
                        "' (expected gaussian, poisson or empirical)");
}

ClassificationReport classify(const CountingStats& e, const CountingStats& mm,
                              const CountingStats& pp, ClassifyMethod method) {
  if (method == ClassifyMethod::empirical)
    throw ValidationError("empirical classification needs sampled counts");
  require_separated(e, mm);

  ClassificationReport r;
  r.method = method;
  if (method == ClassifyMethod::gaussian) {
    const double sd_e = e.sd(), sd_mm = mm.sd(), sd_pp = pp.sd();
    if (sd_e + sd_mm > 0.0) {
      r.threshold = (e.mean * sd_mm + mm.mean * sd_e) / (sd_e + sd_mm);
      r.error_e = r.error_mm = normal_cdf(-(mm.mean - e.mean) / (sd_e + sd_mm));
    } else {
      r.threshold = 0.5 * (e.mean + mm.mean);
    }
    r.pp_cutoff = pp.mean + 5.0 * sd_pp;
    r.error_pp = sd_e > 0.0 ? normal_cdf((r.pp_cutoff - e.mean) / sd_e)
                            : (e.mean <= r.pp_cutoff ? 1.0 : 0.0);
    finish(r, normal_window(e.mean, sd_e, r.pp_cutoff, r.threshold),
           normal_window(mm.mean, mm.sd(), r.pp_cutoff, r.threshold),
           normal_window(pp.mean, sd_pp, r.pp_cutoff, r.threshold));
    return r;
  }

  // Poisson: counts n >= k read as MM, n <= c as PP.
  long best_k = static_cast<long>(std::floor(e.mean)) + 1;
  double best = std::numeric_limits<double>::infinity();
  const long k_hi = static_cast<long>(std::ceil(mm.mean));
  for (long k = best_k; k <= k_hi; ++k) {
    const double worst = std::max(1.0 - poisson_cdf(e.mean, k - 1), poisson_cdf(mm.mean, k - 1));
    if (worst < best) {
      best = worst;
      best_k = k;
    }
  }
  long c = 0;
  while (1.0 - poisson_cdf(pp.mean, c) > 1e-6) ++c;
  r.threshold = static_cast<double>(best_k);
  r.pp_cutoff = static_cast<double>(c);
  r.error_e = 1.0 - poisson_cdf(e.mean, best_k - 1);
  r.error_mm = poisson_cdf(mm.mean, best_k - 1);
  r.error_pp = poisson_cdf(e.mean, c);
  auto window = [&](double m) {
    return std::max(0.0, poisson_cdf(m, best_k - 1) - poisson_cdf(m, c));
  };
  finish(r, window(e.mean), window(mm.mean), window(pp.mean));
  return r;
}

ClassificationReport classify_empirical(const std::vector<std::uint32_t>& e,
                                        const std::vector<std::uint32_t>& mm,
                                        const std::vector<std::uint32_t>& pp) {
  if (e.empty() || mm.empty()) throw ValidationError("empirical classification needs samples");
  require_separated(sample_moments(e, JointSpinState::PM), sample_moments(mm, JointSpinState::MM));

  ClassificationReport r;
  r.method = ClassifyMethod::empirical;
  const long k_max = static_cast<long>(*std::max_element(mm.begin(), mm.end())) + 1;
  long best_k = 1;
  double best = std::numeric_limits<double>::infinity();
  for (long k = 1; k <= k_max; ++k) {
    const double worst = std::max(1.0 - fraction_below(e, k), fraction_below(mm, k));
    if (worst < best) {
      best = worst;
      best_k = k;
    }
  }
  const long c = pp.empty() ? 0 : static_cast<long>(*std::max_element(pp.begin(), pp.end()));
  r.threshold = static_cast<double>(best_k);
  r.pp_cutoff = static_cast<double>(c);
  r.error_e = 1.0 - fraction_below(e, best_k);
  r.error_mm = fraction_below(mm, best_k);
  r.error_pp = fraction_below(e, c + 1);
  auto window = [&](const std::vector<std::uint32_t>& xs) {
    return std::max(0.0, fraction_below(xs, best_k) - fraction_below(xs, c + 1));
  };
  finish(r, window(e), window(mm), window(pp));
  const bool e_binds = r.error_e >= r.error_mm;
  const double err = e_binds ? r.error_e : r.error_mm;
  const double n = static_cast<double>(e_binds ? e.size() : mm.size());
  r.confidence_std_error = std::sqrt(err * (1.0 - err) / n);
  return r;
}

EntanglementTime avg_entanglement_time(const ExperimentPreset& preset, double kappa) {
  preset.validate();
  if (!(kappa > 0.0)) throw ValidationError("kappa must be positive");
  EntanglementTime out;
  out.half_cycle_t1 = kappa / preset.efficiency();
  out.in_t1 = 2.0 * out.half_cycle_t1 / ideal_success_probability();
  out.seconds = out.in_t1 * preset.t1_s;
  out.coherence_ratio = out.seconds / preset.coherence_time_s;
  return out;
}

double calibrate_kappa(double x, double efficiency, const CalibrationOptions& options) {
  if (!(options.target > 0.0 && options.target < 1.0))
    throw ValidationError("target confidence must be in (0, 1)");
  if (options.method == ClassifyMethod::empirical)
    throw ValidationError("kappa calibration supports the gaussian and poisson methods");
  DriveParams q;
  q.rabi = x;
  q.efficiency = efficiency;
  q.validate();
  const DetectionModel model = build_network(ModeNetwork::standard(), efficiency);
  const double t_max = options.kappa_max / efficiency;
  const CountingSeries e(JointSpinState::PM, q, q, model, t_max, options.quadrature);
  const CountingSeries mm(JointSpinState::MM, q, q, model, t_max, options.quadrature);
  const CountingSeries pp(JointSpinState::PP, q, q, model, t_max, options.quadrature);
  for (std::size_t i = 1; i <= e.steps(); ++i) {
    try {
      const ClassificationReport r = classify(e.stats(i), mm.stats(i), pp.stats(i), options.method);
      if (r.confidence >= options.target) return efficiency * e.time(i);
    } catch (const Indistinguishable&) {
    }
  }
  throw ValidationError("target confidence not reached below kappa = " +
                        std::to_string(options.kappa_max));
}

MismatchReport mismatch_analysis(const DriveParams& first, const DriveParams& second, double t,
                                 const DetectionModel& model, const QuadratureOptions& options) {
  MismatchReport r;
  r.mean_pp = counting_stats(JointSpinState::PP, first, second, t, model, options).mean;
  auto evaluate = [&](const DriveParams& other, MismatchReport& out) {
    const CountingStats pm = counting_stats(JointSpinState::PM, first, other, t, model, options);
    const CountingStats mp = counting_stats(JointSpinState::MP, first, other, t, model, options);
    out.mean_pm = pm.mean;
    out.mean_mp = mp.mean;
    out.sd_pm = pm.sd();
    out.sd_mp = mp.sd();
    out.difference = std::abs(pm.mean - mp.mean);
    out.allowed = std::min(pm.sd(), mp.sd());
    out.coherent = out.difference < out.allowed;
  };
  evaluate(second, r);
  r.mean_mm = counting_stats(JointSpinState::MM, first, second, t, model, options).mean;
  r.large_field = std::min(first.rabi, second.rabi) >= 3.0;

  auto margin = [&](double ratio) {
    DriveParams other = second;
    other.t1 = first.t1 * ratio;
    MismatchReport probe;
    evaluate(other, probe);
    return probe.allowed - probe.difference;
  };
  double lo = 1.0, hi = 2.0;
  if (margin(lo) > 0.0) {
    while (margin(hi) > 0.0 && hi < 1e3) {
      lo = hi;
      hi *= 2.0;
    }
    for (int it = 0; it < 40 && hi - lo > 1e-6; ++it) {
      const double mid = 0.5 * (lo + hi);
      (margin(mid) > 0.0 ? lo : hi) = mid;
    }
  }
  r.tolerable_t1_ratio = lo;
  r.tolerable_t1_discrepancy = lo - 1.0;
  r.tolerable_rate_discrepancy = 1.0 - 1.0 / lo;
  return r;
}

}  // namespace mpent
