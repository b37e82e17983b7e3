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

#include "mpent/trajectories.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>

#include "mpent/errors.hpp"

namespace mpent {
namespace {

using Op2 = Eigen::Matrix2cd;

constexpr double kNormDropLimit = 0.9;
constexpr std::size_t kBlock = 256;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform_open(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

Op2 lower2() {
  Op2 m = Op2::Zero();
  m(0, 1) = 1.0;
  return m;
}

TwoQubitOp on_atom(int atom, const Op2& m) {
  const Op2 id = Op2::Identity();
  const Op2& a = atom == 0 ? m : id;
  const Op2& b = atom == 0 ? id : m;
  TwoQubitOp out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return out;
}

// exp(A) for a 2x2 complex A = m I + B with B traceless, B^2 = delta^2 I.
Op2 expm2(const Op2& a) {
  const Complex m = 0.5 * (a(0, 0) + a(1, 1));
  Op2 b = a;
  b(0, 0) -= m;
  b(1, 1) -= m;
  const Complex d2 = b(0, 0) * b(0, 0) + b(0, 1) * b(1, 0);
  Complex ch, sc;
  if (std::abs(d2) < 1e-8) {
    ch = 1.0 + d2 / 2.0 + d2 * d2 / 24.0;
    sc = 1.0 + d2 / 6.0 + d2 * d2 / 120.0;
  } else {
    const Complex d = std::sqrt(d2);
    ch = std::cosh(d);
    sc = std::sinh(d) / d;
  }
  return std::exp(m) * (ch * Op2::Identity() + sc * b);
}

// Non-Hermitian drift of one atom, K = H - (i/2) sum L^dag L, restricted to
// that atom. Zero for a spectator.
Op2 local_generator(const DriveParams& p, bool active) {
  if (!active) return Op2::Zero();
  const Complex i(0.0, 1.0);
  Op2 x = Op2::Zero();
  x(0, 1) = x(1, 0) = 1.0;
  Op2 n = Op2::Zero();
  n(1, 1) = 1.0;
  const double gamma = 1.0 / p.t1;
  const double gphi = p.dephasing / p.t1;
  return 0.5 * p.rabi_frequency() * x - 0.5 * i * (gamma * n + 0.5 * gphi * Op2::Identity());
}

class Propagator {
 public:
  Propagator(const Op2& k1, const Op2& k2) : k1_(k1), k2_(k2) {}

  TwoQubitOp operator()(double tau) const {
    const Complex mi(0.0, -1.0);
    const Op2 u1 = expm2(mi * tau * k1_);
    const Op2 u2 = expm2(mi * tau * k2_);
    TwoQubitOp out;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = u1(i, j) * u2(k, l);
    return out;
  }

 private:
  Op2 k1_, k2_;
};

struct Accumulator {
  std::array<std::vector<double>, 2> sum;
  std::array<std::vector<double>, 2> sum_sq;

  explicit Accumulator(std::size_t n) {
    for (int s = 0; s < 2; ++s) {
      sum[s].assign(n, 0.0);
      sum_sq[s].assign(n, 0.0);
    }
  }
};

struct Runner {
  const JumpChannelSet& channels;
  const Propagator& propagate;
  TwoQubitOp decay;
  TwoQubitOp step_op;
  double h = 0.0;
  std::size_t n_steps = 0;
  double t = 0.0;
  double background = 0.0;
  std::size_t stride = 0;  // population sampling stride in steps, 0 = off

  double boundary(std::size_t k) const {
    return k >= n_steps ? t : h * static_cast<double>(k);
  }

  void sample(const TwoQubitState& psi, std::size_t k, Accumulator* acc) const {
    if (!acc || stride == 0 || k % stride != 0) return;
    const std::size_t idx = k / stride;
    if (idx >= acc->sum[0].size()) return;
    const double n2 = psi.squaredNorm();
    const double p1 = (std::norm(psi(2)) + std::norm(psi(3))) / n2;
    const double p2 = (std::norm(psi(1)) + std::norm(psi(3))) / n2;
    acc->sum[0][idx] += p1;
    acc->sum_sq[0][idx] += p1 * p1;
    acc->sum[1][idx] += p2;
    acc->sum_sq[1][idx] += p2 * p2;
  }

  // Time s in (0, tau] at which |U(s) psi|^2 = r. Safeguarded Newton,
  // started from log-linear interpolation of the norm across the step.
  double jump_time(const TwoQubitState& psi, double tau, double r, double n0, double n1) const {
    double lo = 0.0, hi = tau;
    double s = tau * std::log(n0 / r) / std::log(n0 / n1);
    if (!(s > lo && s < hi)) s = 0.5 * tau;
    for (int it = 0; it < 100; ++it) {
      const TwoQubitState phi = propagate(s) * psi;
      const double g = phi.squaredNorm() - r;
      if (std::abs(g) <= 1e-14 * r) return s;
      if (g > 0.0) lo = s; else hi = s;
      const double slope = -(phi.adjoint() * decay * phi).value().real();
      double next = slope < 0.0 ? s - g / slope : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - s) <= 1e-15 * tau || hi - lo <= 1e-15 * tau) return next;
      s = next;
    }
    return s;
  }

  TrajectoryRecord run(std::uint64_t seed, Accumulator* acc) const {
    std::mt19937_64 rng(seed);
    TrajectoryRecord rec;
    TwoQubitState psi = TwoQubitState::Zero();
    psi(0) = 1.0;
    double time = 0.0;
    std::size_t k = 0;
    double r = uniform_open(rng);
    sample(psi, 0, acc);
    std::vector<double> weights(channels.channels.size());
    while (time < t) {
      const double next = boundary(k + 1);
      const double tau = next - time;
      const bool full = std::abs(tau - h) <= 1e-12 * h;
      const TwoQubitState cand = (full ? step_op : propagate(tau)) * psi;
      const double before = psi.squaredNorm();
      const double after = cand.squaredNorm();
      if (after < kNormDropLimit * (1.0 - 1e-9) * before)
        throw NormUnderflow("norm dropped by more than 10% within one step");
      if (!std::isfinite(after) || after < 1e-300)
        throw NormUnderflow("trajectory norm underflow");
      if (after > r) {
        psi = cand;
        time = next;
        ++k;
        sample(psi, k, acc);
        continue;
      }
      const double s = jump_time(psi, tau, r, before, after);
      psi = propagate(s) * psi;
      time += s;
      double total = 0.0;
      for (std::size_t c = 0; c < weights.size(); ++c) {
        weights[c] = (channels.channels[c].op * psi).squaredNorm();
        total += weights[c];
      }
      double pick = uniform_open(rng) * total;
      std::size_t chosen = weights.size() - 1;
      for (std::size_t c = 0; c < weights.size(); ++c) {
        if (pick < weights[c]) {
          chosen = c;
          break;
        }
        pick -= weights[c];
      }
      const JumpChannel& ch = channels.channels[chosen];
      psi = ch.op * psi;
      psi /= psi.norm();
      switch (ch.kind) {
        case ChannelKind::detector: ++rec.d_count; break;
        case ChannelKind::conjugate: ++rec.b_count; break;
        case ChannelKind::loss: ++rec.loss_count; break;
        case ChannelKind::dephasing: break;
      }
      r = uniform_open(rng);
    }
    if (background > 0.0) {
      std::poisson_distribution<std::uint32_t> bg(background * t);
      rec.d_count += bg(rng);
    }
    return rec;
  }
};

}  // namespace

TwoQubitOp JumpChannelSet::decay_operator() const {
  TwoQubitOp out = TwoQubitOp::Zero();
  for (const JumpChannel& c : channels) out += c.op.adjoint() * c.op;
  return out;
}

JumpChannelSet build_channels(JointSpinState state, const DriveParams& first,
                              const DriveParams& second, const DetectionModel& model) {
  first.validate();
  second.validate();
  const std::array<bool, 2> zeta = state_participation(state);
  const std::array<const DriveParams*, 2> p{&first, &second};
  const Op2 sm = lower2();
  std::array<TwoQubitOp, 2> sigma;
  std::array<double, 2> gamma{}, eta{};
  for (int s = 0; s < 2; ++s) {
    sigma[s] = zeta[s] ? on_atom(s, sm) : TwoQubitOp::Zero();
    gamma[s] = 1.0 / p[s]->t1;
    eta[s] = p[s]->efficiency;
  }
  const Complex a1 = model.amp[0], a2 = model.amp[1];
  const double port_weight = std::norm(a1) + std::norm(a2);

  JumpChannelSet set;
  set.channels.push_back({ChannelKind::detector, "d",
                          std::sqrt(eta[0] * gamma[0]) * a1 * sigma[0] +
                              std::sqrt(eta[1] * gamma[1]) * a2 * sigma[1]});
  set.channels.push_back({ChannelKind::conjugate, "b",
                          std::conj(a2) * std::sqrt(eta[0] * gamma[0]) * sigma[0] -
                              std::conj(a1) * std::sqrt(eta[1] * gamma[1]) * sigma[1]});
  for (int s = 0; s < 2; ++s) {
    const double loss = 1.0 - eta[s] * port_weight;
    if (loss < -1e-12)
      throw ChannelIncompleteness("detector ports exceed the decay rate of qubit " +
                                  std::to_string(s + 1));
    set.channels.push_back({ChannelKind::loss, "loss" + std::to_string(s + 1),
                            std::sqrt(std::max(loss, 0.0) * gamma[s]) * sigma[s]});
  }
  for (int s = 0; s < 2; ++s) {
    if (!zeta[s] || p[s]->dephasing == 0.0) continue;
    Op2 z = Op2::Zero();
    z(0, 0) = -1.0;
    z(1, 1) = 1.0;
    set.channels.push_back({ChannelKind::dephasing, "dephasing" + std::to_string(s + 1),
                            std::sqrt(0.5 * p[s]->dephasing / p[s]->t1) * on_atom(s, z)});
  }

  TwoQubitOp expected = TwoQubitOp::Zero();
  Op2 n = Op2::Zero();
  n(1, 1) = 1.0;
  for (int s = 0; s < 2; ++s) {
    if (!zeta[s]) continue;
    expected += gamma[s] * on_atom(s, n);
    expected += 0.5 * p[s]->dephasing / p[s]->t1 * TwoQubitOp::Identity();
  }
  const double err = (set.decay_operator() - expected).cwiseAbs().maxCoeff();
  if (err > 1e-12 * std::max({1.0, gamma[0], gamma[1]}))
    throw ChannelIncompleteness("sum of L^dag L deviates from local decay by " +
                                std::to_string(err));
  return set;
}

std::uint64_t trajectory_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index));
}

std::vector<std::uint32_t> TrajectoryEnsemble::d_counts() const {
  std::vector<std::uint32_t> out;
  out.reserve(records.size());
  for (const TrajectoryRecord& r : records) out.push_back(r.d_count);
  return out;
}

TrajectoryEnsemble simulate(JointSpinState state, const DriveParams& first,
                            const DriveParams& second, const DetectionModel& model, double t,
                            const TrajectoryOptions& options) {
  if (options.n_traj < 1) throw ValidationError("n_traj must be >= 1");
  if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("duration must be positive");
  if (!(options.max_step > 0.0)) throw ValidationError("max_step must be positive");
  if (options.population_dt < 0.0) throw ValidationError("population_dt must be >= 0");

  const JumpChannelSet channels = build_channels(state, first, second, model);
  const std::array<bool, 2> zeta = state_participation(state);
  const Propagator propagate(local_generator(first, zeta[0]), local_generator(second, zeta[1]));

  const TwoQubitOp decay = channels.decay_operator();
  const double k_max = Eigen::SelfAdjointEigenSolver<TwoQubitOp>(decay).eigenvalues().maxCoeff();
  double h = options.max_step * std::min(first.t1, second.t1);
  if (k_max > 0.0) h = std::min(h, -std::log(kNormDropLimit) / k_max);
  std::size_t stride = 0;
  std::size_t n_samples = 0;
  if (options.population_dt > 0.0) {
    const double per = std::ceil(options.population_dt / h - 1e-9);
    h = options.population_dt / per;
    stride = static_cast<std::size_t>(per);
    n_samples = static_cast<std::size_t>(std::floor(t / options.population_dt + 1e-9)) + 1;
  }

  Runner runner{channels, propagate, decay, propagate(h), h,
                static_cast<std::size_t>(std::ceil(t / h - 1e-9)), t,
                first.background_rate / first.t1 + second.background_rate / second.t1, stride};

  TrajectoryEnsemble ens;
  ens.state = state;
  ens.seed = options.seed;
  ens.duration = t;
  ens.records.resize(options.n_traj);

  const std::size_t n_blocks = (options.n_traj + kBlock - 1) / kBlock;
  std::vector<Accumulator> block_acc;
  if (stride > 0) block_acc.assign(n_blocks, Accumulator(n_samples));

  std::atomic<std::size_t> next_block{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t b = next_block.fetch_add(1);
      if (b >= n_blocks) return;
      Accumulator* acc = stride > 0 ? &block_acc[b] : nullptr;
      const std::size_t end = std::min(options.n_traj, (b + 1) * kBlock);
      for (std::size_t i = b * kBlock; i < end; ++i)
        ens.records[i] = runner.run(trajectory_seed(options.seed, i), acc);
    }
  };
  unsigned n_threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  n_threads = std::max(1u, std::min<unsigned>(n_threads, static_cast<unsigned>(n_blocks)));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::exception_ptr> errors(n_threads);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n_threads; ++w)
      pool.emplace_back([&, w] {
        try {
          worker();
        } catch (...) {
          errors[w] = std::current_exception();
          next_block.store(n_blocks);
        }
      });
    for (std::thread& th : pool) th.join();
    for (const std::exception_ptr& e : errors)
      if (e) std::rethrow_exception(e);
  }

  if (stride > 0) {
    PopulationTrace trace;
    const double n = static_cast<double>(options.n_traj);
    for (std::size_t i = 0; i < n_samples; ++i)
      trace.times.push_back(options.population_dt * static_cast<double>(i));
    for (int s = 0; s < 2; ++s) {
      std::vector<double> sum(n_samples, 0.0), sq(n_samples, 0.0);
      for (const Accumulator& acc : block_acc)
        for (std::size_t i = 0; i < n_samples; ++i) {
          sum[i] += acc.sum[s][i];
          sq[i] += acc.sum_sq[s][i];
        }
      trace.mean[s].resize(n_samples);
      trace.sem[s].resize(n_samples);
      for (std::size_t i = 0; i < n_samples; ++i) {
        const double m = sum[i] / n;
        const double var = n > 1 ? std::max(0.0, (sq[i] - n * m * m) / (n - 1)) : 0.0;
        trace.mean[s][i] = m;
        trace.sem[s][i] = std::sqrt(var / n);
      }
    }
    ens.populations = std::move(trace);
  }
  return ens;
}

namespace {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

Moments moments_from_histogram(const std::vector<std::size_t>& hist, std::size_t n) {
  double s = 0.0, s2 = 0.0;
  for (std::size_t k = 0; k < hist.size(); ++k) {
    const double w = static_cast<double>(hist[k]);
    s += w * static_cast<double>(k);
    s2 += w * static_cast<double>(k) * static_cast<double>(k);
  }
  const double nn = static_cast<double>(n);
  Moments m;
  m.mean = s / nn;
  m.variance = n > 1 ? (s2 - nn * m.mean * m.mean) / (nn - 1.0) : 0.0;
  return m;
}

double stddev(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  return std::sqrt(v / static_cast<double>(xs.size() - 1));
}

}  // namespace

EmpiricalDistribution empirical_distribution(const std::vector<std::uint32_t>& counts,
                                             std::size_t resamples, std::uint64_t seed) {
  if (counts.empty()) throw ValidationError("empty ensemble");
  const std::uint32_t max_count = *std::max_element(counts.begin(), counts.end());
  std::vector<std::size_t> hist(max_count + 1, 0);
  for (std::uint32_t c : counts) ++hist[c];

  EmpiricalDistribution out;
  out.samples = counts.size();
  out.histogram.resize(hist.size());
  for (std::size_t k = 0; k < hist.size(); ++k)
    out.histogram[k] = static_cast<double>(hist[k]) / static_cast<double>(counts.size());
  const Moments m = moments_from_histogram(hist, counts.size());
  out.mean.value = m.mean;
  out.variance.value = m.variance;
  if (m.mean > 0.0) out.q = Estimate{m.variance / m.mean - 1.0, 0.0};

  std::vector<double> means, vars, qs;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, counts.size() - 1);
  std::vector<std::size_t> rh(hist.size());
  for (std::size_t b = 0; b < resamples; ++b) {
    std::fill(rh.begin(), rh.end(), 0);
    for (std::size_t i = 0; i < counts.size(); ++i) ++rh[counts[pick(rng)]];
    const Moments bm = moments_from_histogram(rh, counts.size());
    means.push_back(bm.mean);
    vars.push_back(bm.variance);
    if (bm.mean > 0.0) qs.push_back(bm.variance / bm.mean - 1.0);
  }
  out.mean.std_error = stddev(means);
  out.variance.std_error = stddev(vars);
  if (out.q) out.q->std_error = stddev(qs);
  return out;
}

double poisson_chi_square_pvalue(const std::vector<std::uint32_t>& counts) {
  if (counts.empty()) throw ValidationError("empty ensemble");
  double sum = 0.0;
  std::uint32_t max_count = 0;
  for (std::uint32_t c : counts) {
    sum += c;
    max_count = std::max(max_count, c);
  }
  const double n = static_cast<double>(counts.size());
  const double lambda = sum / n;
  if (lambda <= 0.0) return 1.0;
  std::vector<double> observed(max_count + 1, 0.0);
  for (std::uint32_t c : counts) observed[c] += 1.0;

  const boost::math::poisson_distribution<> pois(lambda);
  // Merge bins left to right until the expected count reaches 5; the last
  // bin absorbs the upper tail.
  std::vector<double> obs_bins, exp_bins;
  double o = 0.0, e = 0.0, cum = 0.0;
  for (std::uint32_t k = 0; k <= max_count; ++k) {
    const double pk = boost::math::pdf(pois, k);
    cum += pk;
    o += observed[k];
    e += n * pk;
    if (e >= 5.0) {
      obs_bins.push_back(o);
      exp_bins.push_back(e);
      o = e = 0.0;
    }
  }
  e += n * std::max(0.0, 1.0 - cum);
  if (!obs_bins.empty() && (e < 5.0)) {
    obs_bins.back() += o;
    exp_bins.back() += e;
  } else {
    obs_bins.push_back(o);
    exp_bins.push_back(e);
  }
  if (obs_bins.size() < 3) return 1.0;
  double stat = 0.0;
  for (std::size_t i = 0; i < obs_bins.size(); ++i) {
    const double d = obs_bins[i] - exp_bins[i];
    stat += d * d / exp_bins[i];
  }
  const boost::math::chi_squared_distribution<> chi(static_cast<double>(obs_bins.size() - 2));
  return boost::math::cdf(boost::math::complement(chi, stat));
}

std::vector<std::uint32_t> binomial_thin(const std::vector<std::uint32_t>& counts, double p,
                                         std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("thinning probability must be in [0, 1]");
  std::vector<std::uint32_t> out(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    std::mt19937_64 rng(trajectory_seed(seed, i));
    std::binomial_distribution<std::uint32_t> keep(counts[i], p);
    out[i] = keep(rng);
  }
  return out;
}

}  // namespace mpent
