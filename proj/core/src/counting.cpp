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

#include "mpent/counting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "mpent/errors.hpp"

namespace mpent {
namespace {

using Row = Eigen::RowVector4cd;

Row trace_row(const Density& m) {
  Density t = m.transpose();
  return vec(t).transpose();
}

Insertion middle_insertion(bool raise, bool lower) {
  if (raise && lower) return Insertion::number;
  if (raise) return Insertion::raise;
  if (lower) return Insertion::lower;
  return Insertion::identity;
}

// Per-atom tables used by the variance kernel. Lag rows m[M](k) contract a
// propagated operator with the middle insertion M; vectors w[LR](j) hold
// vec(R rho(t_j) L) for L in {1, sigma_+}, R in {1, sigma_-}.
struct AtomTables {
  bool active = false;
  std::vector<std::array<Row, 4>> rows;              // [k][M]
  std::vector<std::array<DensityVec, 4>> sandwiches;  // [j][LR], j <= relax
  std::array<DensityVec, 4> sandwich_ss;
  std::vector<std::array<Complex, 4>> expect;  // [j][M] = <M>(t_j)
  std::array<Complex, 4> expect_ss{};
};

AtomTables build_tables(const DriveParams& params, bool active, double h, std::size_t relax,
                        std::size_t lag) {
  AtomTables tab;
  tab.active = active;
  if (!active) return tab;

  const Superoperator step = BlochPropagator(params)(h);
  std::array<Density, 4> ins;
  for (int m = 0; m < 4; ++m) ins[m] = insertion_matrix(static_cast<Insertion>(m));
  const Density& raise = ins[static_cast<int>(Insertion::raise)];
  const Density& lower = ins[static_cast<int>(Insertion::lower)];

  tab.rows.resize(lag + 1);
  for (int m = 0; m < 4; ++m) tab.rows[0][m] = trace_row(ins[m]);
  for (std::size_t k = 1; k <= lag; ++k)
    for (int m = 0; m < 4; ++m) tab.rows[k][m] = tab.rows[k - 1][m] * step;

  auto fill = [&](const Density& rho, std::array<DensityVec, 4>& w, std::array<Complex, 4>& e) {
    w[0] = vec(rho);
    w[1] = vec(lower * rho);
    w[2] = vec(rho * raise);
    w[3] = vec(lower * rho * raise);
    for (int m = 0; m < 4; ++m) e[m] = (tab.rows[0][m] * w[0]).value();
  };

  tab.sandwiches.resize(relax + 1);
  tab.expect.resize(relax + 1);
  DensityVec rho = vec(BlochState::ground().density());
  for (std::size_t j = 0; j <= relax; ++j) {
    if (j > 0) rho = step * rho;
    fill(unvec(rho), tab.sandwiches[j], tab.expect[j]);
  }
  fill(steady_state(params).density(), tab.sandwich_ss, tab.expect_ss);
  return tab;
}

// Tensor product of per-atom vectors; an inactive atom contributes the
// scalar 1 because the trace of its reduced state is conserved.
template <class A, class B>
void kron_into(const A& x, bool x_active, const B& y, bool y_active, std::vector<Complex>& out) {
  const int dx = x_active ? 4 : 1;
  const int dy = y_active ? 4 : 1;
  out.assign(static_cast<std::size_t>(dx * dy), Complex(0.0, 0.0));
  for (int i = 0; i < dx; ++i)
    for (int k = 0; k < dy; ++k)
      out[static_cast<std::size_t>(i * dy + k)] =
          (x_active ? Complex(x(i)) : Complex(1.0)) * (y_active ? Complex(y(k)) : Complex(1.0));
}

double min_t1(const DriveParams& a, const DriveParams& b) { return std::min(a.t1, b.t1); }

std::vector<double> cumulative_trapezoid(const std::vector<double>& f, double h) {
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t i = 1; i < f.size(); ++i) out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
  return out;
}

}  // namespace

double CountingStats::sd() const { return std::sqrt(std::max(variance, 0.0)); }

double mean_longtime(JointSpinState state, double x, double efficiency, double t_over_t1) {
  const double x2 = x * x;
  const double d = 1.0 + 2.0 * x2;
  switch (state) {
    case JointSpinState::PP: return 0.0;
    case JointSpinState::PM:
    case JointSpinState::MP: return 0.25 * efficiency * x2 / d * t_over_t1;
    case JointSpinState::MM: return efficiency * (x2 + x2 * x2) / (d * d) * t_over_t1;
  }
  return 0.0;
}

void QuadratureOptions::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("quadrature dt must be positive");
  if (!(relax_cutoff > 0.0) || !(lag_cutoff > 0.0))
    throw ValidationError("quadrature cutoffs must be positive");
  if (!(convergence_tol > 0.0)) throw ValidationError("convergence tolerance must be positive");
}

CountingSeries::CountingSeries(JointSpinState state, const DriveParams& first,
                               const DriveParams& second, const DetectionModel& model,
                               double t_max, const QuadratureOptions& options)
    : state_(state) {
  first.validate();
  second.validate();
  options.validate();
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw ValidationError("t must be >= 0");
  if (options.dt > min_t1(first, second) / 20.0 * (1.0 + 1e-12))
    throw QuadratureResolution("dt = " + std::to_string(options.dt) +
                               " exceeds T1/20 = " + std::to_string(min_t1(first, second) / 20.0));

  const std::size_t n =
      t_max > 0.0 ? static_cast<std::size_t>(std::ceil(t_max / options.dt - 1e-9)) : 0;
  const double h = n > 0 ? t_max / static_cast<double>(n) : options.dt;
  dt_ = h;

  const double t1_max = std::max(first.t1, second.t1);
  const std::size_t relax =
      std::min(n, static_cast<std::size_t>(std::ceil(options.relax_cutoff * t1_max / h)));
  const std::size_t lag =
      std::min(n, static_cast<std::size_t>(std::ceil(options.lag_cutoff * t1_max / h)));

  const std::array<bool, 2> zeta = state_participation(state);
  const std::array<const DriveParams*, 2> params{&first, &second};
  std::array<Complex, 2> a{};
  for (int s = 0; s < 2; ++s)
    if (zeta[s]) a[s] = model.amp[s] * std::sqrt(params[s]->efficiency / params[s]->t1);

  const std::array<AtomTables, 2> tab{build_tables(first, zeta[0], h, relax, lag),
                                      build_tables(second, zeta[1], h, relax, lag)};

  // <D^dag D>(t_j) per unit time.
  constexpr int kRaise = static_cast<int>(Insertion::raise);
  constexpr int kLower = static_cast<int>(Insertion::lower);
  constexpr int kNumber = static_cast<int>(Insertion::number);
  auto intensity_from = [&](const std::array<Complex, 4>& e0, const std::array<Complex, 4>& e1) {
    double out = std::norm(a[0]) * e0[kNumber].real() + std::norm(a[1]) * e1[kNumber].real();
    out += 2.0 * (std::conj(a[0]) * a[1] * e0[kRaise] * e1[kLower]).real();
    return out;
  };
  const std::array<Complex, 4> unit{Complex(1.0), Complex(0.0), Complex(0.0), Complex(0.0)};
  auto expect = [&](int s, std::size_t j) -> const std::array<Complex, 4>& {
    if (!tab[s].active) return unit;
    return j <= relax ? tab[s].expect[j] : tab[s].expect_ss;
  };
  std::vector<double> intensity(n + 1);
  for (std::size_t j = 0; j <= n; ++j) intensity[j] = intensity_from(expect(0, j), expect(1, j));

  // Group the 16 operator orderings by the middle pair (s2, s3); each group
  // contracts one lag row with one sandwich vector in the product space.
  struct Group {
    std::array<int, 2> middle{};
    std::vector<std::vector<Complex>> rows;     // [k]
    std::vector<std::vector<Complex>> vectors;  // [j], j <= relax
    std::vector<Complex> vector_ss;
  };
  std::vector<Group> groups;
  std::vector<Complex> scratch;
  for (int s2 = 0; s2 < 2; ++s2) {
    for (int s3 = 0; s3 < 2; ++s3) {
      if (a[s2] == 0.0 || a[s3] == 0.0) continue;
      Group g;
      for (int atom = 0; atom < 2; ++atom)
        g.middle[atom] = static_cast<int>(middle_insertion(s2 == atom, s3 == atom));
      g.rows.resize(lag + 1);
      for (std::size_t k = 0; k <= lag; ++k) {
        const Row r0 = tab[0].active ? tab[0].rows[k][g.middle[0]] : Row::Zero();
        const Row r1 = tab[1].active ? tab[1].rows[k][g.middle[1]] : Row::Zero();
        kron_into(r0, tab[0].active, r1, tab[1].active, g.rows[k]);
      }
      auto build_vector = [&](auto&& sandwich_of, std::vector<Complex>& out) {
        out.clear();
        for (int s1 = 0; s1 < 2; ++s1) {
          for (int s4 = 0; s4 < 2; ++s4) {
            const Complex coef = std::conj(a[s1]) * std::conj(a[s2]) * a[s3] * a[s4];
            if (coef == 0.0) continue;
            const int lr0 = (s1 == 0 ? 2 : 0) + (s4 == 0 ? 1 : 0);
            const int lr1 = (s1 == 1 ? 2 : 0) + (s4 == 1 ? 1 : 0);
            const DensityVec w0 = tab[0].active ? sandwich_of(0, lr0) : DensityVec::Zero();
            const DensityVec w1 = tab[1].active ? sandwich_of(1, lr1) : DensityVec::Zero();
            kron_into(w0, tab[0].active, w1, tab[1].active, scratch);
            if (out.empty()) out.assign(scratch.size(), Complex(0.0));
            for (std::size_t i = 0; i < out.size(); ++i) out[i] += coef * scratch[i];
          }
        }
      };
      g.vectors.resize(relax + 1);
      for (std::size_t j = 0; j <= relax; ++j)
        build_vector([&](int s, int lr) { return tab[s].sandwiches[j][lr]; }, g.vectors[j]);
      build_vector([&](int s, int lr) { return tab[s].sandwich_ss[lr]; }, g.vector_ss);
      groups.push_back(std::move(g));
    }
  }

  // Connected kernel S(t_j, lag k) = <D+ D+ D D> - I(t_j) I(t_j + k h).
  auto kernel = [&](std::size_t j, std::size_t k) {
    Complex g4(0.0, 0.0);
    for (const Group& g : groups) {
      const std::vector<Complex>& v = j <= relax ? g.vectors[j] : g.vector_ss;
      const std::vector<Complex>& r = g.rows[k];
      for (std::size_t i = 0; i < v.size(); ++i) g4 += r[i] * v[i];
    }
    return g4.real() - intensity[j] * intensity[j + k];
  };

  // Inner integral over t1 in [t2 - lag, t2]; constant once t2 - lag is
  // past the relaxation cutoff.
  const std::size_t exact_until = std::min(n, relax + lag + 1);
  std::vector<double> inner(n + 1, 0.0);
  for (std::size_t i2 = 1; i2 <= exact_until; ++i2) {
    const std::size_t j0 = i2 > lag ? i2 - lag : 0;
    double acc = 0.5 * (kernel(j0, i2 - j0) + kernel(i2, 0));
    for (std::size_t j = j0 + 1; j < i2; ++j) acc += kernel(j, i2 - j);
    inner[i2] = h * acc;
  }
  if (exact_until < n) {
    double acc = 0.5 * (kernel(relax + 1, lag) + kernel(relax + 1 + lag, 0));
    for (std::size_t k = 1; k < lag; ++k) acc += kernel(relax + 1 + lag - k, k);
    std::fill(inner.begin() + static_cast<std::ptrdiff_t>(exact_until) + 1, inner.end(), h * acc);
  }

  const double background = first.background_rate / first.t1 + second.background_rate / second.t1;
  mean_ = cumulative_trapezoid(intensity, h);
  const std::vector<double> connected = cumulative_trapezoid(inner, h);
  variance_.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = h * static_cast<double>(i);
    variance_[i] = mean_[i] + 2.0 * connected[i] + background * t;
    mean_[i] += background * t;
  }

  if (options.check_convergence && n > 0) {
    QuadratureOptions half = options;
    half.dt = h / 2.0;
    half.check_convergence = false;
    const CountingSeries fine(state, first, second, model, t_max, half);
    auto close = [&](double coarse, double refined) {
      return std::abs(coarse - refined) <= options.convergence_tol * std::abs(refined) + 1e-12;
    };
    if (!close(mean_.back(), fine.mean_.back()) || !close(variance_.back(), fine.variance_.back()))
      throw QuadratureResolution("counting statistics not converged at dt = " +
                                 std::to_string(h));
  }
}

std::size_t CountingSeries::index_of(double t) const {
  const double r = t / dt_;
  const double i = std::round(r);
  if (!(i >= 0.0) || i > static_cast<double>(steps()) ||
      std::abs(r - i) > 1e-9 * std::max(1.0, r))
    throw ValidationError("t = " + std::to_string(t) + " is not a grid point");
  return static_cast<std::size_t>(i);
}

namespace {

CountingStats finish_stats(JointSpinState state, double t, double mean, double variance) {
  CountingStats out;
  out.state = state;
  out.t = t;
  out.mean = mean;
  out.variance = variance;
  if (out.variance < -1e-12 * std::max(1.0, out.mean))
    throw NonPositiveVariance("variance " + std::to_string(out.variance) + " at t = " +
                              std::to_string(out.t));
  if (out.mean > 0.0) out.q = out.variance / out.mean - 1.0;
  return out;
}

}  // namespace

CountingStats CountingSeries::stats(std::size_t i) const {
  return finish_stats(state_, time(i), mean(i), variance(i));
}

CountingStats CountingSeries::stats_at(double t) const {
  const double r = t / dt_;
  const double n = static_cast<double>(steps());
  if (!(r >= -1e-9) || r > n * (1.0 + 1e-12) + 1e-9)
    throw ValidationError("t = " + std::to_string(t) + " outside the computed range");
  const double i = std::round(r);
  if (std::abs(r - i) <= 1e-9 * std::max(1.0, r)) return stats(static_cast<std::size_t>(i));
  const auto lo = static_cast<std::size_t>(std::floor(r));
  const double w = r - static_cast<double>(lo);
  return finish_stats(state_, t, (1.0 - w) * mean_[lo] + w * mean_[lo + 1],
                      (1.0 - w) * variance_[lo] + w * variance_[lo + 1]);
}

CountingStats counting_stats(JointSpinState state, const DriveParams& first,
                             const DriveParams& second, double t, const DetectionModel& model,
                             const QuadratureOptions& options) {
  const CountingSeries series(state, first, second, model, t, options);
  return series.stats(series.steps());
}

double mean_general(JointSpinState state, const DriveParams& first, const DriveParams& second,
                    double t, const DetectionModel& model, const QuadratureOptions& options) {
  return counting_stats(state, first, second, t, model, options).mean;
}

double variance(JointSpinState state, const DriveParams& first, const DriveParams& second,
                double t, const DetectionModel& model, const QuadratureOptions& options) {
  return counting_stats(state, first, second, t, model, options).variance;
}

double mandel_q(JointSpinState state, const DriveParams& first, const DriveParams& second,
                double t, const DetectionModel& model, const QuadratureOptions& options) {
  const CountingStats s = counting_stats(state, first, second, t, model, options);
  if (!s.q) throw UndefinedQ("Mandel Q undefined: mean count is zero in state " +
                             std::string(to_string(state)));
  return *s.q;
}

}  // namespace mpent
