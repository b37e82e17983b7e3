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

#include "mpent/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "mpent/errors.hpp"

namespace mpent {
namespace {

constexpr Complex kI{0.0, 1.0};

Superoperator kron(const Density& a, const Density& b) {
  Superoperator out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

void check_times(double t1, double t2) {
  require(std::isfinite(t1) && std::isfinite(t2), "correlator times must be finite");
  require(t1 >= 0.0, "correlator requires t1 >= 0");
  require(t2 >= t1, "correlator requires t1 <= t2");
}

void check_grid(std::span<const double> grid) {
  require(!grid.empty(), "time grid is empty");
  require(grid.front() == 0.0, "time grid must start at 0");
  for (std::size_t i = 1; i < grid.size(); ++i)
    require(grid[i] > grid[i - 1], "time grid must be strictly ascending");
}

// Tr[m * Y] as a row vector acting on vec(Y).
Eigen::RowVector4cd trace_row(const Density& m) {
  return vec(m.transpose()).transpose();
}

// Hand-written Bloch equations on y = (p_e, Re coh, Im coh).
using Bloch3 = std::array<double, 3>;

Bloch3 bloch_rhs(const DriveParams& params, const Bloch3& y) {
  const double gamma = params.decay_rate();
  const double omega = params.rabi_frequency();
  const double gamma2 = 0.5 * gamma + params.dephasing * gamma;
  return {-omega * y[2] - gamma * y[0], -gamma2 * y[1],
          -0.5 * omega * (1.0 - 2.0 * y[0]) - gamma2 * y[2]};
}

}  // namespace

void DriveParams::validate() const {
  require(std::isfinite(rabi) && rabi >= 0.0, "rabi (Omega*T1) must be finite and >= 0");
  require(std::isfinite(t1) && t1 > 0.0, "t1 must be finite and > 0");
  require(std::isfinite(efficiency) && efficiency >= 0.0 && efficiency <= 1.0,
          "efficiency must lie in [0, 1]");
  require(std::isfinite(background_rate) && background_rate >= 0.0,
          "background_rate must be >= 0");
  require(std::isfinite(dephasing) && dephasing >= 0.0, "dephasing must be >= 0");
}

BlochState BlochState::from_density(const Density& rho) {
  return {rho(1, 1).real(), rho(1, 0)};
}

Density BlochState::density() const {
  Density rho;
  rho << 1.0 - p_e, std::conj(coh), coh, p_e;
  return rho;
}

bool BlochState::is_physical(double tol) const {
  return p_e >= -tol && p_e <= 1.0 + tol && std::norm(coh) <= p_e * (1.0 - p_e) + tol;
}

Density insertion_matrix(Insertion op) {
  Density m = Density::Zero();
  switch (op) {
    case Insertion::identity:
      m.setIdentity();
      break;
    case Insertion::raise:
      m(1, 0) = 1.0;
      break;
    case Insertion::lower:
      m(0, 1) = 1.0;
      break;
    case Insertion::number:
      m(1, 1) = 1.0;
      break;
  }
  return m;
}

Superoperator liouvillian(const DriveParams& params) {
  params.validate();
  const double gamma = params.decay_rate();
  const double half_omega = 0.5 * params.rabi_frequency();
  const double dephase = params.dephasing * gamma;

  const Density id = Density::Identity();
  Density h;
  h << 0.0, half_omega, half_omega, 0.0;
  const Density lower = insertion_matrix(Insertion::lower);
  const Density number = insertion_matrix(Insertion::number);
  Density sz;
  sz << -1.0, 0.0, 0.0, 1.0;

  Superoperator gen = -kI * (kron(id, h) - kron(h.transpose(), id));
  gen += gamma * (kron(lower.conjugate(), lower) - 0.5 * kron(id, number) -
                  0.5 * kron(number.transpose(), id));
  gen += 0.5 * dephase * (kron(sz, sz) - Superoperator::Identity());
  return gen;
}

BlochPropagator::BlochPropagator(const DriveParams& params) : generator_(liouvillian(params)) {}

Superoperator BlochPropagator::operator()(double tau) const {
  if (tau == 0.0) return Superoperator::Identity();
  return (generator_ * tau).exp();
}

std::vector<BlochState> evolve_bloch(const DriveParams& params, const BlochState& initial,
                                     std::span<const double> grid) {
  params.validate();
  check_grid(grid);
  require(initial.is_physical(1e-9), "initial Bloch state is not a valid density matrix");

  const BlochPropagator propagate(params);
  std::vector<BlochState> out;
  out.reserve(grid.size());
  DensityVec state = vec(initial.density());
  out.push_back(initial);

  double last_step = -1.0;
  Superoperator step;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double h = grid[i] - grid[i - 1];
    if (h != last_step) {
      step = propagate(h);
      last_step = h;
    }
    state = step * state;
    out.push_back(BlochState::from_density(unvec(state)));
  }
  return out;
}

std::vector<BlochState> evolve_bloch_adaptive(const DriveParams& params,
                                              const BlochState& initial,
                                              std::span<const double> grid,
                                              const AdaptiveOptions& options) {
  params.validate();
  check_grid(grid);
  require(initial.is_physical(1e-9), "initial Bloch state is not a valid density matrix");

  // Dormand-Prince 5(4) tableau.
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  (void)c2, (void)c3, (void)c4, (void)c5;  // autonomous system

  auto axpy = [](const Bloch3& y, std::initializer_list<std::pair<double, const Bloch3*>> terms,
                 double h) {
    Bloch3 out = y;
    for (const auto& [coef, k] : terms)
      for (int i = 0; i < 3; ++i) out[i] += h * coef * (*k)[i];
    return out;
  };

  Bloch3 y{initial.p_e, initial.coh.real(), initial.coh.imag()};
  std::vector<BlochState> out;
  out.reserve(grid.size());
  out.push_back(initial);

  double t = 0.0;
  double h = options.initial_step;
  std::size_t steps = 0;
  Bloch3 k1 = bloch_rhs(params, y);
  for (std::size_t g = 1; g < grid.size(); ++g) {
    const double target = grid[g];
    while (t < target) {
      if (++steps > options.max_steps) throw ValidationError("adaptive integrator step limit hit");
      const bool last = t + h >= target;
      const double step = last ? target - t : h;
      const Bloch3 k2 = bloch_rhs(params, axpy(y, {{a21, &k1}}, step));
      const Bloch3 k3 = bloch_rhs(params, axpy(y, {{a31, &k1}, {a32, &k2}}, step));
      const Bloch3 k4 = bloch_rhs(params, axpy(y, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, step));
      const Bloch3 k5 = bloch_rhs(
          params, axpy(y, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, step));
      const Bloch3 k6 = bloch_rhs(
          params, axpy(y, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, step));
      const Bloch3 next =
          axpy(y, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}}, step);
      const Bloch3 k7 = bloch_rhs(params, next);

      double err = 0.0;
      for (int i = 0; i < 3; ++i) {
        const double e = step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                 e6 * k6[i] + e7 * k7[i]);
        const double scale =
            options.atol + options.rtol * std::max(std::abs(y[i]), std::abs(next[i]));
        err = std::max(err, std::abs(e) / scale);
      }
      if (err <= 1.0) {
        t = last ? target : t + step;
        y = next;
        k1 = k7;
      }
      const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      if (!last || err > 1.0) h = step * factor;
    }
    out.push_back({y[0], {y[1], y[2]}});
  }
  return out;
}

BlochState steady_state(const DriveParams& params) {
  params.validate();
  const double gamma = params.decay_rate();
  const double omega = params.rabi_frequency();
  const double gamma2 = 0.5 * gamma + params.dephasing * gamma;
  const double p = omega * omega / (2.0 * gamma2 * gamma + 2.0 * omega * omega);
  return {p, Complex(0.0, -0.5 * omega * (1.0 - 2.0 * p) / gamma2)};
}

Complex two_time(const DriveParams& params, Sandwich sandwich, double t1, double t2) {
  check_times(t1, t2);
  const BlochPropagator propagate(params);
  const Density rho1 = unvec(propagate(t1) * vec(BlochState::ground().density()));
  const Density inserted =
      insertion_matrix(sandwich.right) * rho1 * insertion_matrix(sandwich.left);
  const DensityVec evolved = propagate(t2 - t1) * vec(inserted);
  return (trace_row(insertion_matrix(sandwich.middle)) * evolved).value();
}

Complex dipole(const DriveParams& params, double t) {
  return two_time(params, {Insertion::identity, Insertion::lower, Insertion::identity}, 0.0, t);
}

Complex correlator_ee(const DriveParams& params, double t1, double t2) {
  return two_time(params, {Insertion::raise, Insertion::lower, Insertion::identity}, t1, t2);
}

double correlator_g2(const DriveParams& params, double t1, double t2) {
  return two_time(params, {Insertion::raise, Insertion::number, Insertion::lower}, t1, t2).real();
}

MixedCorrelators mixed_correlators(const DriveParams& params, double t1, double t2) {
  check_times(t1, t2);
  using enum Insertion;
  return {
      dipole(params, t1),
      dipole(params, t2),
      two_time(params, {raise, lower, identity}, t1, t2),
      two_time(params, {identity, number, lower}, t1, t2),
      two_time(params, {raise, number, identity}, t1, t2),
      two_time(params, {raise, raise, identity}, t1, t2),
      two_time(params, {identity, lower, lower}, t1, t2),
  };
}

CorrelationKernel::CorrelationKernel(double dt, std::size_t steps)
    : dt_(dt), steps_(steps), values_((steps + 1) * (steps + 2) / 2) {
  require(std::isfinite(dt) && dt > 0.0, "kernel step must be > 0");
}

Complex CorrelationKernel::at(std::size_t i, std::size_t j) const {
  require(i <= j && j <= steps_, "kernel index outside the lower triangle");
  return values_[j * (j + 1) / 2 + i];
}

Complex& CorrelationKernel::at(std::size_t i, std::size_t j) {
  require(i <= j && j <= steps_, "kernel index outside the lower triangle");
  return values_[j * (j + 1) / 2 + i];
}

CorrelationKernel tabulate(const DriveParams& params, Sandwich sandwich, double t_max,
                           double dt) {
  require(std::isfinite(t_max) && t_max >= 0.0, "kernel t_max must be >= 0");
  require(std::isfinite(dt) && dt > 0.0, "kernel step must be > 0");
  const auto steps = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
  const double h = steps == 0 ? dt : t_max / static_cast<double>(steps);
  CorrelationKernel kernel(h, steps);

  const BlochPropagator propagate(params);
  const Superoperator step = propagate(h);
  const Density left = insertion_matrix(sandwich.left);
  const Density right = insertion_matrix(sandwich.right);

  std::vector<DensityVec> inserted(steps + 1);
  std::vector<Eigen::RowVector4cd> readout(steps + 1);
  DensityVec rho = vec(BlochState::ground().density());
  Eigen::RowVector4cd row = trace_row(insertion_matrix(sandwich.middle));
  for (std::size_t k = 0; k <= steps; ++k) {
    inserted[k] = vec(right * unvec(rho) * left);
    readout[k] = row;
    rho = step * rho;
    row = row * step;
  }
  for (std::size_t j = 0; j <= steps; ++j)
    for (std::size_t i = 0; i <= j; ++i) kernel.at(i, j) = (readout[j - i] * inserted[i]).value();
  return kernel;
}

}  // namespace mpent
