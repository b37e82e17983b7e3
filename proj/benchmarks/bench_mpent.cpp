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


#include <benchmark/benchmark.h>

#include "mpent/counting.hpp"
#include "mpent/network.hpp"
#include "mpent/trajectories.hpp"

namespace {

mpent::DriveParams drive(double x) {
  mpent::DriveParams p;
  p.rabi = x;
  return p;
}

void BM_NetworkBuild(benchmark::State& state) {
  const mpent::ModeNetwork net = mpent::ModeNetwork::standard();
  for (auto _ : state) benchmark::DoNotOptimize(mpent::build_network(net, 0.5, 1.0));
}
BENCHMARK(BM_NetworkBuild);

void BM_BlochPropagator(benchmark::State& state) {
  const mpent::BlochPropagator prop(drive(3.0));
  double tau = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(prop(tau));
    tau += 1e-6;
  }
}
BENCHMARK(BM_BlochPropagator);

// Full mean/variance series up to t = range(0) T1 for the MM state.
void BM_CountingSeries(benchmark::State& state) {
  const mpent::DriveParams p = drive(3.0);
  const mpent::DetectionModel m = mpent::build_network(mpent::ModeNetwork::standard());
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(mpent::CountingSeries(mpent::JointSpinState::MM, p, p, m, t));
}
BENCHMARK(BM_CountingSeries)->Arg(100)->Arg(200)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

// 1000 trajectories of length range(0) T1, single thread.
void BM_Trajectories(benchmark::State& state) {
  const mpent::DriveParams p = drive(1.0);
  const mpent::DetectionModel m = mpent::build_network(mpent::ModeNetwork::standard());
  mpent::TrajectoryOptions o;
  o.n_traj = 1000;
  o.threads = 1;
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(mpent::simulate(mpent::JointSpinState::MM, p, p, m, t, o));
  state.SetItemsProcessed(state.iterations() * o.n_traj);
}
BENCHMARK(BM_Trajectories)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_EmpiricalDistribution(benchmark::State& state) {
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] = static_cast<std::uint32_t>(i % 37);
  for (auto _ : state) benchmark::DoNotOptimize(mpent::empirical_distribution(counts, 100));
}
BENCHMARK(BM_EmpiricalDistribution)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
