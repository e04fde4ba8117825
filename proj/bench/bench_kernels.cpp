// Copyright 2026 The offgrid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>

#include "offgrid/kernels.hpp"
#include "offgrid/phantom.hpp"
#include "offgrid/solver.hpp"

using namespace offgrid;

namespace {

std::vector<cplx> random_vector(std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> d;
  std::vector<cplx> v(n);
  for (auto& z : v) z = {d(gen), d(gen)};
  return v;
}

kernels::LiftGeometry geometry(int gamma_k, int k) {
  const IndexSet2D gamma = IndexSet2D::centered(gamma_k);
  const IndexSet2D l1 = IndexSet2D::centered(k);
  return {gamma, l1, contraction(gamma, l1)};
}

template <auto Kernel>
void BM_SampleGrid(benchmark::State& state) {
  const TrigPoly p = random_edge_poly(IndexSet2D::centered(2), 1, 0.1);
  const int n = int(state.range(0));
  std::vector<double> out(std::size_t(n) * n);
  for (auto _ : state) {
    Kernel(p, n, Vec2{0.5, 0.5}, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <auto Kernel>
void BM_Nudft(benchmark::State& state) {
  const Phantom ph = make_phantom(random_edge_poly(IndexSet2D::centered(1), 2, 0.1));
  std::vector<cplx> w(ph.curve.size() * 2);
  for (std::size_t i = 0; i < ph.curve.size(); ++i) {
    w[2 * i] = ph.curve.normals[i].x * ph.curve.ds[i];
    w[2 * i + 1] = ph.curve.normals[i].y * ph.curve.ds[i];
  }
  const IndexSet2D grid = IndexSet2D::centered(int(state.range(0)));
  std::vector<cplx> out(grid.size() * 2);
  for (auto _ : state) {
    Kernel(ph.curve.points, w, 2, grid, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <auto Kernel>
void BM_LiftApply(benchmark::State& state) {
  const auto geo = geometry(16, int(state.range(0)));
  const auto g = random_vector(geo.gamma.size(), 3);
  Eigen::MatrixXcd x;
  for (auto _ : state) {
    Kernel(geo, g, x);
    benchmark::DoNotOptimize(x.data());
  }
}

template <auto Kernel>
void BM_LiftAdjoint(benchmark::State& state) {
  const auto geo = geometry(16, int(state.range(0)));
  Eigen::MatrixXcd x;
  kernels::serial::lift_apply(geo, random_vector(geo.gamma.size(), 4), x);
  std::vector<cplx> g(geo.gamma.size());
  for (auto _ : state) {
    Kernel(geo, x, g);
    benchmark::DoNotOptimize(g.data());
  }
}

template <Eigen::MatrixXcd (*Svt)(const Eigen::MatrixXcd&, double, double*)>
void BM_Svt(benchmark::State& state) {
  const auto geo = geometry(16, int(state.range(0)));
  Eigen::MatrixXcd x;
  kernels::serial::lift_apply(geo, random_vector(geo.gamma.size(), 5), x);
  for (auto _ : state) benchmark::DoNotOptimize(Svt(x, 1.0, nullptr).data());
}

}  // namespace

BENCHMARK(BM_SampleGrid<kernels::serial::sample_grid>)->Name("sample_grid/serial")->Arg(128)->Arg(512);
BENCHMARK(BM_SampleGrid<kernels::omp::sample_grid>)->Name("sample_grid/omp")->Arg(128)->Arg(512);
BENCHMARK(BM_Nudft<kernels::serial::nudft>)->Name("nudft/serial")->Arg(7)->Arg(16);
BENCHMARK(BM_Nudft<kernels::omp::nudft>)->Name("nudft/omp")->Arg(7)->Arg(16);
BENCHMARK(BM_LiftApply<kernels::serial::lift_apply>)->Name("lift_apply/serial")->Arg(3)->Arg(7);
BENCHMARK(BM_LiftApply<kernels::omp::lift_apply>)->Name("lift_apply/omp")->Arg(3)->Arg(7);
BENCHMARK(BM_LiftAdjoint<kernels::serial::lift_adjoint>)->Name("lift_adjoint/serial")->Arg(3)->Arg(7);
BENCHMARK(BM_LiftAdjoint<kernels::omp::lift_adjoint>)->Name("lift_adjoint/omp")->Arg(3)->Arg(7);
BENCHMARK(BM_Svt<svt>)->Name("svt/bdcsvd")->Arg(3)->Arg(7)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Svt<svt_gram>)->Name("svt/gram")->Arg(3)->Arg(7)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  kernels::configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
