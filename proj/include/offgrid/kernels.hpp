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

#pragma once

// Data-parallel inner loops. Each kernel has a plain serial reference used
// by the tests and the benchmark, and an OpenMP version used by the library.

#include <Eigen/Dense>
#include <span>

#include "offgrid/index_set.hpp"
#include "offgrid/types.hpp"

namespace offgrid {

class TrigPoly;

namespace kernels {

/// Index sets defining a lifting: rows are (block, l in lambda2), columns
/// k' in lambda1, entry index l - k' in gamma.
struct LiftGeometry {
  IndexSet2D gamma;
  IndexSet2D lambda1;
  IndexSet2D lambda2;
};

namespace serial {

/// out[i*n + j] = Re mu((i + offset.x)/n, (j + offset.y)/n).
void sample_grid(const TrigPoly& p, int n, Vec2 offset, std::span<double> out);

/// out[c*|grid| + idx(k)] = sum_i weights[i*channels + c] exp(-j 2 pi k.r_i).
void nudft(std::span<const Vec2> points, std::span<const cplx> weights, int channels,
           const IndexSet2D& grid, std::span<cplx> out);

void lift_apply(const LiftGeometry& geo, std::span<const cplx> g, Eigen::MatrixXcd& x);
void lift_adjoint(const LiftGeometry& geo, const Eigen::MatrixXcd& x, std::span<cplx> g);

}  // namespace serial

namespace omp {

void sample_grid(const TrigPoly& p, int n, Vec2 offset, std::span<double> out);
void nudft(std::span<const Vec2> points, std::span<const cplx> weights, int channels,
           const IndexSet2D& grid, std::span<cplx> out);
void lift_apply(const LiftGeometry& geo, std::span<const cplx> g, Eigen::MatrixXcd& x);
void lift_adjoint(const LiftGeometry& geo, const Eigen::MatrixXcd& x, std::span<cplx> g);

}  // namespace omp

/// Caps the OpenMP team size from OFFGRID_THREADS when set; returns the
/// resulting thread count.
int configure_threads_from_env();

}  // namespace kernels
}  // namespace offgrid
