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

#include <iosfwd>
#include <vector>

#include "offgrid/trigpoly.hpp"
#include "offgrid/types.hpp"

namespace offgrid {

/// Ordered samples of the zero set {mu = 0} of a real trigonometric
/// polynomial. Points are grouped into closed loops on the torus:
/// loop i spans [loop_offsets[i], loop_offsets[i+1]).
///
/// normals[i] = grad mu / |grad mu|, i.e. pointing out of {mu < 0}.
/// ds[i] are arc-length quadrature weights, so sum_i g(p_i) n_i ds_i
/// approximates the curve integral of g n.
struct CurveDiscretization {
  std::vector<Vec2> points;
  std::vector<Vec2> normals;
  std::vector<double> ds;
  std::vector<std::size_t> loop_offsets{0};
  TrigPoly parent;
  /// Gauss nodes per polyline segment; 0 for a plain polyline trace.
  int quadrature_order = 0;

  std::size_t size() const { return points.size(); }
  std::size_t loop_count() const { return loop_offsets.size() - 1; }
  bool empty() const { return points.empty(); }
  double length() const;
};

/// Marching squares on the periodic n x n sample grid, each crossing refined
/// by safeguarded Newton along its cell edge until |mu| < refine_tol * |c|_1.
/// Crossings are linked into closed loops; ds comes from the polyline
/// (half of each adjacent segment) and normals from the gradient.
///
/// Throws NoZeroSet when the grid shows no sign change and SingularPoint when
/// |grad mu| < 1e-9 |c|_1 at a refined point.
CurveDiscretization trace_zero_set(const TrigPoly& p, int grid_n, double refine_tol);

/// Replaces each polyline segment of a trace by `order` Gauss-Legendre nodes
/// projected onto the curve, giving curve integrals that converge at the
/// rate of the Gauss rule instead of the polyline's second order.
CurveDiscretization gauss_quadrature(const CurveDiscretization& trace, int order = 8,
                                     double refine_tol = 1e-14);

/// Area of {mu < 0}, from the divergence theorem applied loop by loop.
double enclosed_area(const CurveDiscretization& curve);

/// sum_i f(p_i) n_i ds_i for a scalar callable f.
template <class F>
std::pair<cplx, cplx> curve_integral(const CurveDiscretization& curve, F&& f) {
  cplx sx{}, sy{};
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const cplx v = f(curve.points[i]) * curve.ds[i];
    sx += v * curve.normals[i].x;
    sy += v * curve.normals[i].y;
  }
  return {sx, sy};
}

/// CSV with header x,y,nx,ny,ds.
void write_curve_csv(std::ostream& out, const CurveDiscretization& curve);

}  // namespace offgrid
