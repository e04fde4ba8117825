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

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "offgrid/error.hpp"
#include "offgrid/kernels.hpp"
#include "offgrid/trigpoly.hpp"

namespace offgrid::kernels {

namespace {

using RowMatrixXcd = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// row i holds exp(sign j 2 pi k t_i) for k = lo..hi
RowMatrixXcd exponential_table(std::span<const double> t, int lo, int hi, double sign) {
  RowMatrixXcd e(Eigen::Index(t.size()), hi - lo + 1);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(t.size()); ++i) {
    const cplx step = std::polar(1.0, sign * kTwoPi * t[i]);
    cplx v = std::polar(1.0, sign * kTwoPi * lo * t[i]);
    for (int k = lo; k <= hi; ++k) {
      e(i, k - lo) = v;
      v *= step;
    }
  }
  return e;
}

}  // namespace

namespace omp {

void sample_grid(const TrigPoly& p, int n, Vec2 offset, std::span<double> out) {
  if (out.size() != std::size_t(n) * std::size_t(n)) {
    throw Error(ErrorKind::DimensionMismatch, "sample_grid output size");
  }
  const IndexSet2D& s = p.support();
  std::vector<double> tx(n), ty(n);
  for (int i = 0; i < n; ++i) {
    tx[i] = (i + offset.x) / n;
    ty[i] = (i + offset.y) / n;
  }
  const RowMatrixXcd ex = exponential_table(tx, s.lo().x, s.hi().x, 1.0);
  const RowMatrixXcd ey = exponential_table(ty, s.lo().y, s.hi().y, 1.0);
  const Eigen::Map<const RowMatrixXcd> c(p.coeffs().data(), s.width(), s.height());
  // values(i, j) = sum_{kx, ky} ex(i, kx) c(kx, ky) ey(j, ky)
  const RowMatrixXcd values = (ex * c) * ey.transpose();
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(out.data(), n, n) =
      values.real();
}

void nudft(std::span<const Vec2> points, std::span<const cplx> weights, int channels,
           const IndexSet2D& grid, std::span<cplx> out) {
  const std::size_t m = points.size();
  if (weights.size() != m * std::size_t(channels) || out.size() != grid.size() * std::size_t(channels)) {
    throw Error(ErrorKind::DimensionMismatch, "nudft sizes");
  }
  std::vector<double> px(m), py(m);
  for (std::size_t i = 0; i < m; ++i) {
    px[i] = points[i].x;
    py[i] = points[i].y;
  }
  const RowMatrixXcd ex = exponential_table(px, grid.lo().x, grid.hi().x, -1.0);
  const RowMatrixXcd ey = exponential_table(py, grid.lo().y, grid.hi().y, -1.0);
  const Eigen::Map<const RowMatrixXcd> w(weights.data(), Eigen::Index(m), channels);
  for (int c = 0; c < channels; ++c) {
    Eigen::Map<RowMatrixXcd> dst(out.data() + std::size_t(c) * grid.size(), grid.width(), grid.height());
    dst.noalias() = ex.transpose() * (w.col(c).asDiagonal() * ey);
  }
}

void lift_apply(const LiftGeometry& geo, std::span<const cplx> g, Eigen::MatrixXcd& x) {
  if (g.size() != geo.gamma.size()) throw Error(ErrorKind::GridMismatch, "lift_apply grid");
  const auto n2 = Eigen::Index(geo.lambda2.size());
  const auto n1 = Eigen::Index(geo.lambda1.size());
  x.resize(2 * n2, n1);
  const int h2 = geo.lambda2.height();
  const int w2 = geo.lambda2.width();
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < n1; ++c) {
    const Index2 kp = geo.lambda1.at(std::size_t(c));
    Eigen::Index r = 0;
    for (int ix = 0; ix < w2; ++ix) {
      const int kx = geo.lambda2.lo().x + ix - kp.x;
      const double wx = kTwoPi * kx;
      std::size_t base = geo.gamma.linear({kx, geo.lambda2.lo().y - kp.y});
      for (int iy = 0; iy < h2; ++iy, ++r, ++base) {
        const int ky = geo.lambda2.lo().y + iy - kp.y;
        const cplx v = g[base];
        x(r, c) = wx * v;
        x(n2 + r, c) = (kTwoPi * ky) * v;
      }
    }
  }
}

void lift_adjoint(const LiftGeometry& geo, const Eigen::MatrixXcd& x, std::span<cplx> g) {
  const auto n2 = Eigen::Index(geo.lambda2.size());
  if (x.rows() != 2 * n2 || x.cols() != Eigen::Index(geo.lambda1.size()) || g.size() != geo.gamma.size()) {
    throw Error(ErrorKind::DimensionMismatch, "lift_adjoint sizes");
  }
  const IndexSet2D& l1 = geo.lambda1;
  const IndexSet2D& l2 = geo.lambda2;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < std::ptrdiff_t(geo.gamma.size()); ++idx) {
    const Index2 k = geo.gamma.at(std::size_t(idx));
    // pairs (l, k') with l - k' = k: k' ranges over lambda1 intersected with lambda2 - k
    const int x0 = std::max(l1.lo().x, l2.lo().x - k.x);
    const int x1 = std::min(l1.hi().x, l2.hi().x - k.x);
    const int y0 = std::max(l1.lo().y, l2.lo().y - k.y);
    const int y1 = std::min(l1.hi().y, l2.hi().y - k.y);
    cplx sx{}, sy{};
    for (int a = x0; a <= x1; ++a) {
      for (int b = y0; b <= y1; ++b) {
        const Index2 kp{a, b};
        const auto r = Eigen::Index(l2.linear(k + kp));
        const auto c = Eigen::Index(l1.linear(kp));
        sx += x(r, c);
        sy += x(n2 + r, c);
      }
    }
    g[std::size_t(idx)] = kTwoPi * (double(k.x) * sx + double(k.y) * sy);
  }
}

}  // namespace omp

int configure_threads_from_env() {
  if (const char* env = std::getenv("OFFGRID_THREADS")) {
    const int requested = std::atoi(env);
    if (requested > 0) omp_set_num_threads(std::min(requested, omp_get_num_procs()));
  }
  return omp_get_max_threads();
}

}  // namespace offgrid::kernels
