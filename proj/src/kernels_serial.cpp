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

#include "offgrid/error.hpp"
#include "offgrid/kernels.hpp"
#include "offgrid/trigpoly.hpp"

namespace offgrid::kernels::serial {

void sample_grid(const TrigPoly& p, int n, Vec2 offset, std::span<double> out) {
  if (out.size() != std::size_t(n) * std::size_t(n)) {
    throw Error(ErrorKind::DimensionMismatch, "sample_grid output size");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vec2 r{(i + offset.x) / n, (j + offset.y) / n};
      out[std::size_t(i) * n + j] = p.eval_real(r);
    }
  }
}

void nudft(std::span<const Vec2> points, std::span<const cplx> weights, int channels,
           const IndexSet2D& grid, std::span<cplx> out) {
  const std::size_t m = points.size();
  if (weights.size() != m * std::size_t(channels) || out.size() != grid.size() * std::size_t(channels)) {
    throw Error(ErrorKind::DimensionMismatch, "nudft sizes");
  }
  std::fill(out.begin(), out.end(), cplx{});
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const Index2 k = grid.at(idx);
    for (std::size_t i = 0; i < m; ++i) {
      const cplx e = std::polar(1.0, -kTwoPi * (k.x * points[i].x + k.y * points[i].y));
      for (int c = 0; c < channels; ++c) {
        out[std::size_t(c) * grid.size() + idx] += weights[i * channels + c] * e;
      }
    }
  }
}

void lift_apply(const LiftGeometry& geo, std::span<const cplx> g, Eigen::MatrixXcd& x) {
  if (g.size() != geo.gamma.size()) throw Error(ErrorKind::GridMismatch, "lift_apply grid");
  const auto n2 = Eigen::Index(geo.lambda2.size());
  x.setZero(2 * n2, Eigen::Index(geo.lambda1.size()));
  for (std::size_t r = 0; r < geo.lambda2.size(); ++r) {
    const Index2 l = geo.lambda2.at(r);
    for (std::size_t c = 0; c < geo.lambda1.size(); ++c) {
      const Index2 k = l - geo.lambda1.at(c);
      const cplx v = g[geo.gamma.linear(k)];
      x(Eigen::Index(r), Eigen::Index(c)) = kTwoPi * k.x * v;
      x(n2 + Eigen::Index(r), Eigen::Index(c)) = kTwoPi * k.y * v;
    }
  }
}

void lift_adjoint(const LiftGeometry& geo, const Eigen::MatrixXcd& x, std::span<cplx> g) {
  const auto n2 = Eigen::Index(geo.lambda2.size());
  if (x.rows() != 2 * n2 || x.cols() != Eigen::Index(geo.lambda1.size()) || g.size() != geo.gamma.size()) {
    throw Error(ErrorKind::DimensionMismatch, "lift_adjoint sizes");
  }
  std::fill(g.begin(), g.end(), cplx{});
  for (std::size_t r = 0; r < geo.lambda2.size(); ++r) {
    const Index2 l = geo.lambda2.at(r);
    for (std::size_t c = 0; c < geo.lambda1.size(); ++c) {
      const Index2 k = l - geo.lambda1.at(c);
      g[geo.gamma.linear(k)] += kTwoPi * (double(k.x) * x(Eigen::Index(r), Eigen::Index(c)) +
                                          double(k.y) * x(n2 + Eigen::Index(r), Eigen::Index(c)));
    }
  }
}

}  // namespace offgrid::kernels::serial
