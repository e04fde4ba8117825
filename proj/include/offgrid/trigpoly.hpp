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

#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <span>
#include <vector>

#include "offgrid/index_set.hpp"
#include "offgrid/types.hpp"

namespace offgrid {

/// Trigonometric polynomial mu(r) = sum_{k in support} c[k] exp(j 2 pi k.r)
/// on the unit torus. Coefficients follow the support's linear order.
///
/// A real-flagged polynomial carries conjugate-symmetric coefficients
/// c[-k] = conj(c[k]); its support must be origin-symmetric.
class TrigPoly {
 public:
  TrigPoly() = default;
  /// Throws DimensionMismatch on a coefficient count mismatch and
  /// InvalidArgument when a real-flagged polynomial is not conjugate symmetric.
  TrigPoly(IndexSet2D support, std::vector<cplx> coeffs, bool real);

  /// Builds a real polynomial after projecting the coefficients onto the
  /// conjugate-symmetric subspace.
  static TrigPoly real_from(IndexSet2D support, std::vector<cplx> coeffs);

  const IndexSet2D& support() const { return support_; }
  std::span<const cplx> coeffs() const { return coeffs_; }
  cplx coeff(Index2 k) const { return support_.contains(k) ? coeffs_[support_.linear(k)] : cplx{}; }
  bool is_real() const { return real_; }
  double l1_norm() const;

  /// Exact finite sum; the imaginary part is dropped for real polynomials.
  cplx eval(Vec2 r) const;
  double eval_real(Vec2 r) const { return eval(r).real(); }

  /// (d/dx, d/dy) of the real part.
  Vec2 gradient(Vec2 r) const;
  /// Value and gradient of the real part in one pass.
  double eval_with_gradient(Vec2 r, Vec2& grad) const;

  /// mu - level, i.e. the polynomial whose zero set is {mu = level}.
  TrigPoly minus_constant(double level) const;

 private:
  IndexSet2D support_;
  std::vector<cplx> coeffs_{cplx{0.0, 0.0}};
  bool real_ = true;
};

/// Dirichlet kernel D(r) = sum_{k in lambda} exp(j 2 pi k.r), evaluated as a
/// product of two one-dimensional geometric sums.
cplx dirichlet(const IndexSet2D& lambda, Vec2 r);

/// Random real edge polynomial on an origin-symmetric support with
/// |lambda0| >= 4 (or a one-dimensional support of width >= 3). Coefficients
/// are i.i.d. complex Gaussian weighted by exp(-smoothness |k|^2) and
/// conjugate-symmetrized; the constant term is then shifted to a random
/// quantile of the polynomial's values so that both signs occur. Draws whose
/// zero set is missing or nearly singular are rejected; DegenerateDraw after
/// 100 attempts.
TrigPoly random_edge_poly(const IndexSet2D& lambda0, std::uint64_t seed, double smoothness);

/// Samples mu on the n x n grid ((i + offset.x)/n, (j + offset.y)/n); the
/// result is row-major with i (the x index) as the slow index.
std::vector<double> sample_real_on_grid(const TrigPoly& p, int n, Vec2 offset);

void to_json(nlohmann::json& j, const TrigPoly& p);
TrigPoly trigpoly_from_json(const nlohmann::json& j);

}  // namespace offgrid
