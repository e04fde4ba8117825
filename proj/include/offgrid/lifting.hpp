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

#include <Eigen/Dense>
#include <iosfwd>
#include <span>
#include <vector>

#include "offgrid/index_set.hpp"
#include "offgrid/kernels.hpp"
#include "offgrid/phantom.hpp"

namespace offgrid {

/// g -> T(g) = [T_x(g); T_y(g)], the stacked weighted block-Toeplitz lifting.
///
/// Rows run over Lambda2 = Gamma : Lambda1 (x block, then y block), columns
/// over Lambda1; entry (l, k') of the x block is 2 pi (l - k')_x g[l - k'].
class LiftOperator {
 public:
  LiftOperator(IndexSet2D gamma, IndexSet2D lambda1);

  const IndexSet2D& gamma() const { return geo_.gamma; }
  const IndexSet2D& lambda1() const { return geo_.lambda1; }
  const IndexSet2D& lambda2() const { return geo_.lambda2; }
  const kernels::LiftGeometry& geometry() const { return geo_; }
  Eigen::Index rows() const { return 2 * Eigen::Index(geo_.lambda2.size()); }
  Eigen::Index cols() const { return Eigen::Index(geo_.lambda1.size()); }

  /// #{(l, k') in Lambda2 x Lambda1 : l - k' = k}, per block.
  int omega(Index2 k) const { return gamma().contains(k) ? omega_[gamma().linear(k)] : 0; }
  std::span<const int> omega() const { return omega_; }
  /// 2 pi |k| sqrt(omega(k)); zero at k = 0.
  double weight(Index2 k) const { return weights_[gamma().linear(k)]; }
  std::span<const double> weights() const { return weights_; }

  Eigen::MatrixXcd build_matrix(const FourierGrid& g) const;
  Eigen::MatrixXcd apply(std::span<const cplx> g) const;
  void apply(std::span<const cplx> g, Eigen::MatrixXcd& out) const;
  std::vector<cplx> adjoint(const Eigen::MatrixXcd& x) const;
  FourierGrid adjoint_grid(const Eigen::MatrixXcd& x) const;

  /// Unit-norm basis element A_k; throws DCIndex for k = 0.
  Eigen::MatrixXcd basis_matrix(Index2 k) const;
  /// <A_k, X> for every k (zero at k = 0).
  std::vector<cplx> basis_coefficients(const Eigen::MatrixXcd& x) const;

  Eigen::MatrixXcd project_structured(const Eigen::MatrixXcd& x) const;
  Eigen::MatrixXcd project_antistructured(const Eigen::MatrixXcd& x) const;

  /// Q_Omega(X) = (n / |Omega|) A_Omega(X) + A_perp(X) with n = |Gamma| - 1.
  /// `samples` is a multiset of nonzero indices of Gamma.
  Eigen::MatrixXcd sampling_operator(std::span<const Index2> samples, const Eigen::MatrixXcd& x) const;

 private:
  void check_grid(std::size_t n) const;

  kernels::LiftGeometry geo_;
  std::vector<int> omega_;
  std::vector<double> weights_;
};

/// Debug dump: "LMAT", u32 rows, u32 cols, then row-major float64 (re, im) pairs.
void write_lmat(std::ostream& out, const Eigen::MatrixXcd& m);
Eigen::MatrixXcd read_lmat(std::istream& in);

}  // namespace offgrid
