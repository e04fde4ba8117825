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
#include <array>
#include <nlohmann/json_fwd.hpp>
#include <vector>

#include "offgrid/curve.hpp"
#include "offgrid/lifting.hpp"

namespace offgrid {

/// Points on a traced curve, remembered by their index in the source curve.
struct NodeSet {
  std::vector<Vec2> points;
  std::vector<std::size_t> curve_index;

  std::size_t size() const { return points.size(); }
};

NodeSet nodes_from_indices(const CurveDiscretization& curve, std::vector<std::size_t> idx);

struct QuadratureWeights {
  NodeSet nodes;
  IndexSet2D lambda;
  /// One (w_x, w_y) pair per node.
  std::vector<std::array<cplx, 2>> w;
};

/// |Lambda| x R, column j = exp(-j 2 pi k . r_j) / sqrt|Lambda| over k in Lambda.
/// The sign matches the lifting's convolution order, so the columns span the
/// row space of T(f-hat) and are orthogonal to the annihilating filters.
Eigen::MatrixXcd e_row(const NodeSet& nodes, const IndexSet2D& lambda);

/// G(P) = E_row^* E_row, i.e. D_Lambda(r_i - r_j) / |Lambda|.
Eigen::MatrixXcd gram(const NodeSet& nodes, const IndexSet2D& lambda);

double lambda_min(const Eigen::MatrixXcd& hermitian);

/// Farthest-point seeding of `count + |Lambda0|` candidates, then
/// column-pivoted QR on e_row to keep `count` of them.
NodeSet select_admissible(const CurveDiscretization& curve, const IndexSet2D& lambda, std::size_t count,
                          std::size_t extra);
/// The R = |Lambda1| - |Lambda1:Lambda0| node version.
NodeSet select_admissible(const CurveDiscretization& curve, const IndexSet2D& lambda1, const IndexSet2D& lambda0);

struct IncoherenceResult {
  double rho_hat = 0.0;
  double lambda_min = 0.0;
  NodeSet nodes;
};

/// Feasible-point upper bound on min_P 1/lambda_min[G(P)]: the best of
/// `restarts` farthest-point seedings improved by swap search. Restart r is
/// fixed by (r, seed), so the result is non-increasing in `restarts`.
IncoherenceResult incoherence_upper_bound(const CurveDiscretization& curve, const IndexSet2D& lambda1,
                                          const IndexSet2D& lambda0, int restarts, std::uint64_t seed = 0,
                                          int swaps = 200);

/// Smallest coordinate-wise torus separation min_{i != j} min(|dx|, |dy|).
double coordinate_separation(const NodeSet& nodes);

/// (1 - 1/(sqrt|Lambda1| Delta))^-2. Throws SeparationTooSmall when sqrt|Lambda1| Delta <= 1.
double separation_bound(const NodeSet& nodes, const IndexSet2D& lambda1);

/// Weights reproducing the curve integral of gamma n ds for gamma in B_Lambda.
QuadratureWeights quadrature_weights(const CurveDiscretization& curve, const NodeSet& nodes, const IndexSet2D& lambda);

/// sum_i gamma(r_i) w_i.
std::array<cplx, 2> apply_quadrature(const QuadratureWeights& q, const TrigPoly& gamma);

/// 2|Lambda2| x R weighted basis; throws ZeroWeightVector on a vanishing w_i.
Eigen::MatrixXcd e_col(const QuadratureWeights& weights, const IndexSet2D& lambda2);

/// Principal angles (radians, ascending) between the column spans of a and b.
Eigen::VectorXd principal_angles(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// Largest angle between span(a) and its projection onto span(b); zero iff span(a) is inside span(b).
double containment_angle(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

struct CoherenceReport {
  std::size_t rank = 0;
  double spectral_gap = 0.0;
  double max_pu = 0.0;
  double max_pv = 0.0;
  double rho_hat = 0.0;
  double c_s = 0.0;
  double bound = 0.0;
  bool holds() const { return max_pu <= bound && max_pv <= bound; }
};

/// max_k ||P_U A_k||_F^2 and ||P_V A_k||_F^2 against rho_hat R c_s / |Gamma|.
/// Throws NoSpectralGap when sigma_R / sigma_{R+1} <= 1e4.
CoherenceReport coherence_check(const LiftOperator& op, const FourierGrid& f, std::size_t rank, double rho_hat);

/// Isolated common zeros of mu0 and mu1, counted as sign changes of mu1 along
/// {mu0 = 0}. Throws SharedFactorSuspected when mu1 vanishes on the curve or
/// the count reaches R + |Lambda0| with Lambda1 the hull of both supports.
std::size_t bkk_intersection_check(const TrigPoly& mu0, const TrigPoly& mu1, int grid_n);
std::size_t bkk_bound(const TrigPoly& mu0, const TrigPoly& mu1);

void to_json(nlohmann::json& j, const CoherenceReport& r);
void to_json(nlohmann::json& j, const IncoherenceResult& r);

}  // namespace offgrid
