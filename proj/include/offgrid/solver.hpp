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
#include <nlohmann/json_fwd.hpp>
#include <vector>

#include "offgrid/lifting.hpp"
#include "offgrid/phantom.hpp"

namespace offgrid {

struct SolverConfig {
  /// Augmented-Lagrangian penalty; 0 picks 1 / max |data|.
  double beta = 0.0;
  int max_iters = 1000;
  double tol_primal = 1e-7;
  /// Bound on the relative change of g between iterations.
  double tol_change = 1e-7;
  /// Noise-ball radius; 0 means equality constraints.
  double delta = 0.0;
  /// Residual balancing: beta is doubled or halved when one residual
  /// exceeds the other tenfold, at most `max_beta_updates` times.
  bool adaptive_beta = true;
  int max_beta_updates = 10;
  /// ADMM over-relaxation factor in (0, 2); 1 is the plain iteration.
  double relaxation = 1.0;
  /// Eigen-decomposition of the smaller Gram matrix instead of a full SVD.
  bool gram_svd = true;

  void validate() const;
};

struct SolveReport {
  FourierGrid recovered;
  int iterations = 0;
  std::vector<double> primal_residuals;
  std::vector<double> objective;
  bool converged = false;
  double wall_time = 0.0;
  double final_beta = 0.0;
  /// ||P_Omega(g - data)||_2 at exit.
  double data_residual = 0.0;
};

/// Singular value thresholding U max(S - tau, 0) V^*. `nuclear` receives the
/// nuclear norm of the result when non-null.
Eigen::MatrixXcd svt(const Eigen::MatrixXcd& x, double tau, double* nuclear = nullptr);
/// Same map via the eigen-decomposition of the smaller Gram matrix.
Eigen::MatrixXcd svt_gram(const Eigen::MatrixXcd& x, double tau, double* nuclear = nullptr);

/// min ||T(g)||_* s.t. g = data on the mask. Throws MissingDC if k = 0 is unsampled.
SolveReport solve_equality(const LiftOperator& op, const FourierGrid& samples, const SolverConfig& cfg);
/// min ||T(g)||_* s.t. ||P_Omega(g - data)||_2 <= cfg.delta; the DC sample is held fixed.
SolveReport solve_noisy(const LiftOperator& op, const FourierGrid& samples, const SolverConfig& cfg);

/// ||a - ref|| / ||ref|| over the grid, optionally skipping k = 0.
double relative_error(const FourierGrid& a, const FourierGrid& ref, bool skip_dc = true);

void to_json(nlohmann::json& j, const SolverConfig& c);
void from_json(const nlohmann::json& j, SolverConfig& c);
void to_json(nlohmann::json& j, const SolveReport& r);

}  // namespace offgrid
