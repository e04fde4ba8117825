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

#include "offgrid/solver.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <chrono>
#include <nlohmann/json.hpp>

#include "offgrid/error.hpp"

namespace offgrid {

void SolverConfig::validate() const {
  if (beta < 0.0 || !std::isfinite(beta)) throw Error(ErrorKind::InvalidArgument, "beta must be positive (or 0 for auto)");
  if (max_iters < 1) throw Error(ErrorKind::InvalidArgument, "max_iters must be >= 1");
  for (double t : {tol_primal, tol_change}) {
    if (!(t > 0.0 && t < 1.0)) throw Error(ErrorKind::InvalidArgument, "tolerances must lie in (0, 1)");
  }
  if (!(relaxation > 0.0 && relaxation < 2.0)) throw Error(ErrorKind::InvalidArgument, "relaxation must lie in (0, 2)");
  if (delta < 0.0 || !std::isfinite(delta)) throw Error(ErrorKind::InvalidArgument, "delta must be >= 0");
}

Eigen::MatrixXcd svt(const Eigen::MatrixXcd& x, double tau, double* nuclear) {
  if (tau < 0.0) throw Error(ErrorKind::InvalidArgument, "svt threshold must be >= 0");
  if (!x.allFinite()) throw Error(ErrorKind::SvdFailure, "non-finite input to svt");
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw Error(ErrorKind::SvdFailure, "SVD did not converge");
  const Eigen::VectorXd s = (svd.singularValues().array() - tau).max(0.0);
  if (nuclear) *nuclear = s.sum();
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().adjoint();
}

Eigen::MatrixXcd svt_gram(const Eigen::MatrixXcd& x, double tau, double* nuclear) {
  if (tau < 0.0) throw Error(ErrorKind::InvalidArgument, "svt threshold must be >= 0");
  if (!x.allFinite()) throw Error(ErrorKind::SvdFailure, "non-finite input to svt");
  const bool tall = x.rows() >= x.cols();
  const Eigen::Index m = tall ? x.cols() : x.rows();
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(m, m);
  if (tall) {
    gram.selfadjointView<Eigen::Lower>().rankUpdate(x.adjoint());
  } else {
    gram.selfadjointView<Eigen::Lower>().rankUpdate(x);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
  if (eig.info() != Eigen::Success) throw Error(ErrorKind::SvdFailure, "Gram eigen-decomposition failed");
  const Eigen::VectorXd sigma = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  // Keep only the components that survive the threshold.
  std::vector<Eigen::Index> keep;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > tau) {
      keep.push_back(i);
      sum += sigma(i) - tau;
    }
  }
  if (nuclear) *nuclear = sum;
  if (keep.empty()) return Eigen::MatrixXcd::Zero(x.rows(), x.cols());
  Eigen::MatrixXcd v(gram.rows(), Eigen::Index(keep.size()));
  Eigen::VectorXd shrink(Eigen::Index(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    v.col(Eigen::Index(j)) = eig.eigenvectors().col(keep[j]);
    shrink(Eigen::Index(j)) = (sigma(keep[j]) - tau) / sigma(keep[j]);
  }
  if (tall) return (x * v) * shrink.asDiagonal() * v.adjoint();
  return v * shrink.asDiagonal() * (v.adjoint() * x);
}

double relative_error(const FourierGrid& a, const FourierGrid& ref, bool skip_dc) {
  if (!(a.grid == ref.grid)) throw Error(ErrorKind::GridMismatch, "relative_error grids differ");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (skip_dc && a.grid.at(i) == Index2{0, 0}) continue;
    num += std::norm(a.values[i] - ref.values[i]);
    den += std::norm(ref.values[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

namespace {

double norm2(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const cplx& z : v) s += std::norm(z);
  return std::sqrt(s);
}

SolveReport run_admm(const LiftOperator& op, const FourierGrid& samples, const SolverConfig& cfg, bool ball) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const IndexSet2D& gamma = op.gamma();
  if (!(samples.grid == gamma)) throw Error(ErrorKind::GridMismatch, "samples are not on the lifting grid");
  if (!samples.has_mask()) throw Error(ErrorKind::InvalidArgument, "samples carry no mask");
  if (!gamma.contains(Index2{0, 0}) || !samples.mask[gamma.linear({0, 0})]) {
    throw Error(ErrorKind::MissingDC, "the DC coefficient must be sampled");
  }

  const std::size_t n = gamma.size();
  const std::size_t dc = gamma.linear({0, 0});
  const std::span<const double> w = op.weights();
  std::vector<cplx> g(n);
  double data_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (samples.mask[i]) {
      g[i] = samples.values[i];
      data_max = std::max(data_max, std::abs(g[i]));
    }
  }
  double beta = cfg.beta > 0.0 ? cfg.beta : (data_max > 0.0 ? 1.0 / data_max : 1.0);
  int beta_updates = 0;

  SolveReport rep;
  Eigen::MatrixXcd tg = op.apply(g);
  if (!ball && std::all_of(samples.mask.begin(), samples.mask.end(), [](std::uint8_t m) { return m != 0; })) {
    // Fully determined: the constraint fixes g.
    double nuc = 0.0;
    (void)svt(tg, 0.0, &nuc);
    rep.iterations = 1;
    rep.converged = true;
    rep.primal_residuals.push_back(0.0);
    rep.objective.push_back(nuc);
    rep.recovered = samples;
    rep.final_beta = beta;
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
  }
  Eigen::MatrixXcd lam = Eigen::MatrixXcd::Zero(op.rows(), op.cols());
  Eigen::MatrixXcd x;
  std::vector<cplx> g_prev(n);
  for (int it = 1; it <= cfg.max_iters; ++it) {
    double nuc = 0.0;
    const Eigen::MatrixXcd target = tg - lam / beta;
    x = cfg.gram_svd ? svt_gram(target, 1.0 / beta, &nuc) : svt(target, 1.0 / beta, &nuc);

    g_prev = g;
    const Eigen::MatrixXcd xr = cfg.relaxation == 1.0 ? x : Eigen::MatrixXcd(cfg.relaxation * x + (1.0 - cfg.relaxation) * tg);
    const std::vector<cplx> back = op.adjoint(xr + lam / beta);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == dc) continue;
      if (!samples.mask[i] || ball) g[i] = back[i] / (w[i] * w[i]);
    }
    if (ball) {
      double dist = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (samples.mask[i]) dist += std::norm(g[i] - samples.values[i]);
      }
      dist = std::sqrt(dist);
      const double t = dist > cfg.delta ? cfg.delta / dist : 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (samples.mask[i]) g[i] = samples.values[i] + t * (g[i] - samples.values[i]);
      }
    }

    const Eigen::MatrixXcd tg_prev = std::move(tg);
    tg = op.apply(g);
    const Eigen::MatrixXcd r = x - tg;
    lam += beta * (xr - tg);

    const double tg_norm = tg.norm();
    const double primal = r.norm() / std::max(1.0, tg_norm);
    std::vector<cplx> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = g[i] - g_prev[i];
    const double change = norm2(diff) / std::max(1.0, norm2(g));
    rep.primal_residuals.push_back(primal);
    rep.objective.push_back(nuc);
    rep.iterations = it;
    if (!std::isfinite(primal)) throw Error(ErrorKind::SvdFailure, "solver diverged");
    if (primal < cfg.tol_primal && change < cfg.tol_change) {
      rep.converged = true;
      break;
    }

    if (cfg.adaptive_beta && beta_updates < cfg.max_beta_updates) {
      const double rp = r.norm();
      const double rd = beta * (tg - tg_prev).norm();
      if (rp > 10.0 * rd) {
        beta *= 2.0;
        ++beta_updates;
      } else if (rd > 10.0 * rp) {
        beta /= 2.0;
        ++beta_updates;
      }
    }
  }

  rep.recovered = FourierGrid(gamma, samples.real);
  rep.recovered.values = g;
  rep.recovered.mask = samples.mask;
  rep.final_beta = beta;
  double dres = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (samples.mask[i]) dres += std::norm(g[i] - samples.values[i]);
  }
  rep.data_residual = std::sqrt(dres);
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace

SolveReport solve_equality(const LiftOperator& op, const FourierGrid& samples, const SolverConfig& cfg) {
  if (cfg.delta != 0.0) throw Error(ErrorKind::InvalidArgument, "equality solve needs delta = 0");
  return run_admm(op, samples, cfg, false);
}

SolveReport solve_noisy(const LiftOperator& op, const FourierGrid& samples, const SolverConfig& cfg) {
  return run_admm(op, samples, cfg, true);
}

void to_json(nlohmann::json& j, const SolverConfig& c) {
  j = {{"beta", c.beta},           {"max_iters", c.max_iters},         {"tol_primal", c.tol_primal},
       {"tol_change", c.tol_change}, {"delta", c.delta},                 {"adaptive_beta", c.adaptive_beta},
       {"max_beta_updates", c.max_beta_updates}, {"relaxation", c.relaxation}, {"gram_svd", c.gram_svd}};
}

void from_json(const nlohmann::json& j, SolverConfig& c) {
  SolverConfig d;
  c.beta = j.value("beta", d.beta);
  c.max_iters = j.value("max_iters", d.max_iters);
  c.tol_primal = j.value("tol_primal", d.tol_primal);
  c.tol_change = j.value("tol_change", d.tol_change);
  c.delta = j.value("delta", d.delta);
  c.adaptive_beta = j.value("adaptive_beta", d.adaptive_beta);
  c.max_beta_updates = j.value("max_beta_updates", d.max_beta_updates);
  c.relaxation = j.value("relaxation", d.relaxation);
  c.gram_svd = j.value("gram_svd", d.gram_svd);
  c.validate();
}

void to_json(nlohmann::json& j, const SolveReport& r) {
  j = {{"iterations", r.iterations},
       {"converged", r.converged},
       {"wall_time_s", r.wall_time},
       {"final_beta", r.final_beta},
       {"data_residual", r.data_residual},
       {"primal_residuals", r.primal_residuals},
       {"objective", r.objective},
       {"recovered", r.recovered}};
}

}  // namespace offgrid
