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

#include "offgrid/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <numeric>
#include <random>

#include "offgrid/error.hpp"
#include "offgrid/rng.hpp"

namespace offgrid {
namespace {

double torus_distance(Vec2 a, Vec2 b) { return min_image(a - b).norm(); }

std::vector<std::size_t> farthest_point_seed(const CurveDiscretization& curve, std::size_t start, std::size_t count) {
  const std::size_t n = curve.size();
  std::vector<std::size_t> chosen{start};
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) dist[i] = torus_distance(curve.points[i], curve.points[start]);
  while (chosen.size() < count) {
    const auto far = std::size_t(std::max_element(dist.begin(), dist.end()) - dist.begin());
    if (dist[far] <= 0.0) break;
    chosen.push_back(far);
    for (std::size_t i = 0; i < n; ++i) {
      dist[i] = std::min(dist[i], torus_distance(curve.points[i], curve.points[far]));
    }
  }
  return chosen;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m) { return Eigen::BDCSVD<Eigen::MatrixXcd>(m).singularValues(); }

Eigen::MatrixXcd orthonormal_basis(const Eigen::MatrixXcd& a) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU);
  const Eigen::VectorXd& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > 1e-10 * s(0)) ++r;
  return svd.matrixU().leftCols(r);
}

}  // namespace

NodeSet nodes_from_indices(const CurveDiscretization& curve, std::vector<std::size_t> idx) {
  NodeSet out;
  out.points.reserve(idx.size());
  for (std::size_t i : idx) {
    if (i >= curve.size()) throw Error(ErrorKind::InvalidArgument, "node index outside the curve");
    out.points.push_back(curve.points[i]);
  }
  out.curve_index = std::move(idx);
  return out;
}

Eigen::MatrixXcd e_row(const NodeSet& nodes, const IndexSet2D& lambda) {
  const double scale = 1.0 / std::sqrt(double(lambda.size()));
  Eigen::MatrixXcd e(Eigen::Index(lambda.size()), Eigen::Index(nodes.size()));
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const Vec2 r = nodes.points[j];
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      const Index2 k = lambda.at(i);
      e(Eigen::Index(i), Eigen::Index(j)) = std::polar(scale, -kTwoPi * (k.x * r.x + k.y * r.y));
    }
  }
  return e;
}

Eigen::MatrixXcd gram(const NodeSet& nodes, const IndexSet2D& lambda) {
  const auto n = Eigen::Index(nodes.size());
  const double scale = 1.0 / double(lambda.size());
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    g(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      g(i, j) = scale * dirichlet(lambda, nodes.points[std::size_t(i)] - nodes.points[std::size_t(j)]);
      g(j, i) = std::conj(g(i, j));
    }
  }
  return g;
}

double lambda_min(const Eigen::MatrixXcd& hermitian) {
  if (hermitian.size() == 0) throw Error(ErrorKind::DimensionMismatch, "empty matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(hermitian, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw Error(ErrorKind::SvdFailure, "eigenvalue solver failed");
  return eig.eigenvalues()(0);
}

NodeSet select_admissible(const CurveDiscretization& curve, const IndexSet2D& lambda, std::size_t count,
                          std::size_t extra) {
  if (count == 0 || count > lambda.size()) {
    throw Error(ErrorKind::AdmissibleSelectionFailed, "node count exceeds the frequency set");
  }
  if (curve.size() < count + extra) throw Error(ErrorKind::AdmissibleSelectionFailed, "curve has too few points");
  const auto candidates = nodes_from_indices(curve, farthest_point_seed(curve, 0, count + extra));
  if (candidates.size() < count) throw Error(ErrorKind::AdmissibleSelectionFailed, "too few distinct points");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(e_row(candidates, lambda));
  std::vector<std::size_t> idx(count);
  for (std::size_t j = 0; j < count; ++j) {
    idx[j] = candidates.curve_index[std::size_t(qr.colsPermutation().indices()(Eigen::Index(j)))];
  }
  auto nodes = nodes_from_indices(curve, std::move(idx));
  const Eigen::VectorXd s = singular_values(e_row(nodes, lambda));
  if (!(s(s.size() - 1) >= 1e-10 * s(0))) {
    throw Error(ErrorKind::AdmissibleSelectionFailed, "selected nodes are not unisolvent");
  }
  return nodes;
}

NodeSet select_admissible(const CurveDiscretization& curve, const IndexSet2D& lambda1, const IndexSet2D& lambda0) {
  return select_admissible(curve, lambda1, rank_bound(lambda1, lambda0), lambda0.size());
}

IncoherenceResult incoherence_upper_bound(const CurveDiscretization& curve, const IndexSet2D& lambda1,
                                          const IndexSet2D& lambda0, int restarts, std::uint64_t seed, int swaps) {
  if (restarts < 1 || swaps < 0) throw Error(ErrorKind::InvalidArgument, "restarts must be positive");
  if (curve.empty()) throw Error(ErrorKind::UntracedCurve, "empty curve");
  const std::size_t r = rank_bound(lambda1, lambda0);
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  IncoherenceResult best;
  best.rho_hat = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < restarts; ++restart) {
    const double phase = std::fmod(golden * restart, 1.0);
    const auto start = std::min(curve.size() - 1, std::size_t(phase * double(curve.size())));
    auto idx = farthest_point_seed(curve, start, r);
    if (idx.size() < r) continue;
    double lmin = lambda_min(gram(nodes_from_indices(curve, idx), lambda1));
    std::mt19937_64 gen(derive_seed(seed, {std::uint64_t(restart)}));
    std::uniform_int_distribution<std::size_t> pick_slot(0, r - 1);
    std::uniform_int_distribution<std::size_t> pick_point(0, curve.size() - 1);
    for (int s = 0; s < swaps; ++s) {
      const std::size_t slot = pick_slot(gen);
      const std::size_t old = idx[slot];
      idx[slot] = pick_point(gen);
      const double trial = lambda_min(gram(nodes_from_indices(curve, idx), lambda1));
      if (trial > lmin) {
        lmin = trial;
      } else {
        idx[slot] = old;
      }
    }
    if (lmin > 0.0 && 1.0 / lmin < best.rho_hat) {
      best.rho_hat = 1.0 / lmin;
      best.lambda_min = lmin;
      best.nodes = nodes_from_indices(curve, idx);
    }
  }
  if (!std::isfinite(best.rho_hat)) {
    throw Error(ErrorKind::AdmissibleSelectionFailed, "no restart produced a unisolvent node set");
  }
  return best;
}

double coordinate_separation(const NodeSet& nodes) {
  double delta = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const Vec2 d = min_image(nodes.points[i] - nodes.points[j]);
      delta = std::min(delta, std::min(std::abs(d.x), std::abs(d.y)));
    }
  }
  return delta;
}

double separation_bound(const NodeSet& nodes, const IndexSet2D& lambda1) {
  const double t = std::sqrt(double(lambda1.size())) * coordinate_separation(nodes);
  if (!(t > 1.0)) throw Error(ErrorKind::SeparationTooSmall, "sqrt|Lambda1| * separation must exceed 1");
  if (std::isinf(t)) return 1.0;
  const double b = 1.0 - 1.0 / t;
  return 1.0 / (b * b);
}

QuadratureWeights quadrature_weights(const CurveDiscretization& curve, const NodeSet& nodes, const IndexSet2D& lambda) {
  if (curve.empty()) throw Error(ErrorKind::UntracedCurve, "empty curve");
  const auto s = Eigen::Index(nodes.size());
  if (s == 0) throw Error(ErrorKind::InvalidArgument, "no quadrature nodes");
  Eigen::MatrixXcd d(s, s);
  for (Eigen::Index i = 0; i < s; ++i) {
    for (Eigen::Index j = 0; j < s; ++j) {
      d(i, j) = dirichlet(lambda, nodes.points[std::size_t(i)] - nodes.points[std::size_t(j)]);
    }
  }
  Eigen::MatrixXcd v(s, 2);
  for (Eigen::Index i = 0; i < s; ++i) {
    const Vec2 ri = nodes.points[std::size_t(i)];
    const auto [vx, vy] = curve_integral(curve, [&](Vec2 r) { return dirichlet(lambda, r - ri); });
    v(i, 0) = vx;
    v(i, 1) = vy;
  }
  // gamma = sum_i a_i D(. - r_i) + phi mu0 with D a = gamma(P), so the integral
  // is gamma(P)^T D^{-T} V.
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(d.transpose(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (!(sv(s - 1) > 0.0) || sv(0) / sv(s - 1) > 1e12) {
    throw Error(ErrorKind::IllConditionedD, "Dirichlet interpolation matrix is ill-conditioned");
  }
  const Eigen::MatrixXcd w = svd.solve(v);
  QuadratureWeights out{nodes, lambda, {}};
  out.w.resize(nodes.size());
  for (Eigen::Index i = 0; i < s; ++i) out.w[std::size_t(i)] = {w(i, 0), w(i, 1)};
  return out;
}

std::array<cplx, 2> apply_quadrature(const QuadratureWeights& q, const TrigPoly& gamma) {
  std::array<cplx, 2> sum{};
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    const cplx g = gamma.eval(q.nodes.points[i]);
    sum[0] += g * q.w[i][0];
    sum[1] += g * q.w[i][1];
  }
  return sum;
}

Eigen::MatrixXcd e_col(const QuadratureWeights& weights, const IndexSet2D& lambda2) {
  const Eigen::MatrixXcd base = e_row(weights.nodes, lambda2);
  const Eigen::Index n2 = base.rows();
  Eigen::MatrixXcd e(2 * n2, base.cols());
  for (Eigen::Index j = 0; j < base.cols(); ++j) {
    const auto& w = weights.w[std::size_t(j)];
    const double norm = std::sqrt(std::norm(w[0]) + std::norm(w[1]));
    if (!(norm > 0.0)) throw Error(ErrorKind::ZeroWeightVector, "quadrature weight vanishes");
    e.col(j).head(n2) = base.col(j) * (w[0] / norm);
    e.col(j).tail(n2) = base.col(j) * (w[1] / norm);
  }
  return e;
}

Eigen::VectorXd principal_angles(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "principal angles need equal row counts");
  const Eigen::MatrixXcd qa = orthonormal_basis(a);
  const Eigen::MatrixXcd qb = orthonormal_basis(b);
  Eigen::VectorXd c = singular_values(qa.adjoint() * qb);
  Eigen::VectorXd out(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) out(i) = std::acos(std::clamp(c(i), -1.0, 1.0));
  return out;
}

double containment_angle(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "containment angle needs equal row counts");
  const Eigen::MatrixXcd qa = orthonormal_basis(a);
  const Eigen::MatrixXcd qb = orthonormal_basis(b);
  const Eigen::MatrixXcd resid = qa - qb * (qb.adjoint() * qa);
  const Eigen::VectorXd s = singular_values(resid);
  return std::asin(std::clamp(s.size() ? s(0) : 0.0, 0.0, 1.0));
}

CoherenceReport coherence_check(const LiftOperator& op, const FourierGrid& f, std::size_t rank, double rho_hat) {
  const Eigen::MatrixXcd x = op.build_matrix(f);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const auto r = Eigen::Index(rank);
  if (r < 1 || r > s.size()) throw Error(ErrorKind::InvalidArgument, "rank outside the matrix dimensions");
  CoherenceReport rep;
  rep.rank = rank;
  rep.spectral_gap = r < s.size() ? s(r - 1) / s(r) : std::numeric_limits<double>::infinity();
  if (!(rep.spectral_gap > 1e4)) throw Error(ErrorKind::NoSpectralGap, "no clear gap after the requested rank");
  const Eigen::MatrixXcd u = svd.matrixU().leftCols(r);
  const Eigen::MatrixXcd v = svd.matrixV().leftCols(r);
  const IndexSet2D& gamma = op.gamma();
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const Index2 k = gamma.at(i);
    if (k == Index2{0, 0}) continue;
    const Eigen::MatrixXcd a = op.basis_matrix(k);
    rep.max_pu = std::max(rep.max_pu, (u.adjoint() * a).squaredNorm());
    rep.max_pv = std::max(rep.max_pv, (a * v).squaredNorm());
  }
  rep.rho_hat = rho_hat;
  rep.c_s = double(gamma.size()) / double(op.lambda1().size());
  rep.bound = rho_hat * double(rank) * rep.c_s / double(gamma.size());
  return rep;
}

std::size_t bkk_bound(const TrigPoly& mu0, const TrigPoly& mu1) {
  const IndexSet2D lambda1 = hull(mu0.support(), mu1.support());
  return rank_bound(lambda1, mu0.support()) + mu0.support().size();
}

std::size_t bkk_intersection_check(const TrigPoly& mu0, const TrigPoly& mu1, int grid_n) {
  if (!mu0.is_real() || !mu1.is_real()) throw Error(ErrorKind::InvalidArgument, "edge polynomials must be real");
  const std::size_t bound = bkk_bound(mu0, mu1);
  const CurveDiscretization curve = trace_zero_set(mu0, grid_n, 1e-14);
  const double floor = 1e-8 * mu1.l1_norm();
  double peak = 0.0;
  std::size_t changes = 0;
  for (std::size_t l = 0; l < curve.loop_count(); ++l) {
    const std::size_t b = curve.loop_offsets[l];
    const std::size_t e = curve.loop_offsets[l + 1];
    for (std::size_t i = b; i < e; ++i) {
      const double v0 = mu1.eval_real(curve.points[i]);
      const double v1 = mu1.eval_real(curve.points[i + 1 < e ? i + 1 : b]);
      peak = std::max(peak, std::abs(v0));
      if ((v0 < 0.0) != (v1 < 0.0)) ++changes;
    }
  }
  if (peak < floor) throw Error(ErrorKind::SharedFactorSuspected, "second polynomial vanishes on the curve");
  if (changes >= bound) {
    throw Error(ErrorKind::SharedFactorSuspected, "intersection count reaches the filter dimension bound");
  }
  return changes;
}

void to_json(nlohmann::json& j, const CoherenceReport& r) {
  j = nlohmann::json{{"rank", r.rank},     {"spectral_gap", r.spectral_gap},
                     {"max_pu", r.max_pu}, {"max_pv", r.max_pv},
                     {"rho_hat", r.rho_hat}, {"c_s", r.c_s},
                     {"bound", r.bound},   {"holds", r.holds()}};
}

void to_json(nlohmann::json& j, const IncoherenceResult& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const Vec2& p : r.nodes.points) pts.push_back({p.x, p.y});
  j = nlohmann::json{{"rho_hat", r.rho_hat}, {"lambda_min", r.lambda_min}, {"nodes", pts}};
}

}  // namespace offgrid
