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

#include <catch_amalgamated.hpp>
#include <nlohmann/json.hpp>
#include <random>

#include "offgrid/error.hpp"
#include "offgrid/solver.hpp"

using namespace offgrid;

namespace {

double nuclear_norm(const Eigen::MatrixXcd& m) { return Eigen::BDCSVD<Eigen::MatrixXcd>(m).singularValues().sum(); }

double prox_objective(const Eigen::MatrixXcd& z, const Eigen::MatrixXcd& x, double tau) {
  return tau * nuclear_norm(z) + 0.5 * (z - x).squaredNorm();
}

struct StripeProblem {
  LiftOperator op{IndexSet2D::centered(7), IndexSet2D::centered(2)};
  FourierGrid truth = fourier_coeffs(stripe_phantom(), op.gamma());
  FourierGrid samples = with_uniform_mask(truth, std::size_t(0.6 * double(op.gamma().size())), 7);
};

}  // namespace

TEST_CASE("singular value thresholding") {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(2, 2);
  expect(0, 0) = 1.0;
  CHECK((svt(d, 2.0) - expect).norm() < 1e-14);
  CHECK((svt_gram(d, 2.0) - expect).norm() < 1e-14);

  std::mt19937_64 gen(5);
  std::normal_distribution<double> n;
  Eigen::MatrixXcd x(12, 7);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = {n(gen), n(gen)};
  CHECK((svt(x, 0.0) - x).norm() < 1e-12 * x.norm());
  CHECK((svt_gram(x.transpose(), 1.3) - svt(x.transpose(), 1.3)).norm() < 1e-10 * x.norm());
  CHECK_THROWS_AS(svt(x, -1.0), Error);

  const double tau = 1.7;
  double nuc = 0.0;
  const Eigen::MatrixXcd z = svt(x, tau, &nuc);
  CHECK(std::abs(nuc - nuclear_norm(z)) < 1e-10 * nuc);
  CHECK((svt_gram(x, tau) - z).norm() < 1e-10 * x.norm());
  const double best = prox_objective(z, x, tau);
  for (int t = 0; t < 100; ++t) {
    Eigen::MatrixXcd p(x.rows(), x.cols());
    const double scale = std::pow(10.0, -3.0 + 3.0 * t / 100.0);
    for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = {n(gen), n(gen)};
    CHECK(best <= prox_objective(z + scale * p, x, tau) + 1e-12);
  }
}

TEST_CASE("full sampling is exact") {
  StripeProblem p;
  FourierGrid full = p.truth;
  full.mask.assign(full.grid.size(), 1);
  const auto rep = solve_equality(p.op, full, SolverConfig{});
  CHECK(rep.converged);
  CHECK(rep.iterations == 1);
  CHECK(relative_error(rep.recovered, p.truth) < 1e-10);
}

TEST_CASE("stripe recovery from 60 percent of the samples") {
  StripeProblem p;
  const auto rep = solve_equality(p.op, p.samples, SolverConfig{});
  CHECK(rep.converged);
  const double err = relative_error(rep.recovered, p.truth);
  CHECK(err < 1e-3);

  SolverConfig ref_cfg;
  ref_cfg.max_iters = 5000;
  ref_cfg.tol_primal = 1e-10;
  ref_cfg.tol_change = 1e-10;
  const auto ref = solve_equality(p.op, p.samples, ref_cfg);
  CHECK(relative_error(ref.recovered, p.truth) < 1e-3);
  CHECK(relative_error(rep.recovered, ref.recovered) < 1e-3);

  // Data constraint holds bit-exactly.
  for (std::size_t i = 0; i < p.samples.grid.size(); ++i) {
    if (p.samples.mask[i]) CHECK(rep.recovered.values[i] == p.samples.values[i]);
  }
  // Residual history ends below tolerance; the objective is finite and nonnegative.
  CHECK(rep.primal_residuals.back() < SolverConfig{}.tol_primal);
  for (double v : rep.objective) CHECK((std::isfinite(v) && v >= 0.0));

  // The final lifted estimate is structured.
  const Eigen::MatrixXcd x = p.op.apply(rep.recovered.values);
  CHECK(p.op.project_antistructured(x).norm() < 10 * SolverConfig{}.tol_primal * x.norm());

  SolverConfig relaxed;
  relaxed.relaxation = 1.6;
  const auto fast = solve_equality(p.op, p.samples, relaxed);
  CHECK(fast.converged);
  CHECK(relative_error(fast.recovered, p.truth) < 1e-3);
}

TEST_CASE("solver argument checks") {
  StripeProblem p;
  FourierGrid no_dc = p.samples;
  no_dc.mask[no_dc.grid.linear({0, 0})] = 0;
  try {
    solve_equality(p.op, no_dc, SolverConfig{});
    FAIL("expected MissingDC");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingDC);
  }
  SolverConfig bad;
  bad.tol_primal = 0.0;
  CHECK_THROWS_AS(solve_equality(p.op, p.samples, bad), Error);
  SolverConfig noisy;
  noisy.delta = 0.1;
  CHECK_THROWS_AS(solve_equality(p.op, p.samples, noisy), Error);
  FourierGrid unmasked = p.truth;
  CHECK_THROWS_AS(solve_equality(p.op, unmasked, SolverConfig{}), Error);
}

TEST_CASE("noise-ball solve") {
  StripeProblem p;
  const auto eq = solve_equality(p.op, p.samples, SolverConfig{});
  const auto zero = solve_noisy(p.op, p.samples, SolverConfig{});
  CHECK(relative_error(zero.recovered, eq.recovered, false) < 1e-10);

  std::mt19937_64 gen(11);
  std::normal_distribution<double> n;
  const double gamma_size = double(p.op.gamma().size());
  for (double delta : {1e-4, 1e-3, 1e-2}) {
    FourierGrid noisy = p.samples;
    std::vector<cplx> eta(noisy.grid.size());
    double norm = 0.0;
    for (std::size_t i = 0; i < eta.size(); ++i) {
      if (noisy.mask[i] && noisy.grid.at(i) != Index2{0, 0}) {
        eta[i] = {n(gen), n(gen)};
        norm += std::norm(eta[i]);
      }
    }
    for (std::size_t i = 0; i < eta.size(); ++i) noisy.values[i] += eta[i] * (delta / std::sqrt(norm));
    SolverConfig cfg;
    cfg.delta = delta;
    const auto rep = solve_noisy(p.op, noisy, cfg);
    CHECK(rep.data_residual <= delta * (1.0 + 1e-8));
    const Eigen::MatrixXcd diff = p.op.apply(rep.recovered.values) - p.op.apply(p.truth.values);
    CHECK(diff.norm() <= 5.0 * gamma_size * gamma_size * delta);
  }

  // A huge ball only asks for feasibility.
  SolverConfig wide;
  wide.delta = 1e3;
  const auto loose = solve_noisy(p.op, p.samples, wide);
  CHECK(loose.data_residual <= wide.delta * (1.0 + 1e-8));
  CHECK(loose.recovered[{0, 0}] == p.samples[{0, 0}]);
}

TEST_CASE("solver json") {
  SolverConfig c;
  c.beta = 2.0;
  c.relaxation = 1.5;
  const nlohmann::json j = c;
  SolverConfig d = j.get<SolverConfig>();
  CHECK(d.beta == 2.0);
  CHECK(d.relaxation == 1.5);
  CHECK_THROWS_AS(nlohmann::json::parse(R"({"relaxation": 2.5})").get<SolverConfig>(), Error);

  StripeProblem p;
  const nlohmann::json r = solve_equality(p.op, p.samples, SolverConfig{});
  CHECK(r.at("primal_residuals").size() == r.at("iterations").get<std::size_t>());
  CHECK(r.at("converged").get<bool>());
}
