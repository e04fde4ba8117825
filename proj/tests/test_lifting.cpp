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
#include <random>
#include <sstream>

#include "offgrid/error.hpp"
#include "offgrid/lifting.hpp"

using namespace offgrid;

namespace {

std::vector<cplx> random_coeffs(std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> d;
  std::vector<cplx> v(n);
  for (auto& z : v) z = {d(gen), d(gen)};
  return v;
}

Eigen::MatrixXcd random_matrix(Eigen::Index r, Eigen::Index c, unsigned seed) {
  const auto v = random_coeffs(std::size_t(r * c), seed);
  return Eigen::Map<const Eigen::MatrixXcd>(v.data(), r, c);
}

cplx inner(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a.conjugate().cwiseProduct(b)).sum(); }

// Direct entry-by-entry construction with explicit loops over (l, k').
Eigen::MatrixXcd build_by_definition(const IndexSet2D& gamma, const IndexSet2D& l1, const IndexSet2D& l2,
                                     const std::vector<cplx>& g) {
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(2 * Eigen::Index(l2.size()), Eigen::Index(l1.size()));
  for (std::size_t r = 0; r < l2.size(); ++r) {
    for (std::size_t c = 0; c < l1.size(); ++c) {
      const Index2 k = l2.at(r) - l1.at(c);
      const cplx v = g[gamma.linear(k)];
      t(Eigen::Index(r), Eigen::Index(c)) = kTwoPi * k.x * v;
      t(Eigen::Index(l2.size() + r), Eigen::Index(c)) = kTwoPi * k.y * v;
    }
  }
  return t;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m) { return Eigen::BDCSVD<Eigen::MatrixXcd>(m).singularValues(); }

}  // namespace

TEST_CASE("lifting geometry and multiplicities") {
  const LiftOperator op(IndexSet2D::centered(7), IndexSet2D::centered(3));
  CHECK(op.lambda2() == IndexSet2D::centered(4));
  CHECK(op.omega({0, 0}) == 49);
  CHECK(op.omega({7, 7}) == 1);
  CHECK(op.weight({0, 0}) == 0.0);

  long total = 0;
  for (std::size_t i = 0; i < op.gamma().size(); ++i) {
    const Index2 k = op.gamma().at(i);
    // Pair-counting oracle.
    int count = 0;
    for (std::size_t a = 0; a < op.lambda2().size(); ++a) {
      for (std::size_t b = 0; b < op.lambda1().size(); ++b) count += (op.lambda2().at(a) - op.lambda1().at(b)) == k;
    }
    CHECK(op.omega(k) == count);
    CHECK(op.omega(k) >= 1);
    CHECK(op.omega(-k) == op.omega(k));
    total += op.omega(k);
  }
  CHECK(total == long(op.lambda1().size() * op.lambda2().size()));
}

TEST_CASE("explicit matrix matches the definition") {
  const IndexSet2D gamma({-4, -3}, {5, 4});
  const IndexSet2D l1({-1, -2}, {2, 1});
  const LiftOperator op(gamma, l1);
  const auto g = random_coeffs(gamma.size(), 1);
  FourierGrid fg(gamma, false);
  fg.values = g;
  const Eigen::MatrixXcd t = op.build_matrix(fg);
  CHECK((t - build_by_definition(gamma, l1, op.lambda2(), g)).norm() == 0.0);

  Eigen::MatrixXcd s;
  kernels::serial::lift_apply(op.geometry(), g, s);
  CHECK((t - s).norm() == 0.0);

  FourierGrid wrong(IndexSet2D::centered(2), false);
  CHECK_THROWS_AS(op.build_matrix(wrong), Error);
}

TEST_CASE("impulse with a single filter tap") {
  const LiftOperator op(IndexSet2D::centered(2), IndexSet2D{});
  std::vector<cplx> g(op.gamma().size());
  g[op.gamma().linear({1, -2})] = 1.0;
  const auto t = op.apply(g);
  REQUIRE(t.cols() == 1);
  CHECK(t.rows() == 2 * 25);
  const auto r = Eigen::Index(op.lambda2().linear({1, -2}));
  CHECK(t(r, 0) == cplx(kTwoPi));
  CHECK(t(25 + r, 0) == cplx(-2 * kTwoPi));
  CHECK(std::abs(t.cwiseAbs().sum() - 3 * kTwoPi) < 1e-12);
}

TEST_CASE("Frobenius identity, adjoint and normal operator") {
  const LiftOperator op(IndexSet2D::centered(6, 5), IndexSet2D::centered(2, 3));
  const auto g = random_coeffs(op.gamma().size(), 2);
  const auto t = op.apply(g);
  double expect = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    expect += op.omega(op.gamma().at(i)) * std::pow(kTwoPi, 2) * double(op.gamma().at(i).squared_norm()) * std::norm(g[i]);
  }
  CHECK(std::abs(t.squaredNorm() - expect) <= 1e-12 * expect);

  const auto x = random_matrix(op.rows(), op.cols(), 3);
  const auto tx = op.adjoint(x);
  cplx rhs{};
  for (std::size_t i = 0; i < g.size(); ++i) rhs += std::conj(g[i]) * tx[i];
  const cplx lhs = inner(t, x);
  CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));

  std::vector<cplx> ser(g.size());
  kernels::serial::lift_adjoint(op.geometry(), x, ser);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(ser[i] - tx[i]) <= 1e-12 * (1.0 + std::abs(tx[i])));

  const auto tt = op.adjoint(t);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = op.omega(op.gamma().at(i)) * std::pow(kTwoPi, 2) * double(op.gamma().at(i).squared_norm());
    CHECK(std::abs(tt[i] - d * g[i]) <= 1e-12 * (1.0 + std::abs(d * g[i])));
    CHECK(std::abs(std::pow(op.weights()[i], 2) - d) <= 1e-9 * (1.0 + d));
  }

  const auto zero = op.adjoint(Eigen::MatrixXcd::Zero(op.rows(), op.cols()));
  CHECK(std::all_of(zero.begin(), zero.end(), [](cplx z) { return z == cplx{}; }));
  CHECK_THROWS_AS(op.adjoint(Eigen::MatrixXcd::Zero(3, 3)), Error);
}

TEST_CASE("orthonormal sampling basis") {
  const LiftOperator op(IndexSet2D::centered(3), IndexSet2D::centered(1));
  CHECK_THROWS_AS(op.basis_matrix({0, 0}), Error);
  std::vector<Eigen::MatrixXcd> basis;
  for (std::size_t i = 0; i < op.gamma().size(); ++i) {
    const Index2 k = op.gamma().at(i);
    if (k == Index2{0, 0}) continue;
    basis.push_back(op.basis_matrix(k));
    CHECK(std::abs(basis.back().norm() - 1.0) < 1e-14);
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < basis.size(); ++a) {
    for (std::size_t b = a + 1; b < basis.size(); ++b) worst = std::max(worst, std::abs(inner(basis[a], basis[b])));
  }
  CHECK(worst == 0.0);

  // Entries are k_i / (|k| sqrt(omega)) on the support of k.
  const Index2 k{2, -1};
  const auto a = op.basis_matrix(k);
  const double expect = 2.0 / std::sqrt(5.0 * op.omega(k));
  const auto r = Eigen::Index(op.lambda2().linear(k + Index2{0, 0}));
  CHECK(std::abs(a(r, Eigen::Index(op.lambda1().linear({0, 0}))) - expect) < 1e-14);

  // T(g) = sum_k g[k] w[k] A_k.
  const auto g = random_coeffs(op.gamma().size(), 4);
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(op.rows(), op.cols());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (op.gamma().at(i) != Index2{0, 0}) sum += g[i] * op.weights()[i] * op.basis_matrix(op.gamma().at(i));
  }
  CHECK((sum - op.apply(g)).norm() < 1e-12 * sum.norm());
}

TEST_CASE("structured projections") {
  const LiftOperator op(IndexSet2D::centered(5, 4), IndexSet2D::centered(2, 1));
  const auto g = random_coeffs(op.gamma().size(), 5);
  const auto t = op.apply(g);
  CHECK((op.project_structured(t) - t).norm() < 1e-13 * t.norm());

  const auto x = random_matrix(op.rows(), op.cols(), 6);
  const auto ax = op.project_structured(x);
  CHECK((op.project_structured(ax) - ax).norm() < 1e-13 * x.norm());
  const auto perp = op.project_antistructured(x);
  CHECK(std::abs(inner(ax, perp)) < 1e-12 * x.squaredNorm());
  CHECK((ax + perp - x).norm() < 1e-14 * x.norm());
}

TEST_CASE("sampling operator") {
  const LiftOperator op(IndexSet2D::centered(2), IndexSet2D::centered(1));
  const auto x = random_matrix(op.rows(), op.cols(), 7);

  std::vector<Index2> all;
  for (std::size_t i = 0; i < op.gamma().size(); ++i) {
    if (op.gamma().at(i) != Index2{0, 0}) all.push_back(op.gamma().at(i));
  }
  const auto t = op.apply(random_coeffs(op.gamma().size(), 8));
  CHECK((op.sampling_operator(all, t) - t).norm() < 1e-13 * t.norm());
  CHECK((op.sampling_operator(all, x) - x).norm() < 1e-13 * x.norm());
  CHECK((op.sampling_operator({}, x) - op.project_antistructured(x)).norm() == 0.0);
  const std::vector<Index2> with_dc{{0, 0}};
  CHECK_THROWS_AS(op.sampling_operator(with_dc, x), Error);

  // Monte-Carlo mean over uniform draws with replacement.
  constexpr int kDraws = 10000;
  const std::size_t m = 8;
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
  Eigen::MatrixXcd mean = Eigen::MatrixXcd::Zero(x.rows(), x.cols());
  Eigen::MatrixXd var_re = Eigen::MatrixXd::Zero(x.rows(), x.cols());
  Eigen::MatrixXd var_im = var_re;
  std::vector<Index2> omega(m);
  for (int d = 0; d < kDraws; ++d) {
    for (auto& k : omega) k = all[pick(gen)];
    const Eigen::MatrixXcd q = op.sampling_operator(omega, x);
    mean += q;
    var_re += (q - x).real().cwiseAbs2();
    var_im += (q - x).imag().cwiseAbs2();
  }
  mean /= double(kDraws);
  const Eigen::MatrixXd se_re = (var_re / double(kDraws) - (mean - x).real().cwiseAbs2()).cwiseMax(0.0).cwiseSqrt() / std::sqrt(double(kDraws));
  const Eigen::MatrixXd se_im = (var_im / double(kDraws) - (mean - x).imag().cwiseAbs2()).cwiseMax(0.0).cwiseSqrt() / std::sqrt(double(kDraws));
  int outside = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      outside += std::abs(mean(i, j).real() - x(i, j).real()) > 3 * se_re(i, j) + 1e-12;
      outside += std::abs(mean(i, j).imag() - x(i, j).imag()) > 3 * se_im(i, j) + 1e-12;
    }
  }
  // Each real coordinate leaves 3 sigma with probability 0.27%.
  CHECK(outside <= std::max(2, int(0.01 * 2 * x.size())));
}

TEST_CASE("stripe phantom rank and annihilation") {
  const auto ph = stripe_phantom();
  const LiftOperator op(IndexSet2D::centered(4), IndexSet2D::centered(1));
  const auto t = op.build_matrix(fourier_coeffs(ph, op.gamma()));
  const auto s = singular_values(t);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) rank += s(i) / s(0) > 1e-7;
  CHECK(rank == int(rank_bound(op.lambda1(), IndexSet2D::centered(1, 0))));
  CHECK(rank == 6);
}

TEST_CASE("edge polynomial annihilates the lifted phantom") {
  const auto l0 = IndexSet2D::centered(1);
  const auto l1 = IndexSet2D::centered(3);
  const LiftOperator op(minkowski_sum(dilate(l1, 2), l0), l1);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto mu0 = random_edge_poly(l0, seed, 0.1);
    const auto t = op.build_matrix(fourier_coeffs(make_phantom(mu0), op.gamma()));
    // Shifts of the edge coefficients that stay inside Lambda1.
    const auto shifts = contraction(l1, l0);
    for (std::size_t si = 0; si < shifts.size(); ++si) {
      Eigen::VectorXcd h = Eigen::VectorXcd::Zero(op.cols());
      for (std::size_t i = 0; i < l0.size(); ++i) {
        h(Eigen::Index(l1.linear(l0.at(i) + shifts.at(si)))) = mu0.coeffs()[i];
      }
      CHECK((t * h).norm() / (t.norm() * h.norm()) < 1e-7);
    }
  }
}

TEST_CASE("lmat round trip") {
  const auto m = random_matrix(3, 2, 9);
  std::stringstream ss;
  write_lmat(ss, m);
  CHECK(ss.str().size() == 12 + 16 * 6);
  CHECK((read_lmat(ss) - m).norm() == 0.0);
}
