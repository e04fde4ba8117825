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
#include "offgrid/trigpoly.hpp"

using namespace offgrid;
using Catch::Matchers::WithinAbs;

namespace {

TrigPoly cos_x_plus_cos_y() {
  const auto s = IndexSet2D::centered(1);
  std::vector<cplx> c(s.size());
  c[s.linear({1, 0})] = c[s.linear({-1, 0})] = 0.5;
  c[s.linear({0, 1})] = c[s.linear({0, -1})] = 0.5;
  return TrigPoly(s, c, true);
}

TrigPoly cos_x() {
  return TrigPoly(IndexSet2D({-1, 0}, {1, 0}), {0.5, 0.0, 0.5}, true);
}

TrigPoly random_poly(const IndexSet2D& s, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> n;
  std::vector<cplx> c(s.size());
  for (auto& z : c) z = {n(gen), n(gen)};
  return TrigPoly::real_from(s, c);
}

// Term-by-term sum in reverse order using cos/sin directly.
cplx slow_eval(const TrigPoly& p, Vec2 r) {
  long double re = 0, im = 0;
  const auto& s = p.support();
  for (std::size_t i = s.size(); i-- > 0;) {
    const Index2 k = s.at(i);
    const long double ph = 2.0L * 3.14159265358979323846264338327950288L * ((long double)k.x * r.x + (long double)k.y * r.y);
    const cplx c = p.coeffs()[i];
    re += c.real() * std::cos(ph) - c.imag() * std::sin(ph);
    im += c.real() * std::sin(ph) + c.imag() * std::cos(ph);
  }
  return {double(re), double(im)};
}

}  // namespace

TEST_CASE("evaluation") {
  CHECK_THAT(cos_x_plus_cos_y().eval_real({0.25, 0.25}), WithinAbs(0.0, 1e-15));
  const TrigPoly one(IndexSet2D{}, {1.0}, true);
  CHECK(one.eval({0.123, 0.77}) == cplx(1.0));

  const auto p = random_poly(IndexSet2D::centered(3, 2), 11);
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> u;
  for (int t = 0; t < 50; ++t) {
    const Vec2 r{u(gen), u(gen)};
    const cplx fast = p.eval(r);
    const cplx slow = slow_eval(p, r);
    CHECK(std::abs(fast.real() - slow.real()) <= 1e-13 * p.l1_norm());
    CHECK(std::abs(slow.imag()) < 1e-12 * p.l1_norm());
    CHECK(fast.imag() == 0.0);
  }
}

TEST_CASE("real flag requires conjugate symmetry") {
  const auto s = IndexSet2D::centered(1, 0);
  CHECK_THROWS_AS(TrigPoly(s, {1.0, 0.0, 2.0}, true), Error);
  CHECK_THROWS_AS(TrigPoly(s, {1.0, 0.0}, false), Error);
  CHECK_NOTHROW(TrigPoly(s, {cplx(1, 2), 0.5, cplx(1, -2)}, true));
}

TEST_CASE("gradient") {
  const Vec2 g0 = cos_x().gradient({0.0, 0.0});
  CHECK_THAT(g0.x, WithinAbs(0.0, 1e-14));
  CHECK_THAT(g0.y, WithinAbs(0.0, 1e-14));
  const Vec2 g1 = cos_x().gradient({0.25, 0.0});
  CHECK_THAT(g1.x, WithinAbs(-kTwoPi, 1e-13));
  CHECK_THAT(g1.y, WithinAbs(0.0, 1e-14));

  const auto p = random_poly(IndexSet2D::centered(2), 5);
  std::mt19937 gen(8);
  std::uniform_real_distribution<double> u;
  const double h = 1e-6;
  for (int t = 0; t < 40; ++t) {
    const Vec2 r{u(gen), u(gen)};
    Vec2 g;
    const double v = p.eval_with_gradient(r, g);
    CHECK_THAT(v, WithinAbs(p.eval_real(r), 1e-13 * p.l1_norm()));
    const double fx = (p.eval_real({r.x + h, r.y}) - p.eval_real({r.x - h, r.y})) / (2 * h);
    const double fy = (p.eval_real({r.x, r.y + h}) - p.eval_real({r.x, r.y - h})) / (2 * h);
    const double scale = std::max(g.norm(), 1.0);
    CHECK(std::abs(fx - g.x) < 1e-6 * scale);
    CHECK(std::abs(fy - g.y) < 1e-6 * scale);
  }
}

TEST_CASE("dirichlet kernel") {
  const auto l3 = IndexSet2D::centered(1);
  CHECK(std::abs(dirichlet(l3, {0.0, 0.0}) - 9.0) < 1e-14);
  CHECK(std::abs(dirichlet(l3, {1.0 / 3.0, 0.0})) < 1e-14);

  std::mt19937 gen(1);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const auto& lam : {IndexSet2D::centered(3), IndexSet2D({-2, 0}, {3, 4})}) {
    for (int t = 0; t < 30; ++t) {
      const Vec2 r{u(gen), u(gen)};
      cplx direct{};
      for (std::size_t i = 0; i < lam.size(); ++i) {
        const Index2 k = lam.at(i);
        direct += std::polar(1.0, kTwoPi * (k.x * r.x + k.y * r.y));
      }
      const cplx d = dirichlet(lam, r);
      CHECK(std::abs(d - direct) < 1e-13 * double(lam.size()));
      CHECK(std::abs(d) <= double(lam.size()) + 1e-12);
    }
  }
}

TEST_CASE("dirichlet reproducing property") {
  const auto lam = IndexSet2D::centered(3, 2);
  const auto eta = random_poly(lam, 21);
  const int n = 32;
  const Vec2 s{0.3141, 0.7777};
  cplx inner{};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vec2 r{(i + 0.5) / n, (j + 0.5) / n};
      inner += eta.eval(r) * std::conj(dirichlet(lam, r - s));
    }
  }
  inner /= double(n * n);
  const cplx ref = eta.eval(s);
  CHECK(std::abs(inner - ref) < 1e-8 * std::abs(ref));
}

TEST_CASE("random edge polynomial") {
  const auto l0 = IndexSet2D::centered(1);
  const auto a = random_edge_poly(l0, 42, 0.1);
  const auto b = random_edge_poly(l0, 42, 0.1);
  REQUIRE(a.coeffs().size() == b.coeffs().size());
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) CHECK(a.coeffs()[i] == b.coeffs()[i]);
  CHECK(a.is_real());
  for (std::size_t i = 0; i < l0.size(); ++i) {
    const Index2 k = l0.at(i);
    CHECK(a.coeff(-k) == std::conj(a.coeff(k)));
  }
  const auto c = random_edge_poly(l0, 43, 0.1);
  CHECK(c.coeffs()[0] != a.coeffs()[0]);

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto p = random_edge_poly(IndexSet2D::centered(2), seed, 0.05);
    const auto v = sample_real_on_grid(p, 512, {0.5, 0.5});
    const bool neg = std::any_of(v.begin(), v.end(), [](double x) { return x < 0; });
    const bool pos = std::any_of(v.begin(), v.end(), [](double x) { return x > 0; });
    CHECK((neg && pos));
  }
  CHECK_THROWS_AS(random_edge_poly(IndexSet2D::centered(1, 0), 1, 0.1), Error);
}

TEST_CASE("trigpoly json round trip") {
  const auto p = random_poly(IndexSet2D::centered(2, 1), 4);
  const nlohmann::json j = p;
  CHECK(j.at("real").get<bool>());
  const auto q = trigpoly_from_json(j);
  CHECK(q.support() == p.support());
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) CHECK(q.coeffs()[i] == p.coeffs()[i]);
}
