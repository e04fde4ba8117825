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
#include <sstream>

#include "offgrid/curve.hpp"
#include "offgrid/error.hpp"

using namespace offgrid;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

TrigPoly sin_x() { return TrigPoly(IndexSet2D({-1, 0}, {1, 0}), {cplx(0, 0.5), 0.0, cplx(0, -0.5)}, true); }

TrigPoly cos_sum(double c0) {
  const auto s = IndexSet2D::centered(1);
  std::vector<cplx> c(s.size());
  c[s.linear({1, 0})] = c[s.linear({-1, 0})] = 0.5;
  c[s.linear({0, 1})] = c[s.linear({0, -1})] = 0.5;
  c[s.linear({0, 0})] = c0;
  return TrigPoly(s, c, true);
}

}  // namespace

TEST_CASE("stripe zero set") {
  const auto c = trace_zero_set(sin_x(), 32, 1e-14);
  CHECK(c.loop_count() == 2);
  CHECK_THAT(c.length(), WithinAbs(2.0, 1e-6));
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double x = c.points[i].x;
    CHECK(std::min({std::abs(x), std::abs(x - 0.5), std::abs(x - 1.0)}) < 1e-12);
    // Normal points toward increasing mu, out of {mu < 0}.
    const double expect = std::abs(x - 0.5) < 0.25 ? -1.0 : 1.0;
    CHECK_THAT(c.normals[i].x, WithinAbs(expect, 1e-12));
  }
  CHECK_THAT(enclosed_area(c), WithinAbs(0.5, 1e-12));
}

TEST_CASE("traced points satisfy the residual bound") {
  const auto p = cos_sum(0.0);
  const double tol = 1e-12;
  const auto c = trace_zero_set(p, 40, tol);
  REQUIRE(!c.empty());
  for (const Vec2& q : c.points) CHECK(std::abs(p.eval_real(q)) < tol * p.l1_norm());
}

TEST_CASE("circle-like level set self-convergence") {
  // {cos 2pi x + cos 2pi y = 1}: a single closed loop around the origin.
  const auto p = cos_sum(-1.0);
  const auto coarse = trace_zero_set(p, 128, 1e-14);
  const auto fine = trace_zero_set(p, 512, 1e-14);
  CHECK(coarse.loop_count() == 1);
  CHECK_THAT(coarse.length(), WithinRel(fine.length(), 1e-4));

  const auto q = gauss_quadrature(coarse, 8);
  const auto qf = gauss_quadrature(fine, 8);
  CHECK_THAT(q.length(), WithinRel(qf.length(), 1e-12));
  CHECK_THAT(fine.length(), WithinRel(q.length(), 1e-4));
  for (std::size_t i = 0; i < q.size(); ++i) {
    CHECK(std::abs(p.eval_real(q.points[i])) < 1e-13);
    CHECK_THAT(q.normals[i].norm(), WithinAbs(1.0, 1e-14));
  }

  // Area of {mu < 0} versus a fine midpoint count.
  const int n = 2000;
  std::size_t inside = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) inside += p.eval_real({(i + 0.5) / n, (j + 0.5) / n}) < 0.0 ? 1 : 0;
  }
  CHECK_THAT(enclosed_area(q), WithinAbs(double(inside) / (double(n) * n), 2e-3));
}

TEST_CASE("doubling the trace grid barely changes the length") {
  const auto p = random_edge_poly(IndexSet2D::centered(3), 9, 0.05);
  const auto a = trace_zero_set(p, 64, 1e-14);
  const auto b = trace_zero_set(p, 128, 1e-14);
  CHECK_THAT(a.length(), WithinRel(b.length(), 1e-3));
}

TEST_CASE("tracer errors") {
  CHECK_THROWS_AS(trace_zero_set(cos_sum(3.0), 32, 1e-14), Error);
  try {
    trace_zero_set(cos_sum(3.0), 32, 1e-14);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoZeroSet);
  }
  // sin^5(2 pi x): sign changes at x = 0, 1/2 with a vanishing gradient.
  const IndexSet2D s5({-5, 0}, {5, 0});
  std::vector<cplx> c5(s5.size());
  c5[s5.linear({1, 0})] = cplx(0, -10.0 / 32);
  c5[s5.linear({3, 0})] = cplx(0, 5.0 / 32);
  c5[s5.linear({5, 0})] = cplx(0, -1.0 / 32);
  for (int k : {1, 3, 5}) c5[s5.linear({-k, 0})] = std::conj(c5[s5.linear({k, 0})]);
  const TrigPoly sin5(s5, c5, true);
  CHECK_THAT(sin5.eval_real({0.1, 0.0}), WithinAbs(std::pow(std::sin(kTwoPi * 0.1), 5), 1e-14));
  try {
    trace_zero_set(sin5, 32, 1e-14);
    FAIL("expected SingularPoint");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularPoint);
  }
  CHECK_THROWS_AS(trace_zero_set(sin_x(), 2, 1e-14), Error);
}

TEST_CASE("curve csv") {
  const auto c = trace_zero_set(sin_x(), 8, 1e-14);
  std::ostringstream out;
  write_curve_csv(out, c);
  const std::string s = out.str();
  CHECK(s.rfind("x,y,nx,ny,ds\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == std::ptrdiff_t(c.size() + 1));
}
