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

#include "offgrid/trigpoly.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <limits>
#include <random>

#include "offgrid/curve.hpp"
#include "offgrid/error.hpp"
#include "offgrid/kernels.hpp"
#include "offgrid/rng.hpp"

namespace offgrid {

namespace {

std::vector<cplx> axis_exponentials(int lo, int hi, double t, double sign) {
  std::vector<cplx> e(std::size_t(hi - lo + 1));
  for (int k = lo; k <= hi; ++k) e[std::size_t(k - lo)] = std::polar(1.0, sign * kTwoPi * k * t);
  return e;
}

bool is_conjugate_symmetric(const IndexSet2D& s, std::span<const cplx> c, double tol) {
  if (!s.is_origin_symmetric()) return false;
  double scale = 0.0;
  for (const cplx& v : c) scale += std::abs(v);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Index2 k = s.at(i);
    if (std::abs(c[i] - std::conj(c[s.linear(-k)])) > tol * std::max(scale, 1e-300)) return false;
  }
  return true;
}

// sum_{k=lo}^{hi} exp(j 2 pi k t)
cplx dirichlet_1d(int lo, int hi, double t) {
  const double u = min_image(t);
  const int n = hi - lo + 1;
  if (u == 0.0) return double(n);
  const double ratio = std::sin(std::numbers::pi * n * u) / std::sin(std::numbers::pi * u);
  return std::polar(ratio, std::numbers::pi * (lo + hi) * u);
}

}  // namespace

TrigPoly::TrigPoly(IndexSet2D support, std::vector<cplx> coeffs, bool real)
    : support_(support), coeffs_(std::move(coeffs)), real_(real) {
  if (coeffs_.size() != support_.size()) {
    throw Error(ErrorKind::DimensionMismatch, "coefficient count does not match support");
  }
  if (real_ && !is_conjugate_symmetric(support_, coeffs_, 1e-12)) {
    throw Error(ErrorKind::InvalidArgument, "real-flagged polynomial is not conjugate symmetric");
  }
}

TrigPoly TrigPoly::real_from(IndexSet2D support, std::vector<cplx> coeffs) {
  if (!support.is_origin_symmetric()) {
    throw Error(ErrorKind::InvalidArgument, "real polynomial needs an origin-symmetric support");
  }
  if (coeffs.size() != support.size()) {
    throw Error(ErrorKind::DimensionMismatch, "coefficient count does not match support");
  }
  std::vector<cplx> sym(coeffs.size());
  for (std::size_t i = 0; i < support.size(); ++i) {
    sym[i] = 0.5 * (coeffs[i] + std::conj(coeffs[support.linear(-support.at(i))]));
  }
  return {support, std::move(sym), true};
}

double TrigPoly::l1_norm() const {
  double s = 0.0;
  for (const cplx& c : coeffs_) s += std::abs(c);
  return s;
}

cplx TrigPoly::eval(Vec2 r) const {
  const auto ex = axis_exponentials(support_.lo().x, support_.hi().x, r.x, 1.0);
  const auto ey = axis_exponentials(support_.lo().y, support_.hi().y, r.y, 1.0);
  const auto h = std::size_t(support_.height());
  cplx sum{};
  for (std::size_t a = 0; a < ex.size(); ++a) {
    cplx row{};
    for (std::size_t b = 0; b < h; ++b) row += coeffs_[a * h + b] * ey[b];
    sum += ex[a] * row;
  }
  return real_ ? cplx(sum.real(), 0.0) : sum;
}

double TrigPoly::eval_with_gradient(Vec2 r, Vec2& grad) const {
  const auto ex = axis_exponentials(support_.lo().x, support_.hi().x, r.x, 1.0);
  const auto ey = axis_exponentials(support_.lo().y, support_.hi().y, r.y, 1.0);
  const auto h = std::size_t(support_.height());
  cplx value{}, dx{}, dy{};
  for (std::size_t a = 0; a < ex.size(); ++a) {
    const double kx = support_.lo().x + double(a);
    cplx row{}, row_ky{};
    for (std::size_t b = 0; b < h; ++b) {
      const cplx t = coeffs_[a * h + b] * ey[b];
      row += t;
      row_ky += (support_.lo().y + double(b)) * t;
    }
    value += ex[a] * row;
    dx += kx * ex[a] * row;
    dy += ex[a] * row_ky;
  }
  // d/dx exp(j 2 pi k.r) = j 2 pi k_x exp(...); real part of j z is -Im z
  grad = {-kTwoPi * dx.imag(), -kTwoPi * dy.imag()};
  return value.real();
}

Vec2 TrigPoly::gradient(Vec2 r) const {
  Vec2 g;
  eval_with_gradient(r, g);
  return g;
}

TrigPoly TrigPoly::minus_constant(double level) const {
  TrigPoly out = *this;
  if (!support_.contains(Index2{0, 0})) {
    throw Error(ErrorKind::InvalidArgument, "support does not contain the constant term");
  }
  out.coeffs_[support_.linear({0, 0})] -= level;
  return out;
}

cplx dirichlet(const IndexSet2D& lambda, Vec2 r) {
  return dirichlet_1d(lambda.lo().x, lambda.hi().x, r.x) * dirichlet_1d(lambda.lo().y, lambda.hi().y, r.y);
}

std::vector<double> sample_real_on_grid(const TrigPoly& p, int n, Vec2 offset) {
  std::vector<double> out(std::size_t(n) * std::size_t(n));
  kernels::omp::sample_grid(p, n, offset, out);
  return out;
}

TrigPoly random_edge_poly(const IndexSet2D& lambda0, std::uint64_t seed, double smoothness) {
  if (!lambda0.is_origin_symmetric()) {
    throw Error(ErrorKind::InvalidArgument, "edge support must be origin symmetric");
  }
  if (lambda0.size() < 4) {
    throw Error(ErrorKind::InvalidArgument, "edge support too small");
  }
  constexpr int kProbe = 256;
  constexpr int kMaxAttempts = 100;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::mt19937_64 gen(derive_seed(seed, std::uint64_t(attempt)));
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    std::vector<cplx> raw(lambda0.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const Index2 k = lambda0.at(i);
      const double re = normal(gen);
      const double im = normal(gen);
      raw[i] = cplx(re, im) * std::exp(-smoothness * double(k.squared_norm()));
    }
    TrigPoly p = TrigPoly::real_from(lambda0, std::move(raw));

    std::vector<double> probe = sample_real_on_grid(p, kProbe, {0.5, 0.5});
    std::uniform_real_distribution<double> uq(0.3, 0.7);
    const auto rank = std::size_t(uq(gen) * double(probe.size() - 1));
    std::nth_element(probe.begin(), probe.begin() + std::ptrdiff_t(rank), probe.end());
    p = p.minus_constant(probe[rank]);

    const std::vector<double> shifted = sample_real_on_grid(p, kProbe, {0.5, 0.5});
    const bool has_neg = std::any_of(shifted.begin(), shifted.end(), [](double v) { return v < 0.0; });
    const bool has_pos = std::any_of(shifted.begin(), shifted.end(), [](double v) { return v > 0.0; });
    if (!has_neg || !has_pos) continue;

    double gscale = 0.0;
    for (std::size_t i = 0; i < lambda0.size(); ++i) {
      gscale += kTwoPi * std::sqrt(double(lambda0.at(i).squared_norm())) * std::abs(p.coeffs()[i]);
    }
    try {
      const CurveDiscretization curve = trace_zero_set(p, kProbe, 1e-12);
      double min_grad = std::numeric_limits<double>::infinity();
      for (const Vec2& q : curve.points) min_grad = std::min(min_grad, p.gradient(q).norm());
      if (min_grad < 1e-3 * gscale) continue;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::SingularPoint || e.kind() == ErrorKind::NoZeroSet) continue;
      throw;
    }
    return p;
  }
  throw Error(ErrorKind::DegenerateDraw, "no admissible edge polynomial after 100 draws");
}

void to_json(nlohmann::json& j, const TrigPoly& p) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const cplx& c : p.coeffs()) coeffs.push_back({c.real(), c.imag()});
  j = nlohmann::json{{"support", p.support()}, {"coeffs", coeffs}, {"real", p.is_real()}};
}

TrigPoly trigpoly_from_json(const nlohmann::json& j) {
  try {
    const IndexSet2D support = index_set_from_json(j.at("support"));
    std::vector<cplx> coeffs;
    for (const auto& c : j.at("coeffs")) coeffs.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
    return {support, std::move(coeffs), j.value("real", false)};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("trigpoly json: ") + e.what());
  }
}

}  // namespace offgrid
