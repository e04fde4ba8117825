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

#include "offgrid/lifting.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>

#include "offgrid/error.hpp"

namespace offgrid {

namespace {

int overlap(int lo_a, int hi_a, int lo_b, int hi_b) {
  return std::max(0, std::min(hi_a, hi_b) - std::max(lo_a, lo_b) + 1);
}

}  // namespace

LiftOperator::LiftOperator(IndexSet2D gamma, IndexSet2D lambda1)
    : geo_{gamma, lambda1, contraction(gamma, lambda1)} {
  const IndexSet2D& l1 = geo_.lambda1;
  const IndexSet2D& l2 = geo_.lambda2;
  omega_.resize(gamma.size());
  weights_.resize(gamma.size());
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const Index2 k = gamma.at(i);
    const int wx = overlap(l2.lo().x, l2.hi().x, l1.lo().x + k.x, l1.hi().x + k.x);
    const int wy = overlap(l2.lo().y, l2.hi().y, l1.lo().y + k.y, l1.hi().y + k.y);
    omega_[i] = wx * wy;
    weights_[i] = kTwoPi * std::sqrt(double(k.squared_norm()) * omega_[i]);
  }
}

void LiftOperator::check_grid(std::size_t n) const {
  if (n != gamma().size()) throw Error(ErrorKind::GridMismatch, "coefficient array does not match the lifting grid");
}

Eigen::MatrixXcd LiftOperator::build_matrix(const FourierGrid& g) const {
  if (!(g.grid == gamma())) throw Error(ErrorKind::GridMismatch, "FourierGrid is not on the lifting grid");
  return apply(g.values);
}

Eigen::MatrixXcd LiftOperator::apply(std::span<const cplx> g) const {
  Eigen::MatrixXcd out;
  apply(g, out);
  return out;
}

void LiftOperator::apply(std::span<const cplx> g, Eigen::MatrixXcd& out) const {
  check_grid(g.size());
  kernels::omp::lift_apply(geo_, g, out);
}

std::vector<cplx> LiftOperator::adjoint(const Eigen::MatrixXcd& x) const {
  if (x.rows() != rows() || x.cols() != cols()) throw Error(ErrorKind::DimensionMismatch, "adjoint input shape");
  std::vector<cplx> g(gamma().size());
  kernels::omp::lift_adjoint(geo_, x, g);
  return g;
}

FourierGrid LiftOperator::adjoint_grid(const Eigen::MatrixXcd& x) const {
  FourierGrid f(gamma(), false);
  f.values = adjoint(x);
  return f;
}

Eigen::MatrixXcd LiftOperator::basis_matrix(Index2 k) const {
  if (k == Index2{0, 0}) throw Error(ErrorKind::DCIndex, "no basis element at k = 0");
  if (!gamma().contains(k)) throw Error(ErrorKind::GridMismatch, "index outside the lifting grid");
  std::vector<cplx> delta(gamma().size());
  delta[gamma().linear(k)] = 1.0 / weight(k);
  return apply(delta);
}

std::vector<cplx> LiftOperator::basis_coefficients(const Eigen::MatrixXcd& x) const {
  std::vector<cplx> c = adjoint(x);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = weights_[i] > 0.0 ? c[i] / weights_[i] : cplx{};
  return c;
}

Eigen::MatrixXcd LiftOperator::project_structured(const Eigen::MatrixXcd& x) const {
  // A(X) = sum_k <A_k, X> A_k = T(T*(X) / w^2).
  std::vector<cplx> c = basis_coefficients(x);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = weights_[i] > 0.0 ? c[i] / weights_[i] : cplx{};
  return apply(c);
}

Eigen::MatrixXcd LiftOperator::project_antistructured(const Eigen::MatrixXcd& x) const {
  return x - project_structured(x);
}

Eigen::MatrixXcd LiftOperator::sampling_operator(std::span<const Index2> samples, const Eigen::MatrixXcd& x) const {
  Eigen::MatrixXcd out = project_antistructured(x);
  if (samples.empty()) return out;
  const std::vector<cplx> c = basis_coefficients(x);
  std::vector<double> count(c.size(), 0.0);
  for (const Index2 k : samples) {
    if (k == Index2{0, 0}) throw Error(ErrorKind::DCIndex, "sampling multiset contains k = 0");
    if (!gamma().contains(k)) throw Error(ErrorKind::GridMismatch, "sample outside the lifting grid");
    count[gamma().linear(k)] += 1.0;
  }
  const double scale = double(gamma().size() - 1) / double(samples.size());
  std::vector<cplx> g(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (count[i] > 0.0) g[i] = scale * count[i] * c[i] / weights_[i];
  }
  out += apply(g);
  return out;
}

namespace {

constexpr std::array<char, 4> kLmatMagic{'L', 'M', 'A', 'T'};

void put_bytes(std::ostream& out, const void* p, std::size_t n) { out.write(static_cast<const char*>(p), std::streamsize(n)); }

}  // namespace

void write_lmat(std::ostream& out, const Eigen::MatrixXcd& m) {
  static_assert(std::endian::native == std::endian::little, "LMAT writer assumes a little-endian host");
  out.write(kLmatMagic.data(), kLmatMagic.size());
  const auto r = std::uint32_t(m.rows());
  const auto c = std::uint32_t(m.cols());
  put_bytes(out, &r, 4);
  put_bytes(out, &c, 4);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v[2] = {m(i, j).real(), m(i, j).imag()};
      put_bytes(out, v, sizeof v);
    }
  }
  if (!out) throw Error(ErrorKind::Io, "LMAT write failed");
}

Eigen::MatrixXcd read_lmat(std::istream& in) {
  std::array<char, 4> magic{};
  std::uint32_t r = 0, c = 0;
  if (!in.read(magic.data(), 4) || magic != kLmatMagic) throw Error(ErrorKind::Io, "not an LMAT stream");
  if (!in.read(reinterpret_cast<char*>(&r), 4) || !in.read(reinterpret_cast<char*>(&c), 4)) {
    throw Error(ErrorKind::Io, "truncated LMAT header");
  }
  Eigen::MatrixXcd m(r, c);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      double v[2];
      if (!in.read(reinterpret_cast<char*>(v), sizeof v)) throw Error(ErrorKind::Io, "truncated LMAT data");
      m(i, j) = {v[0], v[1]};
    }
  }
  return m;
}

}  // namespace offgrid
