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

#include <cstddef>
#include <compare>
#include <nlohmann/json_fwd.hpp>

namespace offgrid {

/// Integer lattice point (frequency index or shift).
struct Index2 {
  int x = 0;
  int y = 0;

  friend constexpr Index2 operator+(Index2 a, Index2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Index2 operator-(Index2 a, Index2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Index2 operator-(Index2 a) { return {-a.x, -a.y}; }
  friend constexpr Index2 operator*(int s, Index2 a) { return {s * a.x, s * a.y}; }
  friend constexpr auto operator<=>(const Index2&, const Index2&) = default;

  constexpr long squared_norm() const { return long(x) * x + long(y) * y; }
};

/// Inclusive rectangle [lo.x, hi.x] x [lo.y, hi.y] of the integer lattice.
///
/// Elements are enumerated in a fixed row-major order with k.x as the slow
/// index: linear(k) = (k.x - lo.x) * height() + (k.y - lo.y). Every matrix
/// and coefficient array in the library uses this order.
class IndexSet2D {
 public:
  /// The single point {0}.
  IndexSet2D() = default;
  /// Throws InvalidArgument when lo > hi in either coordinate.
  IndexSet2D(Index2 lo, Index2 hi);

  /// Origin-symmetric window [-kx, kx] x [-ky, ky].
  static IndexSet2D centered(int kx, int ky);
  static IndexSet2D centered(int k) { return centered(k, k); }
  /// Window with the given side lengths, centred on the origin. Even sides
  /// put the extra index on the negative end.
  static IndexSet2D with_size(int nx, int ny);

  Index2 lo() const { return lo_; }
  Index2 hi() const { return hi_; }
  int width() const { return hi_.x - lo_.x + 1; }
  int height() const { return hi_.y - lo_.y + 1; }
  std::size_t size() const { return std::size_t(width()) * std::size_t(height()); }

  bool contains(Index2 k) const {
    return k.x >= lo_.x && k.x <= hi_.x && k.y >= lo_.y && k.y <= hi_.y;
  }
  bool contains(const IndexSet2D& other) const {
    return contains(other.lo_) && contains(other.hi_);
  }
  bool is_origin_symmetric() const { return lo_ == -hi_; }

  std::size_t linear(Index2 k) const {
    return std::size_t(k.x - lo_.x) * std::size_t(height()) + std::size_t(k.y - lo_.y);
  }
  Index2 at(std::size_t i) const {
    const auto h = std::size_t(height());
    return {lo_.x + int(i / h), lo_.y + int(i % h)};
  }

  friend bool operator==(const IndexSet2D&, const IndexSet2D&) = default;

 private:
  Index2 lo_;
  Index2 hi_;
};

/// {k + l : k in a, l in b}.
IndexSet2D minkowski_sum(const IndexSet2D& a, const IndexSet2D& b);

/// alpha-fold Minkowski sum a + a + ... + a (alpha >= 1).
IndexSet2D dilate(const IndexSet2D& a, int alpha);

/// Contraction omega:lambda = {l : l - k in omega for all k in lambda}, the
/// set of admissible shifts. Throws ContractionEmpty when lambda is wider than
/// omega in either dimension.
IndexSet2D contraction(const IndexSet2D& omega, const IndexSet2D& lambda);

/// Number of shifts of lambda that fit inside omega; zero when none fit.
std::size_t contraction_size(const IndexSet2D& omega, const IndexSet2D& lambda);

/// Smallest rectangle containing both sets.
IndexSet2D hull(const IndexSet2D& a, const IndexSet2D& b);

/// Rank of the lifted matrix for edge bandwidth lambda0 and filter support
/// lambda1: |lambda1| - |lambda1:lambda0|. Throws InvalidNesting when lambda0
/// does not fit inside lambda1 after translation.
std::size_t rank_bound(const IndexSet2D& lambda1, const IndexSet2D& lambda0);

void to_json(nlohmann::json& j, const IndexSet2D& s);
void from_json(const nlohmann::json& j, IndexSet2D& s);
IndexSet2D index_set_from_json(const nlohmann::json& j);

}  // namespace offgrid
