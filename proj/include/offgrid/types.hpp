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

#include <cmath>
#include <complex>
#include <numbers>

namespace offgrid {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Point of the unit torus or a planar vector.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
  double norm() const { return std::hypot(x, y); }
};

/// Wraps a coordinate into [0, 1).
inline double wrap_unit(double t) {
  double w = t - std::floor(t);
  return w >= 1.0 ? 0.0 : w;
}

inline Vec2 wrap_unit(Vec2 p) { return {wrap_unit(p.x), wrap_unit(p.y)}; }

/// Representative of t modulo 1 in [-1/2, 1/2).
inline double min_image(double t) { return t - std::floor(t + 0.5); }

inline Vec2 min_image(Vec2 d) { return {min_image(d.x), min_image(d.y)}; }

}  // namespace offgrid
