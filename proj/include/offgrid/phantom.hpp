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

#include <cstdint>
#include <iosfwd>
#include <nlohmann/json_fwd.hpp>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "offgrid/curve.hpp"
#include "offgrid/index_set.hpp"
#include "offgrid/trigpoly.hpp"

namespace offgrid {

/// Fourier coefficients over a rectangular grid, stored in IndexSet2D order.
struct FourierGrid {
  IndexSet2D grid;
  std::vector<cplx> values;
  /// Sampled indices; empty means "no mask".
  std::vector<std::uint8_t> mask;
  bool real = true;

  FourierGrid() : values(1) {}
  explicit FourierGrid(IndexSet2D g, bool is_real = true) : grid(g), values(g.size()), real(is_real) {}

  cplx& operator[](Index2 k) { return values[grid.linear(k)]; }
  cplx operator[](Index2 k) const { return values[grid.linear(k)]; }
  cplx at_or_zero(Index2 k) const { return grid.contains(k) ? values[grid.linear(k)] : cplx{}; }
  bool has_mask() const { return !mask.empty(); }
  std::size_t sample_count() const;

  /// Replace values by (v[k] + conj v[-k]) / 2 on the symmetric part of the grid.
  void symmetrize();
};

/// Copy of `f` with a mask of `count` indices drawn uniformly without
/// replacement; k = 0 is always included and counts toward `count`.
FourierGrid with_uniform_mask(const FourierGrid& f, std::size_t count, std::uint64_t seed);

/// Two-region image a_out + (a_in - a_out) * 1{mu0 < 0}.
struct Phantom {
  TrigPoly edge_poly;
  cplx a_in{1.0, 0.0};
  cplx a_out{0.0, 0.0};
  /// High-order quadrature of {mu0 = 0}; normals point out of {mu0 < 0}.
  CurveDiscretization curve;

  cplx jump() const { return a_out - a_in; }
  bool real() const { return a_in.imag() == 0.0 && a_out.imag() == 0.0; }
};

struct PhantomOptions {
  /// Marching-squares grid; 0 picks max(64, 8 * bandwidth).
  int trace_grid = 0;
  double refine_tol = 1e-14;
  int quadrature_order = 8;
};

Phantom make_phantom(const TrigPoly& mu0, cplx a_in = 1.0, cplx a_out = 0.0, const PhantomOptions& opt = {});

/// f = 1 on 0 < x < 1/2, edge polynomial sin(2 pi x).
Phantom stripe_phantom(const PhantomOptions& opt = {});

/// Constant image; the curve is empty.
Phantom constant_phantom(cplx a);

/// (widehat{d_x f}, widehat{d_y f}) on the grid, by curve quadrature.
std::pair<std::vector<cplx>, std::vector<cplx>> gradient_fourier(const Phantom& ph, const IndexSet2D& grid);

FourierGrid fourier_coeffs(const Phantom& ph, const IndexSet2D& grid);
/// Coefficients of a superposition; each component contributes its own a_out.
FourierGrid fourier_coeffs(std::span<const Phantom> parts, const IndexSet2D& grid);

/// n x n raster sampled at pixel centres; row j holds y = (j + 1/2)/n and
/// column i holds x = (i + 1/2)/n. Complex amplitudes keep their real part.
std::vector<double> rasterize(const Phantom& ph, int n);
std::vector<double> rasterize(std::span<const Phantom> parts, int n);

// I/O.
void write_fgrd(std::ostream& out, const FourierGrid& f);
FourierGrid read_fgrd(std::istream& in);
void write_fgrd_file(const std::string& path, const FourierGrid& f);
FourierGrid read_fgrd_file(const std::string& path);
void to_json(nlohmann::json& j, const FourierGrid& f);
FourierGrid fourier_grid_from_json(const nlohmann::json& j);
/// 16-bit binary PGM; values are mapped linearly from [min, max] to [0, 65535].
void write_pgm16(std::ostream& out, std::span<const double> image, int width, int height);

}  // namespace offgrid
