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
#include <memory>
#include <nlohmann/json_fwd.hpp>
#include <span>
#include <vector>

#include "offgrid/phantom.hpp"

namespace offgrid {

/// nx x ny complex image stored y-major: pixel (i, j) lives at j * nx + i.
struct DiscreteImage {
  int nx = 0;
  int ny = 0;
  std::vector<cplx> pixels;

  DiscreteImage() = default;
  DiscreteImage(int width, int height);

  std::size_t size() const { return pixels.size(); }
  cplx& operator()(int i, int j) { return pixels[std::size_t(j) * nx + i]; }
  cplx operator()(int i, int j) const { return pixels[std::size_t(j) * nx + i]; }
};

/// Unitary two-dimensional DFT backed by FFTW plans for one image size.
/// Spectra share the image layout with k_x, k_y in [0, n).
class Dft2 {
 public:
  Dft2(int nx, int ny);
  ~Dft2();
  Dft2(const Dft2&) = delete;
  Dft2& operator=(const Dft2&) = delete;

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  void forward(const std::vector<cplx>& in, std::vector<cplx>& out) const;
  void inverse(const std::vector<cplx>& in, std::vector<cplx>& out) const;

 private:
  struct Plans;
  int nx_, ny_;
  std::unique_ptr<Plans> plans_;
};

/// Unitary DFT samples with the sampled set Omega.
struct MaskedDft {
  int nx = 0;
  int ny = 0;
  std::vector<cplx> values;
  std::vector<std::uint8_t> mask;
};

/// Isotropic TV with circular differences (d_x u)[i, j] = u[i, j] - u[i+1, j].
double tv_seminorm(const DiscreteImage& u);

/// Unitary DFT of u with the given mask applied; throws DimensionMismatch on a mask size mismatch.
MaskedDft sample_dft(const DiscreteImage& u, std::vector<std::uint8_t> mask);

/// Discrete image whose unitary DFT equals sqrt(N) f-hat on the grid, i.e. the
/// trigonometric interpolant sampled at r = (i/n_x, j/n_y). The grid must fit
/// inside one period; the mask is carried over.
MaskedDft dft_from_fourier_grid(const FourierGrid& f, int nx, int ny);

/// Inverse of dft_from_fourier_grid on the grid indices.
FourierGrid fourier_grid_from_image(const DiscreteImage& u, const IndexSet2D& grid);

struct TvConfig {
  int max_iters = 2000;
  double tol = 1e-6;
  /// Primal and dual steps; 0 picks 0.99 / sqrt(8) for both.
  double tau = 0.0;
  double sigma = 0.0;
  int burn_in = 50;

  void validate() const;
};

struct TvReport {
  DiscreteImage image;
  int iterations = 0;
  bool converged = false;
  /// TV of the feasible iterate after each step.
  std::vector<double> objective;
  /// max |P_Omega(F u) - b| of the returned image.
  double constraint_residual = 0.0;
  double wall_time = 0.0;
};

/// Primal-dual (Chambolle-Pock) iteration for min TV(u) s.t. P_Omega F u = b,
/// with the exact projection onto the affine constraint as the primal prox.
/// Throws MissingDC when the DC sample is absent.
TvReport solve_tv(const MaskedDft& data, const TvConfig& cfg = {});

enum class CirculantMethod { Explicit, Fast };

/// Nuclear norm of [C_x; C_y], the block-circulant matrices with first columns
/// v_x = F d_x u and v_y = F d_y u. Both blocks are diagonalised by the DFT,
/// so the fast path sums sqrt(|lambda_x|^2 + |lambda_y|^2) over the spectra.
/// Under the unitary DFT the result is sqrt(N) TV(u). The explicit path forms
/// the 2N x N matrix and is limited to N <= 256.
double circulant_lifting_nuclear_norm(const DiscreteImage& u, CirculantMethod method = CirculantMethod::Fast);

/// 20 log10(|ref| / |est - ref|), capped at 300 dB.
double snr_db(std::span<const cplx> estimate, std::span<const cplx> reference);

void to_json(nlohmann::json& j, const TvConfig& c);
void from_json(const nlohmann::json& j, TvConfig& c);

}  // namespace offgrid
