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

#include "offgrid/baseline_tv.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <mutex>
#include <nlohmann/json.hpp>

#include "offgrid/error.hpp"

namespace offgrid {
namespace {

// The FFTW planner is not thread-safe; execution with new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(const cplx* p) { return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(p)); }

int wrap_index(int k, int n) { return ((k % n) + n) % n; }

double norm2(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const cplx& z : v) s += std::norm(z);
  return std::sqrt(s);
}

void gradient(const DiscreteImage& u, std::vector<cplx>& gx, std::vector<cplx>& gy) {
  gx.resize(u.size());
  gy.resize(u.size());
  for (int j = 0; j < u.ny; ++j) {
    const int jn = j + 1 == u.ny ? 0 : j + 1;
    for (int i = 0; i < u.nx; ++i) {
      const int in = i + 1 == u.nx ? 0 : i + 1;
      const std::size_t p = std::size_t(j) * u.nx + i;
      gx[p] = u.pixels[p] - u(in, j);
      gy[p] = u.pixels[p] - u(i, jn);
    }
  }
}

// Adjoint of `gradient`.
void gradient_adjoint(int nx, int ny, const std::vector<cplx>& px, const std::vector<cplx>& py, std::vector<cplx>& out) {
  out.resize(px.size());
  for (int j = 0; j < ny; ++j) {
    const int jp = j == 0 ? ny - 1 : j - 1;
    for (int i = 0; i < nx; ++i) {
      const int ip = i == 0 ? nx - 1 : i - 1;
      const std::size_t p = std::size_t(j) * nx + i;
      out[p] = px[p] - px[std::size_t(j) * nx + ip] + py[p] - py[std::size_t(jp) * nx + i];
    }
  }
}

// Spectra of the two circulant blocks: (1 - exp(j 2 pi k / n)) (F u)[k].
void difference_spectra(const DiscreteImage& u, const Dft2& dft, std::vector<cplx>& vx, std::vector<cplx>& vy) {
  std::vector<cplx> fu;
  dft.forward(u.pixels, fu);
  vx.resize(fu.size());
  vy.resize(fu.size());
  for (int ky = 0; ky < u.ny; ++ky) {
    const cplx sy = 1.0 - std::polar(1.0, kTwoPi * ky / u.ny);
    for (int kx = 0; kx < u.nx; ++kx) {
      const std::size_t p = std::size_t(ky) * u.nx + kx;
      vx[p] = (1.0 - std::polar(1.0, kTwoPi * kx / u.nx)) * fu[p];
      vy[p] = sy * fu[p];
    }
  }
}

}  // namespace

DiscreteImage::DiscreteImage(int width, int height) : nx(width), ny(height) {
  if (width < 1 || height < 1) throw Error(ErrorKind::InvalidArgument, "image dimensions must be positive");
  pixels.assign(std::size_t(width) * std::size_t(height), cplx{});
}

struct Dft2::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

Dft2::Dft2(int nx, int ny) : nx_(nx), ny_(ny), plans_(std::make_unique<Plans>()) {
  if (nx < 1 || ny < 1) throw Error(ErrorKind::InvalidArgument, "DFT dimensions must be positive");
  std::vector<cplx> a(std::size_t(nx) * ny), b(a.size());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_PRESERVE_INPUT;
  std::lock_guard lock(planner_mutex());
  plans_->fwd = fftw_plan_dft_2d(ny, nx, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, flags);
  plans_->inv = fftw_plan_dft_2d(ny, nx, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, flags);
  if (!plans_->fwd || !plans_->inv) throw Error(ErrorKind::InvalidArgument, "FFTW planning failed");
}

Dft2::~Dft2() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plans_->fwd);
  fftw_destroy_plan(plans_->inv);
}

void Dft2::forward(const std::vector<cplx>& in, std::vector<cplx>& out) const {
  const std::size_t n = std::size_t(nx_) * ny_;
  if (in.size() != n) throw Error(ErrorKind::DimensionMismatch, "DFT input size");
  out.resize(n);
  fftw_execute_dft(plans_->fwd, as_fftw(in.data()), as_fftw(out.data()));
  const double s = 1.0 / std::sqrt(double(n));
  for (cplx& z : out) z *= s;
}

void Dft2::inverse(const std::vector<cplx>& in, std::vector<cplx>& out) const {
  const std::size_t n = std::size_t(nx_) * ny_;
  if (in.size() != n) throw Error(ErrorKind::DimensionMismatch, "DFT input size");
  out.resize(n);
  fftw_execute_dft(plans_->inv, as_fftw(in.data()), as_fftw(out.data()));
  const double s = 1.0 / std::sqrt(double(n));
  for (cplx& z : out) z *= s;
}

double tv_seminorm(const DiscreteImage& u) {
  std::vector<cplx> gx, gy;
  gradient(u, gx, gy);
  double tv = 0.0;
  for (std::size_t p = 0; p < gx.size(); ++p) tv += std::sqrt(std::norm(gx[p]) + std::norm(gy[p]));
  return tv;
}

MaskedDft sample_dft(const DiscreteImage& u, std::vector<std::uint8_t> mask) {
  if (mask.size() != u.size()) throw Error(ErrorKind::DimensionMismatch, "mask size");
  MaskedDft out{u.nx, u.ny, {}, std::move(mask)};
  Dft2(u.nx, u.ny).forward(u.pixels, out.values);
  return out;
}

MaskedDft dft_from_fourier_grid(const FourierGrid& f, int nx, int ny) {
  if (f.grid.width() > nx || f.grid.height() > ny) {
    throw Error(ErrorKind::GridMismatch, "Fourier grid does not fit inside one DFT period");
  }
  const std::size_t n = std::size_t(nx) * ny;
  MaskedDft out{nx, ny, std::vector<cplx>(n), std::vector<std::uint8_t>(n, 0)};
  const double s = std::sqrt(double(n));
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    const Index2 k = f.grid.at(i);
    const std::size_t p = std::size_t(wrap_index(k.y, ny)) * nx + wrap_index(k.x, nx);
    out.values[p] = s * f.values[i];
    out.mask[p] = f.has_mask() ? f.mask[i] : 1;
  }
  return out;
}

FourierGrid fourier_grid_from_image(const DiscreteImage& u, const IndexSet2D& grid) {
  if (grid.width() > u.nx || grid.height() > u.ny) {
    throw Error(ErrorKind::GridMismatch, "Fourier grid does not fit inside one DFT period");
  }
  std::vector<cplx> fu;
  Dft2(u.nx, u.ny).forward(u.pixels, fu);
  FourierGrid out(grid, false);
  const double s = 1.0 / std::sqrt(double(u.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Index2 k = grid.at(i);
    out.values[i] = s * fu[std::size_t(wrap_index(k.y, u.ny)) * u.nx + wrap_index(k.x, u.nx)];
  }
  return out;
}

void TvConfig::validate() const {
  if (max_iters < 1) throw Error(ErrorKind::InvalidArgument, "max_iters must be >= 1");
  if (!(tol > 0.0 && tol < 1.0)) throw Error(ErrorKind::InvalidArgument, "tol must lie in (0, 1)");
  if (tau < 0.0 || sigma < 0.0) throw Error(ErrorKind::InvalidArgument, "step sizes must be >= 0");
  if (tau > 0.0 && sigma > 0.0 && tau * sigma * 8.0 >= 1.0) {
    throw Error(ErrorKind::InvalidArgument, "tau * sigma * 8 must be below 1");
  }
  if (burn_in < 0) throw Error(ErrorKind::InvalidArgument, "burn_in must be >= 0");
}

TvReport solve_tv(const MaskedDft& data, const TvConfig& cfg) {
  cfg.validate();
  const std::size_t n = std::size_t(data.nx) * data.ny;
  if (data.values.size() != n || data.mask.size() != n) throw Error(ErrorKind::DimensionMismatch, "masked DFT sizes");
  if (!data.mask[0]) throw Error(ErrorKind::MissingDC, "the DC coefficient must be sampled");
  const auto t0 = std::chrono::steady_clock::now();
  const Dft2 dft(data.nx, data.ny);
  const double tau = cfg.tau > 0.0 ? cfg.tau : 0.99 / std::sqrt(8.0);
  const double sigma = cfg.sigma > 0.0 ? cfg.sigma : 0.99 / std::sqrt(8.0);

  std::vector<cplx> spec;
  auto project = [&](std::vector<cplx>& u) {
    dft.forward(u, spec);
    for (std::size_t p = 0; p < n; ++p) {
      if (data.mask[p]) spec[p] = data.values[p];
    }
    dft.inverse(spec, u);
  };

  TvReport rep;
  DiscreteImage u(data.nx, data.ny);
  project(u.pixels);
  DiscreteImage ubar = u;
  std::vector<cplx> px(n), py(n), gx, gy, div, next(n);
  for (int it = 1; it <= cfg.max_iters; ++it) {
    gradient(ubar, gx, gy);
    for (std::size_t p = 0; p < n; ++p) {
      px[p] += sigma * gx[p];
      py[p] += sigma * gy[p];
      const double mag = std::sqrt(std::norm(px[p]) + std::norm(py[p]));
      if (mag > 1.0) {
        px[p] /= mag;
        py[p] /= mag;
      }
    }
    gradient_adjoint(data.nx, data.ny, px, py, div);
    for (std::size_t p = 0; p < n; ++p) next[p] = u.pixels[p] - tau * div[p];
    project(next);
    double diff = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      diff += std::norm(next[p] - u.pixels[p]);
      ubar.pixels[p] = 2.0 * next[p] - u.pixels[p];
    }
    u.pixels.swap(next);
    rep.objective.push_back(tv_seminorm(u));
    rep.iterations = it;
    const double change = std::sqrt(diff) / std::max(norm2(u.pixels), 1e-300);
    if (it > cfg.burn_in && change < cfg.tol) {
      rep.converged = true;
      break;
    }
  }
  dft.forward(u.pixels, spec);
  for (std::size_t p = 0; p < n; ++p) {
    if (data.mask[p]) rep.constraint_residual = std::max(rep.constraint_residual, std::abs(spec[p] - data.values[p]));
  }
  rep.image = std::move(u);
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

double circulant_lifting_nuclear_norm(const DiscreteImage& u, CirculantMethod method) {
  const Dft2 dft(u.nx, u.ny);
  std::vector<cplx> vx, vy;
  difference_spectra(u, dft, vx, vy);
  const std::size_t n = u.size();
  if (method == CirculantMethod::Fast) {
    // Eigenvalues of a block-circulant matrix are the unnormalised DFT of its first column.
    std::vector<cplx> lx, ly;
    dft.forward(vx, lx);
    dft.forward(vy, ly);
    const double s = std::sqrt(double(n));
    double sum = 0.0;
    for (std::size_t p = 0; p < n; ++p) sum += s * std::sqrt(std::norm(lx[p]) + std::norm(ly[p]));
    return sum;
  }
  if (n > 256) throw Error(ErrorKind::InvalidArgument, "explicit circulant lifting is limited to 256 entries");
  const auto nn = Eigen::Index(n);
  Eigen::MatrixXcd c(2 * nn, nn);
  for (int b = 0; b < u.ny; ++b) {
    for (int a = 0; a < u.nx; ++a) {
      const Eigen::Index row = Eigen::Index(b) * u.nx + a;
      for (int d = 0; d < u.ny; ++d) {
        for (int cc = 0; cc < u.nx; ++cc) {
          const Eigen::Index col = Eigen::Index(d) * u.nx + cc;
          const std::size_t p = std::size_t(wrap_index(b - d, u.ny)) * u.nx + wrap_index(a - cc, u.nx);
          c(row, col) = vx[p];
          c(nn + row, col) = vy[p];
        }
      }
    }
  }
  return Eigen::BDCSVD<Eigen::MatrixXcd>(c).singularValues().sum();
}

double snr_db(std::span<const cplx> estimate, std::span<const cplx> reference) {
  if (estimate.size() != reference.size()) throw Error(ErrorKind::DimensionMismatch, "snr sizes");
  double ref = 0.0, err = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    ref += std::norm(reference[i]);
    err += std::norm(estimate[i] - reference[i]);
  }
  constexpr double kCap = 300.0;
  if (err == 0.0) return kCap;
  return std::min(kCap, 10.0 * std::log10(ref / err));
}

void to_json(nlohmann::json& j, const TvConfig& c) {
  j = {{"max_iters", c.max_iters}, {"tol", c.tol}, {"tau", c.tau}, {"sigma", c.sigma}, {"burn_in", c.burn_in}};
}

void from_json(const nlohmann::json& j, TvConfig& c) {
  TvConfig d;
  c.max_iters = j.value("max_iters", d.max_iters);
  c.tol = j.value("tol", d.tol);
  c.tau = j.value("tau", d.tau);
  c.sigma = j.value("sigma", d.sigma);
  c.burn_in = j.value("burn_in", d.burn_in);
  c.validate();
}

}  // namespace offgrid
