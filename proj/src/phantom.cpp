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

#include "offgrid/phantom.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>

#include "offgrid/error.hpp"
#include "offgrid/kernels.hpp"

namespace offgrid {

std::size_t FourierGrid::sample_count() const {
  return std::size_t(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

void FourierGrid::symmetrize() {
  std::vector<cplx> out = values;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Index2 k = grid.at(i);
    if (grid.contains(-k)) out[i] = 0.5 * (values[i] + std::conj(values[grid.linear(-k)]));
  }
  values = std::move(out);
}

FourierGrid with_uniform_mask(const FourierGrid& f, std::size_t count, std::uint64_t seed) {
  const IndexSet2D& grid = f.grid;
  if (!grid.contains(Index2{0, 0})) throw Error(ErrorKind::DCIndex, "sampling grid must contain 0");
  if (count < 1 || count > grid.size()) throw Error(ErrorKind::InvalidArgument, "sample count out of range");
  const std::size_t dc = grid.linear({0, 0});
  std::vector<std::size_t> pool;
  pool.reserve(grid.size() - 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i != dc) pool.push_back(i);
  }
  // Partial Fisher-Yates with an explicit integer draw so results do not
  // depend on the standard library's distribution implementation.
  std::mt19937_64 gen(seed);
  for (std::size_t i = 0; i + 1 < count; ++i) {
    const std::size_t j = i + std::size_t(gen() % (pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  FourierGrid out = f;
  out.mask.assign(grid.size(), 0);
  out.mask[dc] = 1;
  for (std::size_t i = 0; i + 1 < count; ++i) out.mask[pool[i]] = 1;
  return out;
}

Phantom make_phantom(const TrigPoly& mu0, cplx a_in, cplx a_out, const PhantomOptions& opt) {
  const IndexSet2D& s = mu0.support();
  const int bandwidth = std::max({std::abs(s.lo().x), std::abs(s.hi().x), std::abs(s.lo().y), std::abs(s.hi().y), 1});
  const int n = opt.trace_grid > 0 ? opt.trace_grid : std::max(64, 8 * bandwidth);
  Phantom ph;
  ph.edge_poly = mu0;
  ph.a_in = a_in;
  ph.a_out = a_out;
  ph.curve = gauss_quadrature(trace_zero_set(mu0, n, opt.refine_tol), opt.quadrature_order, opt.refine_tol);
  return ph;
}

Phantom stripe_phantom(const PhantomOptions& opt) {
  // sin(2 pi x) = (e^{j2pi x} - e^{-j2pi x}) / 2j; negative on 1/2 < x < 1.
  const IndexSet2D support({-1, 0}, {1, 0});
  const TrigPoly mu0(support, {cplx{0.0, 0.5}, cplx{}, cplx{0.0, -0.5}}, true);
  return make_phantom(mu0, 0.0, 1.0, opt);
}

Phantom constant_phantom(cplx a) {
  Phantom ph;
  ph.a_in = a;
  ph.a_out = a;
  return ph;
}

std::pair<std::vector<cplx>, std::vector<cplx>> gradient_fourier(const Phantom& ph, const IndexSet2D& grid) {
  std::vector<cplx> gx(grid.size()), gy(grid.size());
  const cplx jump = ph.jump();
  if (jump == cplx{}) return {gx, gy};
  if (ph.curve.empty()) throw Error(ErrorKind::UntracedCurve, "phantom has no traced edge");

  const std::size_t m = ph.curve.size();
  std::vector<cplx> w(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    w[2 * i] = jump * ph.curve.normals[i].x * ph.curve.ds[i];
    w[2 * i + 1] = jump * ph.curve.normals[i].y * ph.curve.ds[i];
  }
  std::vector<cplx> out(2 * grid.size());
  kernels::omp::nudft(ph.curve.points, w, 2, grid, out);
  std::copy(out.begin(), out.begin() + std::ptrdiff_t(grid.size()), gx.begin());
  std::copy(out.begin() + std::ptrdiff_t(grid.size()), out.end(), gy.begin());
  return {gx, gy};
}

namespace {

void accumulate_coeffs(const Phantom& ph, FourierGrid& f) {
  const IndexSet2D& grid = f.grid;
  const cplx jump = ph.jump();
  f[{0, 0}] += ph.a_out;
  if (jump == cplx{}) return;

  f[{0, 0}] -= jump * enclosed_area(ph.curve);
  const auto [gx, gy] = gradient_fourier(ph, grid);
  // Quadrature noise floor for the cross-check.
  const double floor = 1e-11 * std::abs(jump) * std::max(ph.curve.length(), 1.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Index2 k = grid.at(i);
    if (k == Index2{0, 0}) continue;
    const cplx qx = k.x != 0 ? gx[i] / cplx(0.0, kTwoPi * k.x) : cplx{};
    const cplx qy = k.y != 0 ? gy[i] / cplx(0.0, kTwoPi * k.y) : cplx{};
    if (k.x != 0 && k.y != 0 && std::abs(qx - qy) > 1e-6 * std::max(std::abs(qx), std::abs(qy)) + floor) {
      throw Error(ErrorKind::InconsistentGradient,
                  "gradient quotients disagree at (" + std::to_string(k.x) + "," + std::to_string(k.y) + ")");
    }
    f.values[i] += std::abs(k.x) >= std::abs(k.y) ? qx : qy;
  }
}

}  // namespace

FourierGrid fourier_coeffs(const Phantom& ph, const IndexSet2D& grid) {
  return fourier_coeffs(std::span<const Phantom>(&ph, 1), grid);
}

FourierGrid fourier_coeffs(std::span<const Phantom> parts, const IndexSet2D& grid) {
  if (!grid.contains(Index2{0, 0})) throw Error(ErrorKind::DCIndex, "coefficient grid must contain 0");
  bool real = true;
  for (const Phantom& ph : parts) real = real && ph.real();
  FourierGrid f(grid, real);
  for (const Phantom& ph : parts) accumulate_coeffs(ph, f);
  if (real) {
    f.symmetrize();
    f[{0, 0}] = f[{0, 0}].real();
  }
  return f;
}

std::vector<double> rasterize(const Phantom& ph, int n) { return rasterize(std::span<const Phantom>(&ph, 1), n); }

std::vector<double> rasterize(std::span<const Phantom> parts, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "raster size must be positive");
  std::vector<double> img(std::size_t(n) * n, 0.0);
  for (const Phantom& ph : parts) {
    if (ph.jump() == cplx{}) {
      for (double& v : img) v += ph.a_out.real();
      continue;
    }
    // sample_real_on_grid is x-major; the raster is y-major.
    const std::vector<double> mu = sample_real_on_grid(ph.edge_poly, n, {0.5, 0.5});
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const bool inside = mu[std::size_t(i) * n + j] < 0.0;
        img[std::size_t(j) * n + i] += (inside ? ph.a_in : ph.a_out).real();
      }
    }
  }
  return img;
}

namespace {

constexpr std::array<char, 4> kFgrdMagic{'F', 'G', 'R', 'D'};

template <class T>
void put_le(std::ostream& out, T v) {
  std::array<char, sizeof(T)> b;
  std::memcpy(b.data(), &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  out.write(b.data(), b.size());
}

template <class T>
T get_le(std::istream& in) {
  std::array<char, sizeof(T)> b;
  if (!in.read(b.data(), b.size())) throw Error(ErrorKind::Io, "truncated FGRD stream");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  T v;
  std::memcpy(&v, b.data(), sizeof(T));
  return v;
}

}  // namespace

void write_fgrd(std::ostream& out, const FourierGrid& f) {
  out.write(kFgrdMagic.data(), kFgrdMagic.size());
  for (int v : {f.grid.lo().x, f.grid.lo().y, f.grid.hi().x, f.grid.hi().y}) {
    put_le(out, static_cast<std::uint32_t>(v));
  }
  for (const cplx& z : f.values) {
    put_le(out, z.real());
    put_le(out, z.imag());
  }
  if (!out) throw Error(ErrorKind::Io, "FGRD write failed");
}

FourierGrid read_fgrd(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kFgrdMagic) throw Error(ErrorKind::Io, "not an FGRD stream");
  std::array<int, 4> d{};
  for (int& v : d) v = static_cast<int>(get_le<std::uint32_t>(in));
  FourierGrid f(IndexSet2D({d[0], d[1]}, {d[2], d[3]}), false);
  for (cplx& z : f.values) {
    const double re = get_le<double>(in);
    z = {re, get_le<double>(in)};
  }
  return f;
}

void write_fgrd_file(const std::string& path, const FourierGrid& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path);
  write_fgrd(out, f);
}

FourierGrid read_fgrd_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return read_fgrd(in);
}

void to_json(nlohmann::json& j, const FourierGrid& f) {
  j = nlohmann::json::object();
  j["grid"] = f.grid;
  auto vals = nlohmann::json::array();
  for (const cplx& z : f.values) vals.push_back({z.real(), z.imag()});
  j["values"] = std::move(vals);
  j["real"] = f.real;
  if (f.has_mask()) j["mask"] = f.mask;
}

FourierGrid fourier_grid_from_json(const nlohmann::json& j) {
  FourierGrid f(index_set_from_json(j.at("grid")), j.value("real", false));
  const auto& vals = j.at("values");
  if (vals.size() != f.grid.size()) throw Error(ErrorKind::DimensionMismatch, "FourierGrid value count");
  for (std::size_t i = 0; i < vals.size(); ++i) f.values[i] = {vals[i].at(0).get<double>(), vals[i].at(1).get<double>()};
  if (j.contains("mask")) {
    f.mask = j["mask"].get<std::vector<std::uint8_t>>();
    if (f.mask.size() != f.grid.size()) throw Error(ErrorKind::DimensionMismatch, "FourierGrid mask size");
  }
  return f;
}

void write_pgm16(std::ostream& out, std::span<const double> image, int width, int height) {
  if (image.size() != std::size_t(width) * std::size_t(height)) {
    throw Error(ErrorKind::DimensionMismatch, "PGM size");
  }
  const auto [lo_it, hi_it] = std::minmax_element(image.begin(), image.end());
  const double lo = image.empty() ? 0.0 : *lo_it;
  const double span = image.empty() ? 0.0 : *hi_it - lo;
  out << "P5\n" << width << ' ' << height << "\n65535\n";
  for (double v : image) {
    const double t = span > 0.0 ? (v - lo) / span : 0.0;
    const auto q = static_cast<std::uint16_t>(std::lround(t * 65535.0));
    const char b[2] = {char(q >> 8), char(q & 0xff)};
    out.write(b, 2);
  }
  if (!out) throw Error(ErrorKind::Io, "PGM write failed");
}

}  // namespace offgrid
