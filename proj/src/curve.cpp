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

#include "offgrid/curve.hpp"

#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <ostream>

#include "offgrid/error.hpp"

namespace offgrid {

namespace {

// Sample-grid offset (in cells). Irrational-looking so that symmetric test
// polynomials never vanish exactly on a grid vertex.
constexpr Vec2 kGridOffset{0.3713, 0.2861};

struct GaussRule {
  std::vector<double> t;  // nodes on [0, 1]
  std::vector<double> w;  // weights summing to 1
};

template <unsigned N>
GaussRule make_rule() {
  using Rule = boost::math::quadrature::gauss<double, N>;
  GaussRule r;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      r.t.push_back(0.5);
      r.w.push_back(0.5 * w[i]);
      continue;
    }
    r.t.push_back(0.5 * (1.0 - x[i]));
    r.w.push_back(0.5 * w[i]);
    r.t.push_back(0.5 * (1.0 + x[i]));
    r.w.push_back(0.5 * w[i]);
  }
  return r;
}

GaussRule gauss_rule(int order) {
  switch (order) {
    case 2: return make_rule<2>();
    case 4: return make_rule<4>();
    case 6: return make_rule<6>();
    case 8: return make_rule<8>();
    case 12: return make_rule<12>();
    case 16: return make_rule<16>();
    default: throw Error(ErrorKind::InvalidArgument, "supported Gauss orders: 2, 4, 6, 8, 12, 16");
  }
}

// Root of mu on the segment a -> b (signs of fa and mu(b) differ).
Vec2 refine_on_edge(const TrigPoly& p, Vec2 a, Vec2 b, double fa, double fb, double tol_abs) {
  const Vec2 d = b - a;
  double ta = 0.0, tb = 1.0;
  double t = fa / (fa - fb);
  for (int it = 0; it < 200; ++it) {
    Vec2 g;
    const double f = p.eval_with_gradient(a + t * d, g);
    if (std::abs(f) <= tol_abs) break;
    if ((f < 0.0) == (fa < 0.0)) {
      ta = t;
    } else {
      tb = t;
    }
    if (tb - ta < 1e-16) break;
    const double slope = dot(g, d);
    double next = slope != 0.0 ? t - f / slope : -1.0;
    if (!(next > ta && next < tb)) next = 0.5 * (ta + tb);
    t = next;
  }
  return a + t * d;
}

}  // namespace

double CurveDiscretization::length() const {
  double s = 0.0;
  for (double v : ds) s += v;
  return s;
}

CurveDiscretization trace_zero_set(const TrigPoly& p, int grid_n, double refine_tol) {
  if (!p.is_real()) throw Error(ErrorKind::InvalidArgument, "zero-set tracing needs a real polynomial");
  const IndexSet2D& s = p.support();
  const int bandwidth = std::max({std::abs(s.lo().x), std::abs(s.hi().x), std::abs(s.lo().y), std::abs(s.hi().y), 1});
  if (grid_n < 4 * bandwidth || grid_n < 4) {
    throw Error(ErrorKind::InvalidArgument, "trace grid is below four samples per period of the highest frequency");
  }
  const double scale = p.l1_norm();
  const int n = grid_n;
  const std::vector<double> vals = sample_real_on_grid(p, n, kGridOffset);
  auto wrap = [n](int i) { return ((i % n) + n) % n; };
  auto value = [&](int i, int j) { return vals[std::size_t(wrap(i)) * n + wrap(j)]; };
  auto negative = [&](int i, int j) { return value(i, j) < 0.0; };
  auto vertex = [n](int i, int j) { return Vec2{(i + kGridOffset.x) / n, (j + kGridOffset.y) / n}; };

  // Edge ids: horizontal (i,j)->(i+1,j) is 2*(i*n+j), vertical (i,j)->(i,j+1) is 2*(i*n+j)+1.
  std::vector<int> crossing_of_edge(std::size_t(2) * n * n, -1);
  std::vector<Vec2> crossings;
  const double tol_abs = refine_tol * scale;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::array<std::array<int, 2>, 2> ends{{{i + 1, j}, {i, j + 1}}};
      for (int dir = 0; dir < 2; ++dir) {
        const int i2 = ends[dir][0], j2 = ends[dir][1];
        if (negative(i, j) == negative(i2, j2)) continue;
        crossing_of_edge[std::size_t(2) * (i * n + j) + dir] = int(crossings.size());
        crossings.push_back(wrap_unit(refine_on_edge(p, vertex(i, j), vertex(i2, j2), value(i, j), value(i2, j2), tol_abs)));
      }
    }
  }
  if (crossings.empty()) throw Error(ErrorKind::NoZeroSet, "no sign change on the sample grid");

  std::vector<std::array<int, 2>> adj(crossings.size(), {-1, -1});
  auto link = [&](int a, int b) {
    for (int v : {a, b}) {
      const int other = v == a ? b : a;
      auto& slot = adj[std::size_t(v)];
      (slot[0] < 0 ? slot[0] : slot[1]) = other;
    }
  };
  auto edge_id = [&](int i, int j, int dir) {
    return crossing_of_edge[std::size_t(2) * (wrap(i) * n + wrap(j)) + dir];
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // bottom, right, top, left
      const std::array<int, 4> e{edge_id(i, j, 0), edge_id(i + 1, j, 1), edge_id(i, j + 1, 0), edge_id(i, j, 1)};
      std::array<int, 4> present{};
      int count = 0;
      for (int k = 0; k < 4; ++k) {
        if (e[k] >= 0) present[count++] = k;
      }
      if (count == 2) {
        link(e[present[0]], e[present[1]]);
      } else if (count == 4) {
        const Vec2 center = 0.5 * (vertex(i, j) + vertex(i + 1, j + 1));
        const bool center_negative = p.eval_real(center) < 0.0;
        if (center_negative == negative(i, j)) {
          link(e[0], e[1]);
          link(e[2], e[3]);
        } else {
          link(e[0], e[3]);
          link(e[1], e[2]);
        }
      }
    }
  }

  CurveDiscretization curve;
  curve.parent = p;
  std::vector<bool> visited(crossings.size(), false);
  for (std::size_t start = 0; start < crossings.size(); ++start) {
    if (visited[start]) continue;
    const std::size_t begin = curve.points.size();
    int prev = -1;
    int cur = int(start);
    while (cur >= 0 && !visited[std::size_t(cur)]) {
      visited[std::size_t(cur)] = true;
      curve.points.push_back(crossings[std::size_t(cur)]);
      const auto& nb = adj[std::size_t(cur)];
      const int next = nb[0] != prev ? nb[0] : nb[1];
      prev = cur;
      cur = next;
    }
    const std::size_t m = curve.points.size() - begin;
    for (std::size_t k = 0; k < m; ++k) {
      const Vec2 a = curve.points[begin + k];
      const Vec2 b = curve.points[begin + (k + 1) % m];
      const Vec2 c = curve.points[begin + (k + m - 1) % m];
      curve.ds.push_back(0.5 * (min_image(b - a).norm() + min_image(a - c).norm()));
    }
    curve.loop_offsets.push_back(curve.points.size());
  }

  curve.normals.reserve(curve.points.size());
  for (const Vec2& q : curve.points) {
    const Vec2 g = p.gradient(q);
    const double gn = g.norm();
    if (gn < 1e-9 * scale) throw Error(ErrorKind::SingularPoint, "vanishing gradient on the zero set");
    curve.normals.push_back((1.0 / gn) * g);
  }
  return curve;
}

CurveDiscretization gauss_quadrature(const CurveDiscretization& trace, int order, double refine_tol) {
  if (trace.empty()) throw Error(ErrorKind::UntracedCurve, "empty trace");
  const GaussRule rule = gauss_rule(order);
  const TrigPoly& p = trace.parent;
  const double tol_abs = refine_tol * p.l1_norm();
  const double grad_floor = 1e-9 * p.l1_norm();

  CurveDiscretization out;
  out.parent = p;
  out.quadrature_order = order;
  for (std::size_t loop = 0; loop < trace.loop_count(); ++loop) {
    const std::size_t b0 = trace.loop_offsets[loop];
    const std::size_t m = trace.loop_offsets[loop + 1] - b0;
    for (std::size_t k = 0; k < m; ++k) {
      const Vec2 a = trace.points[b0 + k];
      const Vec2 d = min_image(trace.points[b0 + (k + 1) % m] - a);
      const double len = d.norm();
      if (len == 0.0) continue;
      const Vec2 nhat{-d.y / len, d.x / len};
      for (std::size_t q = 0; q < rule.t.size(); ++q) {
        const Vec2 base = a + rule.t[q] * d;
        double h = 0.0;
        Vec2 g;
        double f = p.eval_with_gradient(base, g);
        for (int it = 0; it < 50 && std::abs(f) > tol_abs; ++it) {
          const double gn = dot(g, nhat);
          if (std::abs(gn) < 1e-3 * g.norm()) {
            throw Error(ErrorKind::SingularPoint, "trace too coarse for curve quadrature");
          }
          const double step = f / gn;
          h -= step;
          f = p.eval_with_gradient(base + h * nhat, g);
          if (std::abs(step) < 1e-17) break;
        }
        if (std::abs(h) > len) throw Error(ErrorKind::SingularPoint, "curve projection left its segment");
        const double gnorm = g.norm();
        if (gnorm < grad_floor) throw Error(ErrorKind::SingularPoint, "vanishing gradient on the zero set");
        const double dh = -dot(g, d) / dot(g, nhat);
        out.points.push_back(wrap_unit(base + h * nhat));
        out.normals.push_back((1.0 / gnorm) * g);
        out.ds.push_back(rule.w[q] * std::sqrt(len * len + dh * dh));
      }
    }
    out.loop_offsets.push_back(out.points.size());
  }
  return out;
}

double enclosed_area(const CurveDiscretization& curve) {
  double total = 0.0;
  for (std::size_t loop = 0; loop < curve.loop_count(); ++loop) {
    const std::size_t b0 = curve.loop_offsets[loop];
    const std::size_t b1 = curve.loop_offsets[loop + 1];
    if (b0 == b1) continue;
    double x = curve.points[b0].x;
    for (std::size_t i = b0; i < b1; ++i) {
      if (i > b0) x += min_image(curve.points[i].x - curve.points[i - 1].x);
      total += x * curve.normals[i].x * curve.ds[i];
    }
  }
  return wrap_unit(total);
}

void write_curve_csv(std::ostream& out, const CurveDiscretization& curve) {
  out << "x,y,nx,ny,ds\n";
  out.precision(17);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out << curve.points[i].x << ',' << curve.points[i].y << ',' << curve.normals[i].x << ','
        << curve.normals[i].y << ',' << curve.ds[i] << '\n';
  }
}

}  // namespace offgrid
