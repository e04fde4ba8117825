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

#include "offgrid/index_set.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <string>

#include "offgrid/error.hpp"

namespace offgrid {

IndexSet2D::IndexSet2D(Index2 lo, Index2 hi) : lo_(lo), hi_(hi) {
  if (lo.x > hi.x || lo.y > hi.y) {
    throw Error(ErrorKind::InvalidArgument, "empty index rectangle");
  }
}

IndexSet2D IndexSet2D::centered(int kx, int ky) { return {{-kx, -ky}, {kx, ky}}; }

IndexSet2D IndexSet2D::with_size(int nx, int ny) {
  if (nx < 1 || ny < 1) throw Error(ErrorKind::InvalidArgument, "side length must be positive");
  return {{-(nx / 2), -(ny / 2)}, {(nx - 1) / 2, (ny - 1) / 2}};
}

IndexSet2D minkowski_sum(const IndexSet2D& a, const IndexSet2D& b) {
  return {a.lo() + b.lo(), a.hi() + b.hi()};
}

IndexSet2D dilate(const IndexSet2D& a, int alpha) {
  if (alpha < 1) throw Error(ErrorKind::InvalidArgument, "dilation factor must be >= 1");
  return {alpha * a.lo(), alpha * a.hi()};
}

IndexSet2D contraction(const IndexSet2D& omega, const IndexSet2D& lambda) {
  const Index2 lo = omega.lo() + lambda.hi();
  const Index2 hi = omega.hi() + lambda.lo();
  if (lo.x > hi.x || lo.y > hi.y) {
    throw Error(ErrorKind::ContractionEmpty, "window does not fit inside the contracted set");
  }
  return {lo, hi};
}

std::size_t contraction_size(const IndexSet2D& omega, const IndexSet2D& lambda) {
  const int nx = omega.width() - lambda.width() + 1;
  const int ny = omega.height() - lambda.height() + 1;
  if (nx <= 0 || ny <= 0) return 0;
  return std::size_t(nx) * std::size_t(ny);
}

IndexSet2D hull(const IndexSet2D& a, const IndexSet2D& b) {
  return {{std::min(a.lo().x, b.lo().x), std::min(a.lo().y, b.lo().y)},
          {std::max(a.hi().x, b.hi().x), std::max(a.hi().y, b.hi().y)}};
}

std::size_t rank_bound(const IndexSet2D& lambda1, const IndexSet2D& lambda0) {
  if (lambda0.width() > lambda1.width() || lambda0.height() > lambda1.height()) {
    throw Error(ErrorKind::InvalidNesting, "edge bandwidth is wider than the filter support");
  }
  return lambda1.size() - contraction_size(lambda1, lambda0);
}

void to_json(nlohmann::json& j, const IndexSet2D& s) {
  j = nlohmann::json{{"lo", {s.lo().x, s.lo().y}}, {"hi", {s.hi().x, s.hi().y}}};
}

IndexSet2D index_set_from_json(const nlohmann::json& j) {
  try {
    const auto& lo = j.at("lo");
    const auto& hi = j.at("hi");
    return {{lo.at(0).get<int>(), lo.at(1).get<int>()}, {hi.at(0).get<int>(), hi.at(1).get<int>()}};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("index set json: ") + e.what());
  }
}

void from_json(const nlohmann::json& j, IndexSet2D& s) { s = index_set_from_json(j); }

}  // namespace offgrid
