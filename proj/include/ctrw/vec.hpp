// Copyright 2026 ctrw authors.
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

#ifndef CTRW_VEC_HPP_
#define CTRW_VEC_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace ctrw {

// Euclidean vectors in R^d; d is small (typically 1 or 2) and dynamic.
using Vec = std::vector<double>;

inline double sq_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

inline double norm(std::span<const double> v) { return std::sqrt(sq_norm(v)); }

inline Vec zeros(std::size_t d) { return Vec(d, 0.0); }

inline void add_scaled(Vec& acc, std::span<const double> v, double scale) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += scale * v[i];
}

inline Vec scaled(std::span<const double> v, double scale) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = scale * v[i];
  return out;
}

inline Vec sub(std::span<const double> a, std::span<const double> b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

}  // namespace ctrw

#endif  // CTRW_VEC_HPP_
