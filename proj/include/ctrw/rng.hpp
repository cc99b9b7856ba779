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

#ifndef CTRW_RNG_HPP_
#define CTRW_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <cstdint>

namespace ctrw {

// SplitMix64 finalizer (Vigna 2015). Used both to scramble user seeds and as
// the documented replicate-seed derivation: child seeds are
// splitmix64_mix(base ^ (r + 1) * 0x9E3779B97F4A7C15).
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
  z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t replicate) {
  return splitmix64_mix(base ^ ((replicate + 1) * UINT64_C(0x9E3779B97F4A7C15)));
}

// SplitMix64 stream (Steele, Lea, Flood 2014; Vigna 2015). Draws are all
// inverse-transform or polar-method based so the mapping from the 64-bit
// stream to variates is pinned by this header, not by the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(splitmix64_mix(seed)) {}

  std::uint64_t next_u64() {
    state_ += UINT64_C(0x9E3779B97F4A7C15);
    return splitmix64_mix(state_);
  }

  // Uniform on the open interval (0,1); never returns 0 or 1, so logs and
  // reciprocals are safe.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard exponential by inversion.
  double exponential() { return -std::log(uniform01()); }

  // Standard normal, Marsaglia polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ctrw

#endif  // CTRW_RNG_HPP_
