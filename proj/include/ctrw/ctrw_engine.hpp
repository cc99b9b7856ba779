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
//
// Finite-n coupled CTRW data: waiting times, jumps, counting processes,
// normalized positions, residual order statistics and marked point
// processes -- the pre-limit side of every limit theorem.

#ifndef CTRW_CTRW_ENGINE_HPP_
#define CTRW_CTRW_ENGINE_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ctrw/errors.hpp"
#include "ctrw/levy_measure.hpp"
#include "ctrw/rng.hpp"
#include "ctrw/vec.hpp"

namespace ctrw {

enum class WalkMode {
  kUncoupled,    // waits and jumps from independent streams, same marginals
  kTight,        // d = 1, X_k = J_k identically
  kCommonShock,  // one Pareto(1) shock per step drives both marginals
};

// Joint law of one step (J, X). Waiting times are exact Pareto with
// P(J > t) = c_time * t^(-alpha) above the scale floor c_time^(1/alpha);
// jump radii given direction v satisfy P(R > u | v) = c(v) * u^(-beta(v)).
// Tight mode requires the 1-d model with a single +e1 atom and
// (c, beta) = (c_time, alpha), so that X = J has the right spatial tail.
class CouplingSpec {
 public:
  CouplingSpec(WalkMode mode, SubordinatorTail sub, LevyMeasureModel model);

  WalkMode mode() const { return mode_; }
  const SubordinatorTail& sub() const { return sub_; }
  const LevyMeasureModel& model() const { return model_; }
  int dimension() const { return model_.dimension(); }

  // Draws one (J, X) pair; the per-step draw order is fixed, so a walk of
  // length n is a prefix of any longer walk with the same seed.
  void draw_step(Rng& rng, double* wait, double* jump) const;

 private:
  WalkMode mode_;
  SubordinatorTail sub_;
  LevyMeasureModel model_;
  // Cached per-step constants: the scale floors and inverse indices.
  double wait_floor_ = 1.0;
  double inv_alpha_ = 1.0;
  std::vector<double> radius_floor_;
  std::vector<double> inv_beta_;
};

// An i.i.d. sample of coupled steps; immutable, reconstructible from
// (seed, n, coupling).
class WalkSample {
 public:
  static WalkSample generate(std::size_t n, const CouplingSpec& coupling,
                             std::uint64_t seed);
  static WalkSample from_arrays(std::vector<double> waits,
                                std::vector<Vec> jumps);

  std::size_t size() const { return waits_.size(); }
  int dimension() const { return dimension_; }
  std::uint64_t seed() const { return seed_; }
  double wait(std::size_t k) const { return waits_[k]; }
  std::span<const double> jump(std::size_t k) const {
    return {jump_flat_.data() + k * dimension_,
            static_cast<std::size_t>(dimension_)};
  }
  // T_k = J_1 + ... + J_k; renewal_time(0) = 0.
  double renewal_time(std::size_t k) const { return renewal_[k]; }

 private:
  WalkSample() = default;

  std::vector<double> waits_;
  std::vector<double> jump_flat_;  // n x d
  std::vector<double> renewal_;   // n + 1 cumulative waiting times
  int dimension_ = 1;
  std::uint64_t seed_ = 0;
};

WalkSample sample_walk(std::size_t n, const CouplingSpec& coupling,
                       std::uint64_t seed);

struct CountResult {
  std::size_t count;  // largest k with T_k <= t
  bool saturated;     // t >= T_n: the sample cannot decide the count
};

CountResult counting(const WalkSample& walk, double t);

// Sum_{k <= N_{t b_n}} A_n X_k. Centering is identically zero under the
// supported policies (beta < 1: no centering; beta > 1: symmetric model).
// Throws WalkExhaustedError when the walk is too short to decide N (the
// forward variant additionally needs step N + 1).
Vec ctrw_position_backward(const WalkSample& walk, double t,
                           std::uint64_t n_scale,
                           const CouplingSpec& coupling);
Vec ctrw_position_forward(const WalkSample& walk, double t,
                          std::uint64_t n_scale, const CouplingSpec& coupling);

// Both positions from one pre-sized walk, growing geometrically on
// saturation (regeneration is prefix-consistent, so growth only appends
// steps). This is the orchestration entry point for time-horizon
// experiments.
struct PositionPair {
  Vec backward;
  Vec forward;
};
PositionPair sample_position_pair(double t, std::uint64_t n_scale,
                                  const CouplingSpec& coupling,
                                  std::uint64_t seed);

// Pre-sizing rule: ceil(safety * n_scale * E-proxy(t)) steps, where
// E-proxy(t) = t^alpha / (c_time * Gamma(1-alpha) * Gamma(1+alpha)) is the
// mean of the limiting hitting time.
std::size_t recommended_walk_length(double t, std::uint64_t n_scale,
                                    const SubordinatorTail& sub,
                                    double safety = 4.0);
double hitting_time_mean_proxy(double t, const SubordinatorTail& sub);

// Top-k_max vectors by descending Euclidean norm plus the antiranks: the
// original index of the k-th largest. Ties break toward the smaller
// original index.
struct ResidualOrderResult {
  std::vector<Vec> sorted;
  std::vector<std::size_t> antiranks;
};
ResidualOrderResult residual_order_statistics(const std::vector<Vec>& vectors,
                                              std::size_t k_max);

enum class MppMarking { kBackward, kForward };

// Struct-of-arrays marked point process, sorted by time.
struct MarkedPointProcess {
  std::vector<double> times;
  std::vector<double> mark_flat;  // point count x d
  int dimension = 1;

  std::size_t size() const { return times.size(); }
  std::span<const double> mark(std::size_t k) const {
    return {mark_flat.data() + k * dimension,
            static_cast<std::size_t>(dimension)};
  }
  double mark_norm(std::size_t k) const { return norm(mark(k)); }
};

// Points (b_n^{-1} T_k, A_n X_k) for backward marking and
// (b_n^{-1} T_{k-1}, A_n X_k) for forward marking, over the whole walk,
// filtered to mark norm >= eps.
MarkedPointProcess marked_point_process(const WalkSample& walk,
                                        std::uint64_t n_scale,
                                        MppMarking marking, double eps,
                                        const CouplingSpec& coupling);

// CSV with header "time,mark_0,...".
std::string marked_point_process_csv(const MarkedPointProcess& mpp);

}  // namespace ctrw

#endif  // CTRW_CTRW_ENGINE_HPP_
