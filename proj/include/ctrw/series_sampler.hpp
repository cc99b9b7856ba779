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
// Exact samplers for the scaling-limit objects, all driven by truncated
// Poisson series: the stable subordinator D (Ferguson-Klass), the operator
// Levy motion A (LePage), the hitting time E(t), the coupled backward and
// forward CTRW limits, and the residual-order-statistics limit sequence.

#ifndef CTRW_SERIES_SAMPLER_HPP_
#define CTRW_SERIES_SAMPLER_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctrw/errors.hpp"
#include "ctrw/levy_measure.hpp"
#include "ctrw/vec.hpp"

namespace ctrw {

// The randomness shared by all coupled limit samplers: arrival levels
// Gamma_1 < Gamma_2 < ..., jump locations tau_k in (0,1), and directions
// V_k ~ sigma. Immutable after construction; reconstruction is deterministic
// from (seed, depth, spectral measure).
class PoissonDriver {
 public:
  static constexpr std::uint32_t kNoAtom = UINT32_MAX;

  // Direct construction for tests and hand-worked inputs. Directions may be
  // empty (purely temporal driver).
  PoissonDriver(std::vector<double> gammas, std::vector<double> taus,
                std::vector<Vec> directions,
                std::vector<std::uint32_t> atom_indices, std::uint64_t seed);

  std::size_t depth() const { return gammas_.size(); }
  int dimension() const { return dimension_; }
  std::uint64_t seed() const { return seed_; }
  bool has_directions() const { return dimension_ > 0; }

  double gamma(std::size_t k) const { return gammas_[k]; }
  double tau(std::size_t k) const { return taus_[k]; }
  std::uint32_t atom_index(std::size_t k) const { return atom_indices_[k]; }
  std::span<const double> direction(std::size_t k) const {
    return {dir_flat_.data() + k * dimension_,
            static_cast<std::size_t>(dimension_)};
  }

  // (tau, original index) sorted by tau; computed once during validation and
  // shared by every path builder.
  const std::vector<std::pair<double, std::uint32_t>>& location_order() const {
    return order_;
  }

 private:
  friend PoissonDriver sample_driver(std::size_t, std::uint64_t,
                                     const SpectralMeasure&);
  friend PoissonDriver sample_temporal_driver(std::size_t, std::uint64_t);
  PoissonDriver() = default;
  static PoissonDriver sample_impl(std::size_t depth, std::uint64_t seed,
                                   const SpectralMeasure* spectral);
  bool build_order();  // false on tied taus

  std::vector<double> gammas_;
  std::vector<double> taus_;
  std::vector<double> dir_flat_;  // depth x dimension, row-major
  std::vector<std::uint32_t> atom_indices_;
  std::vector<std::pair<double, std::uint32_t>> order_;
  int dimension_ = 0;
  std::uint64_t seed_ = 0;
};

// Samples a driver of the given depth. Draws are interleaved per index, so a
// driver of depth K is a prefix of the driver of depth K' > K with the same
// seed. Floating-point ties among the taus (or a zero exponential increment)
// are resampled with an incremented substream counter.
PoissonDriver sample_driver(std::size_t depth, std::uint64_t seed,
                            const SpectralMeasure& spectral);

// Same, without directions (for the independent temporal series of the
// uncoupled mode).
PoissonDriver sample_temporal_driver(std::size_t depth, std::uint64_t seed);

// Smallest depth whose expected residual temporal jump mass
// (c_time*T)^(1/alpha) * K^(1 - 1/alpha) / (1/alpha - 1) is below tol.
std::size_t default_truncation_depth(const SubordinatorTail& sub,
                                     double horizon, double tol);

// A cadlag pure-jump path on [0, T]: value(t) = sum of jumps at locations
// <= t plus drift * t. Jump locations are strictly increasing. Evaluation
// uses precomputed prefix sums, so at() and left_limit() of the same path
// are exactly consistent.
class StepPath {
 public:
  StepPath(std::vector<double> locations, std::vector<Vec> jumps,
           double horizon, Vec drift);
  // Flat row-major jump storage; avoids per-jump allocations at large depth.
  StepPath(std::vector<double> locations, std::vector<double> jump_flat,
           int dimension, double horizon, Vec drift);

  int dimension() const { return dimension_; }
  double horizon() const { return horizon_; }
  std::size_t jump_count() const { return locations_.size(); }
  double location(std::size_t i) const { return locations_[i]; }
  std::span<const double> jump(std::size_t i) const {
    return {jump_flat_.data() + i * dimension_,
            static_cast<std::size_t>(dimension_)};
  }

  Vec at(double t) const;          // sum over locations <= t, plus drift
  Vec left_limit(double t) const;  // sum over locations <  t, plus drift

  // Scalar accessors for d == 1 paths.
  double scalar_at(double t) const { return at(t)[0]; }
  double scalar_left(double t) const { return left_limit(t)[0]; }

  // Cumulative scalar value after the first i jumps (d == 1 only).
  double prefix_scalar(std::size_t i) const;
  bool nondecreasing_scalar() const { return nondecreasing_scalar_; }

 private:
  std::size_t count_leq(double t) const;
  std::size_t count_lt(double t) const;

  std::vector<double> locations_;
  std::vector<double> jump_flat_;    // jump_count x d
  std::vector<double> prefix_flat_;  // (jump_count + 1) x d cumulative sums
  Vec drift_;
  double horizon_ = 0.0;
  int dimension_ = 1;
  bool nondecreasing_scalar_ = false;
};

// CSV with header "location,value_0,...": one row per jump location carrying
// the path value at that location.
std::string step_path_csv(const StepPath& path);

// Ferguson-Klass series of the subordinator: a jump of size
// (c_time * T / Gamma_l)^(1/alpha) at location T * tau_l for each l.
StepPath subordinator_path(const PoissonDriver& driver, double horizon,
                           const SubordinatorTail& sub);

// LePage series of the operator Levy motion: a jump
// inverse_tail(Gamma_k / T, V_k) * V_k at location T * tau_k, retained iff
// its magnitude exceeds eps. eps == 0 is allowed only when every beta < 1
// (absolutely convergent series); the compensator drift is zero under the
// supported centering policies.
StepPath operator_levy_path(const PoissonDriver& driver, double horizon,
                            const LevyMeasureModel& model, double eps);

// Smallest jump location x with path value strictly above t. Throws
// TruncationExhaustedError when the truncated series never exceeds t.
double hitting_time(const StepPath& path, double t);

// Cadlag evaluation; kept as a named operation for symmetry with the path
// builders.
Vec evaluate(const StepPath& path, double t);

enum class LimitMode {
  kUncoupled,    // independent temporal series, own (Gamma, tau) driver
  kTight,        // d = 1, spatial mark identical to temporal mark
  kCommonGamma,  // shared (Gamma_k, tau_k); marks differ by tail
};

// Coupling between the spatial and temporal limit series. Tight mode
// requires a 1-d model whose single atom is +e1 with (c, beta) equal to
// (c_time, alpha), which makes the spatial marks literally the temporal ones.
class LimitCoupling {
 public:
  LimitCoupling(LimitMode mode, LevyMeasureModel model, SubordinatorTail sub);

  LimitMode mode() const { return mode_; }
  const LevyMeasureModel& model() const { return model_; }
  const SubordinatorTail& sub() const { return sub_; }

 private:
  LimitMode mode_;
  LevyMeasureModel model_;
  SubordinatorTail sub_;
};

// The limit marked point process of one draw: for every spatial point k the
// backward time D(T tau_k), the forward time D(T tau_k -), and the spatial
// mark (filtered to magnitude > eps). Points are ordered by jump location,
// which for the coupled modes is also backward-time order. The subordinator
// path is retained for hitting-time queries.
struct LimitMpp {
  std::vector<double> time_backward;
  std::vector<double> time_forward;
  std::vector<double> location;   // jump location T * tau_k of each point
  std::vector<double> mark_flat;  // point count x d
  std::vector<double> mark_magnitude;
  int dimension = 1;
  StepPath subordinator;

  std::size_t size() const { return time_backward.size(); }
  std::span<const double> mark(std::size_t k) const {
    return {mark_flat.data() + k * dimension,
            static_cast<std::size_t>(dimension)};
  }
};

// Builds the limit MPP. temporal_driver must be provided exactly when the
// mode is uncoupled; coupled modes reuse the spatial driver's (Gamma, tau).
LimitMpp build_limit_mpp(const LimitCoupling& coupling,
                         const PoissonDriver& driver,
                         const PoissonDriver* temporal_driver, double horizon,
                         double eps);

// Sum of spatial marks over {k : D(T tau_k) <= t}; the compensator term
// E(t) * compensator(eps) is identically zero under the supported centering
// policies. Throws TruncationExhaustedError if the truncated subordinator
// cannot decide the inclusion set (D total mass <= t).
Vec backward_limit(const LimitCoupling& coupling, const PoissonDriver& driver,
                   const PoissonDriver* temporal_driver, double horizon,
                   double t, double eps);

// Sum over {k : D(T tau_k -) <= t}; equals the backward limit plus the
// single straddling mark when D jumps over t at a spatial location.
Vec forward_limit(const LimitCoupling& coupling, const PoissonDriver& driver,
                  const PoissonDriver* temporal_driver, double horizon,
                  double t, double eps);

// Sums computed from an already-built limit MPP (avoids rebuilding paths).
Vec backward_limit(const LimitMpp& mpp, double t);
Vec forward_limit(const LimitMpp& mpp, double t);

// The limit of the normalized residual order statistics: the spatial marks
// sorted by descending magnitude, together with the antirank permutation
// dhat (dhat[k] = original index of the (k+1)-th largest mark) and its
// inverse rank permutation.
struct ResidualLimitSequence {
  std::vector<Vec> marks;              // k_max marks in dhat order
  std::vector<double> magnitudes;      // strictly decreasing
  std::vector<std::size_t> dhat;       // over all depth points
  std::vector<std::size_t> ranks;      // inverse of dhat
};

ResidualLimitSequence limit_residual_order_stats(const PoissonDriver& driver,
                                                 double horizon,
                                                 const LevyMeasureModel& model,
                                                 std::size_t k_max);

// Same on a bare per-atom tail family. Sorting the marks involves no
// centering, so this accepts tail combinations (mixed indices across 1)
// that a full model rejects.
ResidualLimitSequence limit_residual_order_stats(
    const PoissonDriver& driver, double horizon,
    std::span<const DirectionalTail> tails, std::size_t k_max);

}  // namespace ctrw

#endif  // CTRW_SERIES_SAMPLER_HPP_
