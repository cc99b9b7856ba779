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

#include "ctrw/ctrw_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace ctrw {

CouplingSpec::CouplingSpec(WalkMode mode, SubordinatorTail sub,
                           LevyMeasureModel model)
    : mode_(mode), sub_(sub), model_(std::move(model)) {
  if (mode_ == WalkMode::kTight) {
    const bool one_atom = !model_.spectral().uniform() &&
                          model_.spectral().atom_count() == 1 &&
                          model_.dimension() == 1 &&
                          model_.spectral().atoms().front().direction[0] > 0.0;
    if (!one_atom || model_.tails().front().c != sub_.c_time ||
        model_.tails().front().beta != sub_.alpha) {
      throw std::invalid_argument(
          "CouplingSpec: tight mode requires the 1-d model with a single +e1 "
          "atom and (c, beta) = (c_time, alpha)");
    }
  }
  inv_alpha_ = 1.0 / sub_.alpha;
  wait_floor_ = std::pow(sub_.c_time, inv_alpha_);
  for (const auto& tail : model_.tails()) {
    inv_beta_.push_back(1.0 / tail.beta);
    radius_floor_.push_back(std::pow(tail.c, 1.0 / tail.beta));
  }
}

namespace {

// Pareto by inversion: P(W > w) = 1/w for w >= 1.
inline double pareto_shock(Rng& rng) { return 1.0 / rng.uniform01(); }

std::uint32_t draw_atom(Rng& rng, const std::vector<SpectralAtom>& atoms) {
  const double u = rng.uniform01();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < atoms.size(); ++i) {
    acc += atoms[i].weight;
    if (u < acc) return static_cast<std::uint32_t>(i);
  }
  return static_cast<std::uint32_t>(atoms.size() - 1);
}

void draw_direction(Rng& rng, const SpectralMeasure& spectral, double* out,
                    std::uint32_t* atom_index) {
  const int d = spectral.dimension();
  if (spectral.uniform()) {
    double s;
    do {
      for (int i = 0; i < d; ++i) out[i] = rng.normal();
      s = sq_norm({out, static_cast<std::size_t>(d)});
    } while (s == 0.0);
    const double inv = 1.0 / std::sqrt(s);
    for (int i = 0; i < d; ++i) out[i] *= inv;
    *atom_index = 0;
  } else {
    const std::uint32_t idx = draw_atom(rng, spectral.atoms());
    const Vec& dir = spectral.atoms()[idx].direction;
    for (int i = 0; i < d; ++i) out[i] = dir[i];
    *atom_index = idx;
  }
}

}  // namespace

void CouplingSpec::draw_step(Rng& rng, double* wait, double* jump) const {
  const int d = model_.dimension();
  switch (mode_) {
    case WalkMode::kTight: {
      const double w = pareto_shock(rng);
      *wait = wait_floor_ * std::pow(w, inv_alpha_);
      jump[0] = *wait;
      return;
    }
    case WalkMode::kCommonShock: {
      const double w = pareto_shock(rng);
      *wait = wait_floor_ * std::pow(w, inv_alpha_);
      std::uint32_t idx = 0;
      draw_direction(rng, model_.spectral(), jump, &idx);
      const double radius = radius_floor_[idx] * std::pow(w, inv_beta_[idx]);
      for (int i = 0; i < d; ++i) jump[i] *= radius;
      return;
    }
    case WalkMode::kUncoupled: {
      const double w = pareto_shock(rng);
      *wait = wait_floor_ * std::pow(w, inv_alpha_);
      std::uint32_t idx = 0;
      draw_direction(rng, model_.spectral(), jump, &idx);
      const double radius =
          radius_floor_[idx] * std::pow(pareto_shock(rng), inv_beta_[idx]);
      for (int i = 0; i < d; ++i) jump[i] *= radius;
      return;
    }
  }
}

WalkSample WalkSample::generate(std::size_t n, const CouplingSpec& coupling,
                                std::uint64_t seed) {
  if (n < 1) {
    throw std::domain_error("sample_walk: n must be >= 1");
  }
  WalkSample walk;
  walk.seed_ = seed;
  walk.dimension_ = coupling.dimension();
  walk.waits_.resize(n);
  walk.jump_flat_.resize(n * static_cast<std::size_t>(walk.dimension_));
  walk.renewal_.resize(n + 1);
  walk.renewal_[0] = 0.0;
  Rng rng(seed);
  for (std::size_t k = 0; k < n; ++k) {
    coupling.draw_step(rng, &walk.waits_[k],
                       walk.jump_flat_.data() + k * walk.dimension_);
    walk.renewal_[k + 1] = walk.renewal_[k] + walk.waits_[k];
  }
  return walk;
}

WalkSample WalkSample::from_arrays(std::vector<double> waits,
                                   std::vector<Vec> jumps) {
  if (waits.empty() || waits.size() != jumps.size()) {
    throw std::invalid_argument("WalkSample: waits/jumps size mismatch");
  }
  WalkSample walk;
  walk.dimension_ = static_cast<int>(jumps.front().size());
  walk.waits_ = std::move(waits);
  const std::size_t n = walk.waits_.size();
  walk.renewal_.resize(n + 1);
  walk.renewal_[0] = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(walk.waits_[k] > 0.0)) {
      throw std::invalid_argument("WalkSample: waits must be positive");
    }
    walk.renewal_[k + 1] = walk.renewal_[k] + walk.waits_[k];
  }
  walk.jump_flat_.reserve(n * static_cast<std::size_t>(walk.dimension_));
  for (const auto& j : jumps) {
    if (static_cast<int>(j.size()) != walk.dimension_) {
      throw std::invalid_argument("WalkSample: mixed jump dimensions");
    }
    walk.jump_flat_.insert(walk.jump_flat_.end(), j.begin(), j.end());
  }
  return walk;
}

WalkSample sample_walk(std::size_t n, const CouplingSpec& coupling,
                       std::uint64_t seed) {
  return WalkSample::generate(n, coupling, seed);
}

CountResult counting(const WalkSample& walk, double t) {
  if (!(t >= 0.0)) {
    throw std::domain_error("counting: t must be >= 0");
  }
  const std::size_t n = walk.size();
  if (t >= walk.renewal_time(n)) {
    return {n, true};
  }
  // Largest k with T_k <= t: renewal times are strictly increasing.
  std::size_t lo = 0, hi = n;  // T_lo <= t < T_hi invariant
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (walk.renewal_time(mid) <= t) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, false};
}

namespace {

Vec normalized_partial_sum(const WalkSample& walk, std::size_t upto,
                           const Normalization& nrm) {
  const int d = walk.dimension();
  Vec acc = zeros(static_cast<std::size_t>(d));
  for (std::size_t k = 0; k < upto; ++k) {
    const auto jump = walk.jump(k);
    for (int i = 0; i < d; ++i) acc[i] += nrm.spatial_diag[i] * jump[i];
  }
  return acc;
}

}  // namespace

Vec ctrw_position_backward(const WalkSample& walk, double t,
                           std::uint64_t n_scale,
                           const CouplingSpec& coupling) {
  const Normalization nrm =
      normalization(n_scale, coupling.model(), coupling.sub());
  const CountResult c = counting(walk, t * nrm.b_n);
  if (c.saturated) {
    throw WalkExhaustedError(
        "ctrw_position_backward: walk too short to decide N_{t b_n}");
  }
  return normalized_partial_sum(walk, c.count, nrm);
}

Vec ctrw_position_forward(const WalkSample& walk, double t,
                          std::uint64_t n_scale,
                          const CouplingSpec& coupling) {
  const Normalization nrm =
      normalization(n_scale, coupling.model(), coupling.sub());
  const CountResult c = counting(walk, t * nrm.b_n);
  if (c.saturated || c.count + 1 > walk.size()) {
    throw WalkExhaustedError(
        "ctrw_position_forward: walk too short for step N_{t b_n} + 1");
  }
  return normalized_partial_sum(walk, c.count + 1, nrm);
}

double hitting_time_mean_proxy(double t, const SubordinatorTail& sub) {
  return std::pow(t, sub.alpha) /
         (sub.c_time * std::tgamma(1.0 - sub.alpha) *
          std::tgamma(1.0 + sub.alpha));
}

std::size_t recommended_walk_length(double t, std::uint64_t n_scale,
                                    const SubordinatorTail& sub,
                                    double safety) {
  const double proxy = hitting_time_mean_proxy(t, sub);
  const double n = std::ceil(safety * static_cast<double>(n_scale) * proxy);
  return static_cast<std::size_t>(std::max(16.0, n));
}

PositionPair sample_position_pair(double t, std::uint64_t n_scale,
                                  const CouplingSpec& coupling,
                                  std::uint64_t seed) {
  std::size_t n = recommended_walk_length(t, n_scale, coupling.sub());
  for (;;) {
    const WalkSample walk = sample_walk(n, coupling, seed);
    try {
      PositionPair pair;
      pair.backward = ctrw_position_backward(walk, t, n_scale, coupling);
      pair.forward = ctrw_position_forward(walk, t, n_scale, coupling);
      return pair;
    } catch (const WalkExhaustedError&) {
      n *= 2;  // prefix-consistent regeneration, only appends steps
    }
  }
}

ResidualOrderResult residual_order_statistics(const std::vector<Vec>& vectors,
                                              std::size_t k_max) {
  if (vectors.empty()) {
    throw std::domain_error("residual_order_statistics: empty input");
  }
  if (k_max > vectors.size()) {
    throw std::domain_error("residual_order_statistics: k_max exceeds size");
  }
  std::vector<double> norms(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) norms[i] = norm(vectors[i]);
  std::vector<std::size_t> order(vectors.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return norms[a] > norms[b];
                   });
  ResidualOrderResult out;
  out.sorted.reserve(k_max);
  out.antiranks.assign(order.begin(), order.begin() + k_max);
  for (std::size_t k = 0; k < k_max; ++k) {
    out.sorted.push_back(vectors[order[k]]);
  }
  return out;
}

MarkedPointProcess marked_point_process(const WalkSample& walk,
                                        std::uint64_t n_scale,
                                        MppMarking marking, double eps,
                                        const CouplingSpec& coupling) {
  if (!(eps > 0.0)) {
    throw std::domain_error(
        "marked_point_process: eps must be positive (the point process only "
        "converges away from the origin ball)");
  }
  const Normalization nrm =
      normalization(n_scale, coupling.model(), coupling.sub());
  const int d = walk.dimension();
  MarkedPointProcess mpp;
  mpp.dimension = d;
  Vec mark(static_cast<std::size_t>(d));
  for (std::size_t k = 0; k < walk.size(); ++k) {
    const auto jump = walk.jump(k);
    for (int i = 0; i < d; ++i) mark[i] = nrm.spatial_diag[i] * jump[i];
    if (norm(mark) < eps) continue;
    const std::size_t time_index = marking == MppMarking::kBackward ? k + 1 : k;
    mpp.times.push_back(walk.renewal_time(time_index) / nrm.b_n);
    mpp.mark_flat.insert(mpp.mark_flat.end(), mark.begin(), mark.end());
  }
  return mpp;
}

std::string marked_point_process_csv(const MarkedPointProcess& mpp) {
  std::string out = "time";
  for (int c = 0; c < mpp.dimension; ++c) {
    char col[32];
    std::snprintf(col, sizeof(col), ",mark_%d", c);
    out += col;
  }
  out += "\n";
  char buf[64];
  for (std::size_t k = 0; k < mpp.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g", mpp.times[k]);
    out += buf;
    for (double x : mpp.mark(k)) {
      std::snprintf(buf, sizeof(buf), ",%.17g", x);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace ctrw
