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

#include "ctrw/series_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "ctrw/rng.hpp"

namespace ctrw {

namespace {

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

// Index drawn from the atom weights by inverse transform over the cumulative
// weights; the last atom absorbs any rounding slack.
std::uint32_t draw_atom(Rng& rng, const std::vector<SpectralAtom>& atoms) {
  const double u = rng.uniform01();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < atoms.size(); ++i) {
    acc += atoms[i].weight;
    if (u < acc) return static_cast<std::uint32_t>(i);
  }
  return static_cast<std::uint32_t>(atoms.size() - 1);
}

void draw_unit_vector(Rng& rng, int d, double* out) {
  double s;
  do {
    for (int i = 0; i < d; ++i) out[i] = rng.normal();
    s = sq_norm({out, static_cast<std::size_t>(d)});
  } while (s == 0.0);
  const double inv = 1.0 / std::sqrt(s);
  for (int i = 0; i < d; ++i) out[i] *= inv;
}

}  // namespace

PoissonDriver PoissonDriver::sample_impl(std::size_t depth, std::uint64_t seed,
                                         const SpectralMeasure* spectral) {
  if (depth == 0) {
    throw std::domain_error("sample_driver: depth must be >= 1");
  }
  const int d = spectral ? spectral->dimension() : 0;
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(mix_seed(seed, attempt));
    PoissonDriver driver;
    driver.seed_ = seed;
    driver.dimension_ = d;
    driver.gammas_.resize(depth);
    driver.taus_.resize(depth);
    driver.atom_indices_.assign(depth, PoissonDriver::kNoAtom);
    driver.dir_flat_.resize(depth * static_cast<std::size_t>(d));
    double gamma = 0.0;
    for (std::size_t k = 0; k < depth; ++k) {
      gamma += rng.exponential();
      driver.gammas_[k] = gamma;
      driver.taus_[k] = rng.uniform01();
      if (spectral) {
        if (spectral->uniform()) {
          draw_unit_vector(rng, d, driver.dir_flat_.data() + k * d);
        } else {
          const std::uint32_t idx = draw_atom(rng, spectral->atoms());
          driver.atom_indices_[k] = idx;
          const Vec& dir = spectral->atoms()[idx].direction;
          std::copy(dir.begin(), dir.end(), driver.dir_flat_.begin() + k * d);
        }
      }
    }
    if (strictly_increasing(driver.gammas_) && driver.build_order()) {
      return driver;
    }
    // Floating-point coincidence; retry on the next substream.
  }
}

bool PoissonDriver::build_order() {
  order_.resize(taus_.size());
  for (std::size_t k = 0; k < taus_.size(); ++k) {
    order_[k] = {taus_[k], static_cast<std::uint32_t>(k)};
  }
  std::sort(order_.begin(), order_.end());
  for (std::size_t k = 1; k < order_.size(); ++k) {
    if (order_[k].first == order_[k - 1].first) return false;
  }
  return true;
}

PoissonDriver::PoissonDriver(std::vector<double> gammas,
                             std::vector<double> taus,
                             std::vector<Vec> directions,
                             std::vector<std::uint32_t> atom_indices,
                             std::uint64_t seed)
    : gammas_(std::move(gammas)), taus_(std::move(taus)), seed_(seed) {
  const std::size_t k = gammas_.size();
  if (k == 0) {
    throw std::domain_error("PoissonDriver: depth must be >= 1");
  }
  if (taus_.size() != k) {
    throw std::invalid_argument("PoissonDriver: taus length mismatch");
  }
  if (!(gammas_.front() > 0.0) || !strictly_increasing(gammas_)) {
    throw std::invalid_argument(
        "PoissonDriver: gammas must be positive and strictly increasing");
  }
  for (double t : taus_) {
    if (!(t > 0.0 && t < 1.0)) {
      throw std::invalid_argument("PoissonDriver: taus must lie in (0,1)");
    }
  }
  if (!build_order()) {
    throw std::invalid_argument("PoissonDriver: taus must be distinct");
  }
  if (!directions.empty()) {
    if (directions.size() != k) {
      throw std::invalid_argument("PoissonDriver: directions length mismatch");
    }
    dimension_ = static_cast<int>(directions.front().size());
    dir_flat_.reserve(k * directions.front().size());
    for (const auto& dir : directions) {
      if (static_cast<int>(dir.size()) != dimension_) {
        throw std::invalid_argument("PoissonDriver: mixed direction sizes");
      }
      dir_flat_.insert(dir_flat_.end(), dir.begin(), dir.end());
    }
  }
  if (atom_indices.empty()) {
    atom_indices_.assign(k, kNoAtom);
  } else {
    if (atom_indices.size() != k) {
      throw std::invalid_argument(
          "PoissonDriver: atom_indices length mismatch");
    }
    atom_indices_ = std::move(atom_indices);
  }
}

PoissonDriver sample_driver(std::size_t depth, std::uint64_t seed,
                            const SpectralMeasure& spectral) {
  return PoissonDriver::sample_impl(depth, seed, &spectral);
}

PoissonDriver sample_temporal_driver(std::size_t depth, std::uint64_t seed) {
  return PoissonDriver::sample_impl(depth, seed, nullptr);
}

std::size_t default_truncation_depth(const SubordinatorTail& sub,
                                     double horizon, double tol) {
  if (!(horizon > 0.0) || !(tol > 0.0)) {
    throw std::domain_error("default_truncation_depth: need horizon, tol > 0");
  }
  const double inv_alpha = 1.0 / sub.alpha;
  // (c_time T)^(1/alpha) * K^(1 - 1/alpha) / (1/alpha - 1) <= tol
  const double lead = std::pow(sub.c_time * horizon, inv_alpha);
  const double k = std::pow(tol * (inv_alpha - 1.0) / lead,
                            1.0 / (1.0 - inv_alpha));
  const double clamped = std::max(1.0, std::ceil(k));
  return static_cast<std::size_t>(clamped);
}

StepPath::StepPath(std::vector<double> locations, std::vector<Vec> jumps,
                   double horizon, Vec drift) {
  if (jumps.size() != locations.size()) {
    throw std::invalid_argument("StepPath: jumps/locations length mismatch");
  }
  const int d = drift.empty()
                    ? (jumps.empty() ? 1 : static_cast<int>(jumps.front().size()))
                    : static_cast<int>(drift.size());
  std::vector<double> flat;
  flat.reserve(jumps.size() * static_cast<std::size_t>(d));
  for (const auto& j : jumps) {
    if (static_cast<int>(j.size()) != d) {
      throw std::invalid_argument("StepPath: jump dimension mismatch");
    }
    flat.insert(flat.end(), j.begin(), j.end());
  }
  *this = StepPath(std::move(locations), std::move(flat), d, horizon,
                   std::move(drift));
}

StepPath::StepPath(std::vector<double> locations, std::vector<double> jump_flat,
                   int dimension, double horizon, Vec drift)
    : locations_(std::move(locations)), jump_flat_(std::move(jump_flat)),
      drift_(std::move(drift)), horizon_(horizon), dimension_(dimension) {
  if (!(horizon_ > 0.0)) {
    throw std::invalid_argument("StepPath: horizon must be positive");
  }
  if (dimension_ < 1) {
    throw std::invalid_argument("StepPath: dimension must be >= 1");
  }
  const std::size_t d = static_cast<std::size_t>(dimension_);
  if (jump_flat_.size() != locations_.size() * d) {
    throw std::invalid_argument("StepPath: jumps/locations length mismatch");
  }
  if (drift_.empty()) {
    drift_.assign(d, 0.0);
  } else if (drift_.size() != d) {
    throw std::invalid_argument("StepPath: drift dimension mismatch");
  }
  for (std::size_t i = 0; i < locations_.size(); ++i) {
    if (!(locations_[i] >= 0.0) || !(locations_[i] <= horizon_)) {
      throw std::invalid_argument("StepPath: location outside [0, horizon]");
    }
    if (i > 0 && !(locations_[i] > locations_[i - 1])) {
      throw std::invalid_argument(
          "StepPath: locations must be strictly increasing");
    }
  }
  prefix_flat_.assign((locations_.size() + 1) * d, 0.0);
  for (std::size_t i = 0; i < locations_.size(); ++i) {
    for (std::size_t c = 0; c < d; ++c) {
      prefix_flat_[(i + 1) * d + c] =
          prefix_flat_[i * d + c] + jump_flat_[i * d + c];
    }
  }
  nondecreasing_scalar_ = (dimension_ == 1);
  if (nondecreasing_scalar_) {
    for (double j : jump_flat_) {
      if (!(j >= 0.0)) {
        nondecreasing_scalar_ = false;
        break;
      }
    }
  }
}

std::size_t StepPath::count_leq(double t) const {
  return static_cast<std::size_t>(
      std::upper_bound(locations_.begin(), locations_.end(), t) -
      locations_.begin());
}

std::size_t StepPath::count_lt(double t) const {
  return static_cast<std::size_t>(
      std::lower_bound(locations_.begin(), locations_.end(), t) -
      locations_.begin());
}

Vec StepPath::at(double t) const {
  if (!(t >= 0.0) || !(t <= horizon_)) {
    throw std::domain_error("StepPath::at: t outside [0, horizon]");
  }
  const std::size_t d = static_cast<std::size_t>(dimension_);
  const std::size_t i = count_leq(t);
  Vec out(prefix_flat_.begin() + i * d, prefix_flat_.begin() + (i + 1) * d);
  add_scaled(out, drift_, t);
  return out;
}

Vec StepPath::left_limit(double t) const {
  if (!(t >= 0.0) || !(t <= horizon_)) {
    throw std::domain_error("StepPath::left_limit: t outside [0, horizon]");
  }
  const std::size_t d = static_cast<std::size_t>(dimension_);
  const std::size_t i = count_lt(t);
  Vec out(prefix_flat_.begin() + i * d, prefix_flat_.begin() + (i + 1) * d);
  add_scaled(out, drift_, t);
  return out;
}

double StepPath::prefix_scalar(std::size_t i) const {
  if (dimension_ != 1) {
    throw std::domain_error("StepPath::prefix_scalar: path is not scalar");
  }
  return prefix_flat_[i];
}

std::string step_path_csv(const StepPath& path) {
  std::string out = "location";
  for (int c = 0; c < path.dimension(); ++c) {
    char col[32];
    std::snprintf(col, sizeof(col), ",value_%d", c);
    out += col;
  }
  out += "\n";
  char buf[64];
  for (std::size_t i = 0; i < path.jump_count(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", path.location(i));
    out += buf;
    const Vec v = path.at(path.location(i));
    for (double x : v) {
      std::snprintf(buf, sizeof(buf), ",%.17g", x);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

namespace {

using LocationOrder = std::vector<std::pair<double, std::uint32_t>>;

StepPath subordinator_path_ordered(const PoissonDriver& driver, double horizon,
                                   const SubordinatorTail& sub,
                                   const LocationOrder& order) {
  std::vector<double> locations(driver.depth());
  std::vector<double> jumps(driver.depth());
  const double inv_alpha = 1.0 / sub.alpha;
  const double scale = sub.c_time * horizon;
  for (std::size_t i = 0; i < order.size(); ++i) {
    locations[i] = horizon * order[i].first;
    jumps[i] = std::pow(scale / driver.gamma(order[i].second), inv_alpha);
  }
  return StepPath(std::move(locations), std::move(jumps), 1, horizon, {0.0});
}

}  // namespace

StepPath subordinator_path(const PoissonDriver& driver, double horizon,
                           const SubordinatorTail& sub) {
  if (!(horizon > 0.0)) {
    throw std::domain_error("subordinator_path: horizon must be positive");
  }
  return subordinator_path_ordered(driver, horizon, sub,
                                   driver.location_order());
}

StepPath operator_levy_path(const PoissonDriver& driver, double horizon,
                            const LevyMeasureModel& model, double eps) {
  if (!(horizon > 0.0)) {
    throw std::domain_error("operator_levy_path: horizon must be positive");
  }
  if (eps < 0.0) {
    throw std::domain_error("operator_levy_path: eps must be >= 0");
  }
  if (eps == 0.0 && model.centering_mode() == CenteringMode::kFullMean) {
    throw std::domain_error(
        "operator_levy_path: eps = 0 requires all tail indices below 1");
  }
  if (!driver.has_directions()) {
    throw std::invalid_argument("operator_levy_path: driver has no directions");
  }
  const auto order = driver.location_order();
  const int d = model.dimension();
  std::vector<double> locations;
  std::vector<double> jumps;
  locations.reserve(order.size());
  jumps.reserve(order.size() * static_cast<std::size_t>(d));
  for (const auto& [tau, k] : order) {
    const std::uint32_t idx = driver.atom_index(k);
    const double mag = model.inverse_tail(
        driver.gamma(k) / horizon, idx == PoissonDriver::kNoAtom ? 0 : idx);
    if (!(mag > eps)) continue;
    locations.push_back(horizon * tau);
    const auto dir = driver.direction(k);
    for (int i = 0; i < d; ++i) jumps.push_back(mag * dir[i]);
  }
  // Drift is the negated compensator per unit location: identically zero for
  // the supported centering policies.
  return StepPath(std::move(locations), std::move(jumps), d, horizon,
                  zeros(static_cast<std::size_t>(d)));
}

double hitting_time(const StepPath& path, double t) {
  if (!path.nondecreasing_scalar()) {
    throw std::domain_error("hitting_time: path must be a nondecreasing "
                            "scalar step path");
  }
  if (!(t >= 0.0)) {
    throw std::domain_error("hitting_time: t must be >= 0");
  }
  const std::size_t n = path.jump_count();
  if (n == 0 || !(path.prefix_scalar(n) > t)) {
    throw TruncationExhaustedError(
        "hitting_time: truncated series never exceeds the level; increase "
        "the truncation depth K or the horizon");
  }
  // First index i with prefix(i + 1) > t; the prefix sums are nondecreasing.
  std::size_t lo = 0, hi = n - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (path.prefix_scalar(mid + 1) > t) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return path.location(lo);
}

Vec evaluate(const StepPath& path, double t) { return path.at(t); }

LimitCoupling::LimitCoupling(LimitMode mode, LevyMeasureModel model,
                             SubordinatorTail sub)
    : mode_(mode), model_(std::move(model)), sub_(sub) {
  if (mode_ == LimitMode::kTight) {
    const bool one_atom = !model_.spectral().uniform() &&
                          model_.spectral().atom_count() == 1 &&
                          model_.dimension() == 1 &&
                          model_.spectral().atoms().front().direction[0] > 0.0;
    if (!one_atom || model_.tails().front().c != sub_.c_time ||
        model_.tails().front().beta != sub_.alpha) {
      throw std::invalid_argument(
          "LimitCoupling: tight mode requires the 1-d model with a single "
          "+e1 atom and (c, beta) = (c_time, alpha)");
    }
  }
}

LimitMpp build_limit_mpp(const LimitCoupling& coupling,
                         const PoissonDriver& driver,
                         const PoissonDriver* temporal_driver, double horizon,
                         double eps) {
  const bool uncoupled = coupling.mode() == LimitMode::kUncoupled;
  if (uncoupled && temporal_driver == nullptr) {
    throw std::invalid_argument(
        "build_limit_mpp: uncoupled mode needs an independent temporal "
        "driver");
  }
  if (!uncoupled && temporal_driver != nullptr) {
    throw std::invalid_argument(
        "build_limit_mpp: coupled modes share the spatial driver; no "
        "temporal driver expected");
  }
  if (eps < 0.0) {
    throw std::domain_error("build_limit_mpp: eps must be >= 0");
  }
  if (eps == 0.0 &&
      coupling.model().centering_mode() == CenteringMode::kFullMean) {
    throw std::domain_error(
        "build_limit_mpp: eps = 0 requires all tail indices below 1");
  }

  const auto& model = coupling.model();
  const int d = model.dimension();
  const auto order = driver.location_order();
  StepPath dpath =
      uncoupled
          ? subordinator_path(*temporal_driver, horizon, coupling.sub())
          : subordinator_path_ordered(driver, horizon, coupling.sub(), order);

  LimitMpp mpp{.time_backward = {},
               .time_forward = {},
               .location = {},
               .mark_flat = {},
               .mark_magnitude = {},
               .dimension = d,
               .subordinator = std::move(dpath)};

  mpp.time_backward.reserve(order.size());
  mpp.time_forward.reserve(order.size());
  mpp.location.reserve(order.size());
  mpp.mark_magnitude.reserve(order.size());
  mpp.mark_flat.reserve(order.size() * static_cast<std::size_t>(d));

  const bool tight = coupling.mode() == LimitMode::kTight;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t k = order[i].second;
    double mag;
    if (tight) {
      // The spatial mark IS the subordinator jump at the same location.
      mag = mpp.subordinator.jump(i)[0];
    } else {
      const std::uint32_t idx = driver.atom_index(k);
      mag = model.inverse_tail(driver.gamma(k) / horizon,
                               idx == PoissonDriver::kNoAtom ? 0 : idx);
    }
    if (!(mag > eps)) continue;
    const double loc = horizon * order[i].first;
    mpp.location.push_back(loc);
    if (uncoupled) {
      mpp.time_backward.push_back(mpp.subordinator.scalar_at(loc));
      mpp.time_forward.push_back(mpp.subordinator.scalar_left(loc));
    } else {
      // In the coupled modes the i-th point in location order is also the
      // i-th subordinator jump, so D(T tau_k) and D(T tau_k -) are the
      // surrounding prefix sums.
      mpp.time_backward.push_back(mpp.subordinator.prefix_scalar(i + 1));
      mpp.time_forward.push_back(mpp.subordinator.prefix_scalar(i));
    }
    mpp.mark_magnitude.push_back(mag);
    if (tight) {
      mpp.mark_flat.push_back(mag);
    } else {
      const auto dir = driver.direction(k);
      for (int i2 = 0; i2 < d; ++i2) mpp.mark_flat.push_back(mag * dir[i2]);
    }
  }
  return mpp;
}

namespace {

Vec sum_marks(const LimitMpp& mpp, const std::vector<double>& times,
              double t) {
  // The truncated subordinator underestimates D; if it cannot even reach t
  // the inclusion set {D(.) <= t} is undecidable at this depth.
  const std::size_t n = mpp.subordinator.jump_count();
  if (n == 0 || !(mpp.subordinator.prefix_scalar(n) > t)) {
    throw TruncationExhaustedError(
        "limit sum: subordinator series never exceeds t; increase K or the "
        "horizon");
  }
  Vec acc = zeros(static_cast<std::size_t>(mpp.dimension));
  for (std::size_t k = 0; k < mpp.size(); ++k) {
    if (times[k] <= t) add_scaled(acc, mpp.mark(k), 1.0);
  }
  return acc;
}

}  // namespace

Vec backward_limit(const LimitMpp& mpp, double t) {
  return sum_marks(mpp, mpp.time_backward, t);
}

Vec forward_limit(const LimitMpp& mpp, double t) {
  return sum_marks(mpp, mpp.time_forward, t);
}

Vec backward_limit(const LimitCoupling& coupling, const PoissonDriver& driver,
                   const PoissonDriver* temporal_driver, double horizon,
                   double t, double eps) {
  return backward_limit(
      build_limit_mpp(coupling, driver, temporal_driver, horizon, eps), t);
}

Vec forward_limit(const LimitCoupling& coupling, const PoissonDriver& driver,
                  const PoissonDriver* temporal_driver, double horizon,
                  double t, double eps) {
  return forward_limit(
      build_limit_mpp(coupling, driver, temporal_driver, horizon, eps), t);
}

ResidualLimitSequence limit_residual_order_stats(const PoissonDriver& driver,
                                                 double horizon,
                                                 const LevyMeasureModel& model,
                                                 std::size_t k_max) {
  return limit_residual_order_stats(driver, horizon, model.tails(), k_max);
}

ResidualLimitSequence limit_residual_order_stats(
    const PoissonDriver& driver, double horizon,
    std::span<const DirectionalTail> tails, std::size_t k_max) {
  if (k_max > driver.depth()) {
    throw std::domain_error(
        "limit_residual_order_stats: k_max exceeds driver depth");
  }
  if (!driver.has_directions()) {
    throw std::invalid_argument(
        "limit_residual_order_stats: driver has no directions");
  }
  if (tails.empty()) {
    throw std::invalid_argument("limit_residual_order_stats: no tails");
  }
  const std::size_t n = driver.depth();
  std::vector<double> mags(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint32_t idx = driver.atom_index(k);
    if (idx != PoissonDriver::kNoAtom && idx >= tails.size()) {
      throw std::invalid_argument(
          "limit_residual_order_stats: atom index outside the tail family");
    }
    const std::size_t j = idx == PoissonDriver::kNoAtom ? 0 : idx;
    mags[k] = pareto_inverse_tail(tails[j], driver.gamma(k) / horizon);
  }
  ResidualLimitSequence out;
  out.dhat.resize(n);
  std::iota(out.dhat.begin(), out.dhat.end(), 0);
  std::stable_sort(out.dhat.begin(), out.dhat.end(),
                   [&](std::size_t a, std::size_t b) {
                     return mags[a] > mags[b];
                   });
  for (std::size_t k = 1; k < n; ++k) {
    if (mags[out.dhat[k]] == mags[out.dhat[k - 1]]) {
      throw std::runtime_error(
          "limit_residual_order_stats: tied mark magnitudes (probability "
          "zero); resample the driver");
    }
  }
  out.ranks.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.ranks[out.dhat[k]] = k;
  out.marks.reserve(k_max);
  out.magnitudes.reserve(k_max);
  for (std::size_t k = 0; k < k_max; ++k) {
    const std::size_t orig = out.dhat[k];
    out.magnitudes.push_back(mags[orig]);
    out.marks.emplace_back(scaled(driver.direction(orig), mags[orig]));
  }
  return out;
}

}  // namespace ctrw
