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
// Statistical verification layer: ECDFs, the exact two-sample
// Kolmogorov-Smirnov statistic, count-functional comparison of marked point
// processes, reproducible Monte Carlo orchestration, the stopped-maximum
// inequality checker and the renewal-mean asymptotic.

#ifndef CTRW_STATS_HPP_
#define CTRW_STATS_HPP_

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ctrw/errors.hpp"
#include "ctrw/rng.hpp"

namespace ctrw {

// Empirical distribution function; evaluation is right-continuous.
class Ecdf {
 public:
  explicit Ecdf(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator()(double x) const;
  const std::vector<double>& sorted_values() const { return values_; }

 private:
  std::vector<double> values_;  // ascending
};

// sup_x |F_a(x) - F_b(x)| computed exactly by a merge scan.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

// One marked-point-process draw reduced to what the counting functionals
// need: point times and mark norms.
struct PointSample {
  std::vector<double> times;
  std::vector<double> norms;
};

struct CountWindow {
  double s;      // time window [0, s]
  double delta;  // mark-norm threshold (strictly greater than)
};

// Number of points with time <= s and norm > delta.
std::size_t window_count(const PointSample& sample, const CountWindow& w);

// Total-variation distance between the two empirical distributions of the
// window counts.
double count_functional_distance(std::span<const PointSample> a,
                                 std::span<const PointSample> b,
                                 const CountWindow& w);

// Reproducible Monte Carlo plan: replicate r runs on the child seed
// mix_seed(base_seed, r); aggregation is by replicate index, so the output
// is a pure function of (base_seed, replicates, experiment), independent of
// the worker count.
struct McPlan {
  std::size_t replicates;
  std::uint64_t base_seed;
  unsigned workers = 1;
};

using Replicate =
    std::function<std::vector<double>(std::uint64_t child_seed,
                                      std::size_t replicate)>;

// Runs the experiment once per replicate and returns one row per replicate.
// Every row must have the same width. A throwing replicate aborts the run
// with the smallest failing replicate id attached.
std::vector<std::vector<double>> run_mc(const McPlan& plan,
                                        const Replicate& experiment);

namespace detail {

// Attaches the replicate id, preserving the truncation-exhausted type so
// callers can still advise raising K.
[[noreturn]] inline void rethrow_replicate(std::exception_ptr ep,
                                           std::size_t replicate) {
  const std::string tag = "replicate " + std::to_string(replicate) +
                          " failed: ";
  try {
    std::rethrow_exception(ep);
  } catch (const TruncationExhaustedError& e) {
    throw TruncationExhaustedError(tag + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(tag + e.what());
  }
}

}  // namespace detail

// Deterministic parallel map over replicate ids: element r is computed from
// the child seed mix_seed(base_seed, r) and stored by index, so the result
// does not depend on the worker count. On failure the smallest failing
// replicate id is reported.
template <class T, class F>
std::vector<T> parallel_map(std::size_t count, std::uint64_t base_seed,
                            unsigned workers, F&& fn) {
  if (count == 0) {
    throw std::domain_error("parallel_map: count must be >= 1");
  }
  std::vector<T> out(count);
  workers = std::max(1u, std::min<unsigned>(workers,
                                            static_cast<unsigned>(count)));
  if (workers == 1) {
    for (std::size_t r = 0; r < count; ++r) {
      try {
        out[r] = fn(mix_seed(base_seed, r), r);
      } catch (...) {
        detail::rethrow_replicate(std::current_exception(), r);
      }
    }
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::vector<std::exception_ptr> errors(count);
  auto work = [&]() {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= count) return;
      if (failed.load(std::memory_order_relaxed)) continue;
      try {
        out[r] = fn(mix_seed(base_seed, r), r);
      } catch (...) {
        errors[r] = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (failed.load()) {
    for (std::size_t r = 0; r < count; ++r) {
      if (errors[r]) detail::rethrow_replicate(errors[r], r);
    }
  }
  return out;
}

// Centered step laws for the stopped-maximum inequality. The offset field
// exists so that non-centered inputs are rejected explicitly.
struct StepLaw {
  enum class Kind { kRademacher, kUniform };
  Kind kind;
  double scale;         // Rademacher: +-scale; Uniform: on (-scale, scale)
  double offset = 0.0;  // must be zero

  double variance() const;
  double draw(Rng& rng) const;
};

struct StoppingRule {
  enum class Kind { kFixed, kFirstExceed };
  Kind kind;
  std::size_t cap;         // fixed horizon m, also the cap for kFirstExceed
  double threshold = 0.0;  // kFirstExceed: first k with |Y_k| > threshold

  // E(T), closed form (kFirstExceed uses the law's exceedance probability).
  double expected_steps(const StepLaw& law) const;
};

struct KolmogorovCheck {
  double lhs_estimate;   // P(max_{1<=k<=T} |S_k| >= delta), Monte Carlo
  double lhs_stderr;
  double expected_steps;
  double step_variance;
  double rhs_bound;      // delta^{-2} E(T) Var(Y_1)
};

// Monte Carlo check of P(max_{1<=k<=T} |sum_{j<=k} Y_j| >= delta)
// <= delta^{-2} E(T) Var(Y_1) for i.i.d. centered steps and the supported
// stopping rules.
KolmogorovCheck kolmogorov_inequality_check(const StepLaw& law,
                                            const StoppingRule& rule,
                                            double delta,
                                            std::size_t replicates,
                                            std::uint64_t seed,
                                            unsigned workers = 1);

struct RenewalMeanResult {
  double ratio;        // E(N_t + 1) * Gamma(1-a) * Gamma(1+a) * (1 - F_J(t))
  double ratio_stderr;
  double mean_count;   // E(N_t + 1) estimate
};

// Estimates the renewal-mean asymptotic for Pareto waiting times with tail
// c_time * t^(-alpha); the ratio tends to 1 as t grows.
RenewalMeanResult renewal_mean_ratio(double alpha, double c_time, double t,
                                     std::size_t replicates,
                                     std::uint64_t seed, unsigned workers = 1);

}  // namespace ctrw

#endif  // CTRW_STATS_HPP_
