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

#include "ctrw/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

namespace ctrw {

Ecdf::Ecdf(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw std::domain_error("Ecdf: empty sample");
  }
  std::sort(values_.begin(), values_.end());
}

double Ecdf::operator()(double x) const {
  const auto it = std::upper_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(it - values_.begin()) /
         static_cast<double>(values_.size());
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw std::domain_error("ks_two_sample: empty sample");
  }
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

std::size_t window_count(const PointSample& sample, const CountWindow& w) {
  std::size_t c = 0;
  for (std::size_t k = 0; k < sample.times.size(); ++k) {
    if (sample.times[k] <= w.s && sample.norms[k] > w.delta) ++c;
  }
  return c;
}

double count_functional_distance(std::span<const PointSample> a,
                                 std::span<const PointSample> b,
                                 const CountWindow& w) {
  if (a.empty() || b.empty()) {
    throw std::domain_error("count_functional_distance: empty sample set");
  }
  if (!(w.s > 0.0) || !(w.delta > 0.0)) {
    throw std::domain_error("count_functional_distance: window must have "
                            "s > 0 and delta > 0");
  }
  std::size_t max_count = 0;
  std::vector<std::size_t> ca(a.size()), cb(b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca[i] = window_count(a[i], w);
    max_count = std::max(max_count, ca[i]);
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    cb[i] = window_count(b[i], w);
    max_count = std::max(max_count, cb[i]);
  }
  std::vector<double> pa(max_count + 1, 0.0), pb(max_count + 1, 0.0);
  for (std::size_t c : ca) pa[c] += 1.0 / static_cast<double>(a.size());
  for (std::size_t c : cb) pb[c] += 1.0 / static_cast<double>(b.size());
  double tv = 0.0;
  for (std::size_t c = 0; c <= max_count; ++c) tv += std::abs(pa[c] - pb[c]);
  return 0.5 * tv;
}

std::vector<std::vector<double>> run_mc(const McPlan& plan,
                                        const Replicate& experiment) {
  if (plan.replicates < 1) {
    throw std::domain_error("run_mc: replicates must be >= 1");
  }
  auto rows = parallel_map<std::vector<double>>(
      plan.replicates, plan.base_seed, plan.workers, experiment);
  for (std::size_t r = 1; r < plan.replicates; ++r) {
    if (rows[r].size() != rows[0].size()) {
      throw std::runtime_error("run_mc: ragged replicate rows");
    }
  }
  return rows;
}

double StepLaw::variance() const {
  switch (kind) {
    case Kind::kRademacher:
      return scale * scale;
    case Kind::kUniform:
      return scale * scale / 3.0;
  }
  return 0.0;
}

double StepLaw::draw(Rng& rng) const {
  switch (kind) {
    case Kind::kRademacher:
      return (rng.uniform01() < 0.5) ? scale : -scale;
    case Kind::kUniform:
      return scale * (2.0 * rng.uniform01() - 1.0);
  }
  return 0.0;
}

double StoppingRule::expected_steps(const StepLaw& law) const {
  const double m = static_cast<double>(cap);
  if (kind == Kind::kFixed) return m;
  // T = min(first k with |Y_k| > threshold, cap): geometric truncated at m.
  double p = 0.0;
  switch (law.kind) {
    case StepLaw::Kind::kRademacher:
      p = law.scale > threshold ? 1.0 : 0.0;
      break;
    case StepLaw::Kind::kUniform:
      p = threshold >= law.scale
              ? 0.0
              : 1.0 - threshold / law.scale;  // P(|U(-a,a)| > thr)
      break;
  }
  if (p <= 0.0) return m;
  return (1.0 - std::pow(1.0 - p, m)) / p;
}

KolmogorovCheck kolmogorov_inequality_check(const StepLaw& law,
                                            const StoppingRule& rule,
                                            double delta,
                                            std::size_t replicates,
                                            std::uint64_t seed,
                                            unsigned workers) {
  if (law.offset != 0.0) {
    throw std::domain_error(
        "kolmogorov_inequality_check: step law must be centered");
  }
  if (!(law.scale > 0.0)) {
    throw std::domain_error("kolmogorov_inequality_check: scale must be > 0");
  }
  if (!(delta > 0.0)) {
    throw std::domain_error("kolmogorov_inequality_check: delta must be > 0");
  }
  if (rule.cap < 1) {
    throw std::domain_error("kolmogorov_inequality_check: cap must be >= 1");
  }
  McPlan plan{replicates, seed, workers};
  const auto rows = run_mc(plan, [&](std::uint64_t child_seed, std::size_t) {
    Rng rng(child_seed);
    double sum = 0.0;
    bool exceeded = false;
    for (std::size_t k = 0; k < rule.cap; ++k) {
      const double y = law.draw(rng);
      sum += y;
      if (std::abs(sum) >= delta) exceeded = true;
      if (rule.kind == StoppingRule::Kind::kFirstExceed &&
          std::abs(y) > rule.threshold) {
        break;  // T = this k; the max over 1..T is already tracked
      }
    }
    return std::vector<double>{exceeded ? 1.0 : 0.0};
  });
  double hits = 0.0;
  for (const auto& row : rows) hits += row[0];
  const double n = static_cast<double>(replicates);
  const double p = hits / n;
  KolmogorovCheck out;
  out.lhs_estimate = p;
  out.lhs_stderr = std::sqrt(std::max(p * (1.0 - p), 1.0 / n) / n);
  out.expected_steps = rule.expected_steps(law);
  out.step_variance = law.variance();
  out.rhs_bound = out.expected_steps * out.step_variance / (delta * delta);
  return out;
}

RenewalMeanResult renewal_mean_ratio(double alpha, double c_time, double t,
                                     std::size_t replicates,
                                     std::uint64_t seed, unsigned workers) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("renewal_mean_ratio: alpha must lie in (0,1)");
  }
  if (!(c_time > 0.0) || !(t >= 0.0)) {
    throw std::domain_error("renewal_mean_ratio: need c_time > 0, t >= 0");
  }
  const double floor = std::pow(c_time, 1.0 / alpha);
  McPlan plan{replicates, seed, workers};
  const auto rows = run_mc(plan, [&](std::uint64_t child_seed, std::size_t) {
    Rng rng(child_seed);
    double time = 0.0;
    double count = 0.0;
    while (true) {
      const double j = floor * std::pow(rng.uniform01(), -1.0 / alpha);
      time += j;
      if (time > t) break;
      count += 1.0;
    }
    return std::vector<double>{count + 1.0};
  });
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& row : rows) {
    sum += row[0];
    sum_sq += row[0] * row[0];
  }
  const double n = static_cast<double>(replicates);
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  const double tail = t >= floor ? c_time * std::pow(t, -alpha) : 1.0;
  const double factor =
      std::tgamma(1.0 - alpha) * std::tgamma(1.0 + alpha) * tail;
  RenewalMeanResult out;
  out.mean_count = mean;
  out.ratio = mean * factor;
  out.ratio_stderr = std::sqrt(var / n) * factor;
  return out;
}

}  // namespace ctrw
