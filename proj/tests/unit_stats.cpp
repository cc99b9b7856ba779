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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

#include "ctrw/stats.hpp"

using namespace ctrw;

namespace {

// Probability that the running maximum of |S_k| over k = 1..m reaches delta
// for Rademacher(+-scale) steps, by exhaustive enumeration of sign paths.
double enumerate_rademacher_max_prob(std::size_t m, double scale,
                                     double delta) {
  const std::size_t paths = std::size_t{1} << m;
  std::size_t hits = 0;
  for (std::size_t bits = 0; bits < paths; ++bits) {
    double s = 0.0;
    bool hit = false;
    for (std::size_t k = 0; k < m; ++k) {
      s += (bits >> k) & 1 ? scale : -scale;
      if (std::abs(s) >= delta) hit = true;
    }
    if (hit) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(paths);
}

// Reference implementation of the documented seed-mixing formula.
std::uint64_t reference_mix(std::uint64_t base, std::uint64_t r) {
  std::uint64_t z = base ^ ((r + 1) * UINT64_C(0x9E3779B97F4A7C15));
  z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
  z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
  return z ^ (z >> 31);
}

}  // namespace

TEST_CASE("ecdf is right-continuous and matches a counting oracle") {
  const Ecdf f({3.0, 1.0, 2.0, 2.0});
  CHECK(f(0.5) == 0.0);
  CHECK(f(1.0) == doctest::Approx(0.25));
  CHECK(f(1.999999) == doctest::Approx(0.25));
  CHECK(f(2.0) == doctest::Approx(0.75));  // jumps AT the value
  CHECK(f(10.0) == 1.0);
  CHECK_THROWS_AS(Ecdf({}), std::domain_error);

  Rng rng(5);
  std::vector<double> sample;
  for (int i = 0; i < 40; ++i) sample.push_back(rng.normal());
  const Ecdf g(sample);
  for (int i = 0; i < 100; ++i) {
    const double x = 3.0 * (rng.uniform01() - 0.5);
    double count = 0.0;
    for (double v : sample) {
      if (v <= x) count += 1.0;
    }
    CHECK(g(x) == doctest::Approx(count / 40.0));
  }
}

TEST_CASE("two-sample KS hand values") {
  const std::vector<double> a = {1.0, 2.0};
  CHECK(ks_two_sample(a, a) == 0.0);
  CHECK(ks_two_sample(a, std::vector<double>{3.0, 4.0}) == 1.0);
  CHECK(ks_two_sample(std::vector<double>{1.0, 3.0},
                      std::vector<double>{2.0, 4.0}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(ks_two_sample({}, a), std::domain_error);
}

TEST_CASE("KS is symmetric and invariant under increasing transforms") {
  Rng rng(17);
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<double> a, b;
    for (int i = 0; i < 50; ++i) a.push_back(rng.normal());
    for (int i = 0; i < 70; ++i) b.push_back(rng.normal() + 0.3);
    const double d = ks_two_sample(a, b);
    CHECK(ks_two_sample(b, a) == doctest::Approx(d));
    auto transform = [](std::vector<double> v) {
      for (double& x : v) x = std::exp(x) + x * x * x;
      return v;
    };
    CHECK(ks_two_sample(transform(a), transform(b)) == doctest::Approx(d));
  }
}

TEST_CASE("count functional distance") {
  PointSample empty_sample;
  PointSample one_point{{0.5}, {2.0}};
  const CountWindow w{1.0, 1.0};

  std::vector<PointSample> a = {one_point, one_point};
  CHECK(count_functional_distance(a, a, w) == 0.0);

  std::vector<PointSample> zeros = {empty_sample, empty_sample};
  CHECK(count_functional_distance(zeros, a, w) == 1.0);

  // a: counts {0,1} half/half; b: counts {0,1} at (0.25, 0.75) -> TV 0.25
  std::vector<PointSample> half = {empty_sample, empty_sample, one_point,
                                   one_point};
  std::vector<PointSample> quarter = {empty_sample, one_point, one_point,
                                      one_point};
  CHECK(count_functional_distance(half, quarter, w) == doctest::Approx(0.25));

  CHECK(window_count(one_point, {1.0, 3.0}) == 0);  // norm not above delta
  CHECK(window_count(one_point, {0.4, 1.0}) == 0);  // outside time window
  CHECK_THROWS_AS(count_functional_distance({}, a, w), std::domain_error);
  CHECK_THROWS_AS(count_functional_distance(a, a, {0.0, 1.0}),
                  std::domain_error);
}

TEST_CASE("seed mixing follows the documented finalizer bit-exactly") {
  for (std::uint64_t base : {0ull, 42ull, 0xDEADBEEFull}) {
    for (std::uint64_t r = 0; r < 5; ++r) {
      CHECK(mix_seed(base, r) == reference_mix(base, r));
    }
  }
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
}

TEST_CASE("run_mc determinism and seed derivation") {
  auto experiment = [](std::uint64_t child, std::size_t) {
    Rng rng(child);
    return std::vector<double>{rng.exponential(), rng.uniform01()};
  };
  const McPlan one{1, 77, 1};
  const auto single = run_mc(one, experiment);
  REQUIRE(single.size() == 1);
  CHECK(single[0] == experiment(mix_seed(77, 0), 0));

  const McPlan serial{257, 909, 1};
  const McPlan threaded{257, 909, 4};
  CHECK(run_mc(serial, experiment) == run_mc(threaded, experiment));
}

TEST_CASE("run_mc aborts with the replicate id attached") {
  auto experiment = [](std::uint64_t, std::size_t r) {
    if (r == 13) throw std::runtime_error("boom");
    return std::vector<double>{0.0};
  };
  for (unsigned workers : {1u, 4u}) {
    const McPlan plan{64, 1, workers};
    bool caught = false;
    try {
      run_mc(plan, experiment);
    } catch (const std::runtime_error& e) {
      caught = true;
      CHECK(std::string(e.what()).find("13") != std::string::npos);
    }
    CHECK(caught);
  }
}

TEST_CASE("run_mc exponential mean sanity") {
  const McPlan plan{10000, 4242, 2};
  const auto rows = run_mc(plan, [](std::uint64_t child, std::size_t) {
    Rng rng(child);
    return std::vector<double>{rng.exponential()};
  });
  double acc = 0.0;
  for (const auto& row : rows) acc += row[0];
  CHECK(acc / 1e4 == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("stopped-maximum inequality: degenerate cases") {
  const StepLaw rademacher{StepLaw::Kind::kRademacher, 1.0, 0.0};
  const StoppingRule one{StoppingRule::Kind::kFixed, 1, 0.0};
  const KolmogorovCheck c1 =
      kolmogorov_inequality_check(rademacher, one, 0.5, 2000, 3);
  CHECK(c1.lhs_estimate == 1.0);  // a single +-1 step always exceeds 0.5
  CHECK(c1.rhs_bound == doctest::Approx(4.0));

  const StoppingRule four{StoppingRule::Kind::kFixed, 4, 0.0};
  const KolmogorovCheck c2 =
      kolmogorov_inequality_check(rademacher, four, 1e9, 2000, 3);
  CHECK(c2.lhs_estimate == 0.0);
  CHECK(c2.lhs_estimate <= c2.rhs_bound);

  StepLaw off{StepLaw::Kind::kRademacher, 1.0, 0.1};
  CHECK_THROWS_AS(kolmogorov_inequality_check(off, four, 1.0, 10, 3),
                  std::domain_error);
}

TEST_CASE("stopped maximum matches exhaustive enumeration for fixed T = 4") {
  // All 16 sign paths: 12 reach |S_k| >= 2 within four steps.
  const double exact = enumerate_rademacher_max_prob(4, 1.0, 2.0);
  CHECK(exact == doctest::Approx(12.0 / 16.0));
  const StepLaw law{StepLaw::Kind::kRademacher, 1.0, 0.0};
  const StoppingRule rule{StoppingRule::Kind::kFixed, 4, 0.0};
  const KolmogorovCheck c =
      kolmogorov_inequality_check(law, rule, 2.0, 40000, 99, 2);
  CHECK(std::abs(c.lhs_estimate - exact) <= 3.0 * c.lhs_stderr);
  CHECK(c.rhs_bound == doctest::Approx(1.0));
  CHECK(c.lhs_estimate - 3.0 * c.lhs_stderr <= c.rhs_bound);
}

TEST_CASE("expected stopping steps closed forms") {
  const StepLaw uni{StepLaw::Kind::kUniform, 2.0, 0.0};
  CHECK(uni.variance() == doctest::Approx(4.0 / 3.0));
  const StoppingRule fixed{StoppingRule::Kind::kFixed, 7, 0.0};
  CHECK(fixed.expected_steps(uni) == 7.0);
  // P(|U(-2,2)| > 1) = 1/2: truncated geometric mean
  const StoppingRule exceed{StoppingRule::Kind::kFirstExceed, 10, 1.0};
  const double p = 0.5;
  CHECK(exceed.expected_steps(uni) ==
        doctest::Approx((1.0 - std::pow(1.0 - p, 10.0)) / p));
  // threshold above the support: the cap rules
  const StoppingRule never{StoppingRule::Kind::kFirstExceed, 10, 5.0};
  CHECK(never.expected_steps(uni) == 10.0);

  // Monte Carlo cross-check of E(T) for the exceed rule
  Rng rng(6);
  double acc = 0.0;
  const int reps = 20000;
  for (int i = 0; i < reps; ++i) {
    std::size_t steps = 0;
    for (std::size_t k = 0; k < 10; ++k) {
      ++steps;
      if (std::abs(uni.draw(rng)) > 1.0) break;
    }
    acc += static_cast<double>(steps);
  }
  CHECK(acc / reps == doctest::Approx(exceed.expected_steps(uni)).epsilon(0.02));
}

TEST_CASE("inequality holds across randomized configurations") {
  Rng gen(2718);
  for (int rep = 0; rep < 25; ++rep) {
    StepLaw law{};
    law.kind = gen.uniform01() < 0.5 ? StepLaw::Kind::kRademacher
                                     : StepLaw::Kind::kUniform;
    law.scale = 0.5 + 1.5 * gen.uniform01();
    StoppingRule rule{};
    rule.kind = gen.uniform01() < 0.5 ? StoppingRule::Kind::kFixed
                                      : StoppingRule::Kind::kFirstExceed;
    rule.cap = 2 + static_cast<std::size_t>(gen.uniform01() * 10.0);
    rule.threshold = gen.uniform01() * law.scale;
    const double delta = (0.4 + 2.0 * gen.uniform01()) *
                         std::sqrt(rule.expected_steps(law) * law.variance());
    const KolmogorovCheck c = kolmogorov_inequality_check(
        law, rule, delta, 4000, 31415 + rep, 2);
    CHECK(c.lhs_estimate - 3.0 * c.lhs_stderr <= c.rhs_bound);
  }
}

TEST_CASE("renewal mean ratio boundary value") {
  // t below the Pareto floor: N_t = 0 surely, so the ratio is
  // Gamma(1 - a) Gamma(1 + a) exactly.
  const RenewalMeanResult r = renewal_mean_ratio(0.5, 1.0, 0.5, 200, 1);
  CHECK(r.mean_count == 1.0);
  CHECK(r.ratio ==
        doctest::Approx(std::tgamma(0.5) * std::tgamma(1.5)).epsilon(1e-12));
  CHECK(r.ratio_stderr == 0.0);
}

TEST_CASE("renewal mean ratio approaches one") {
  const RenewalMeanResult r = renewal_mean_ratio(0.5, 1.0, 1e4, 4000, 77, 2);
  CHECK(r.ratio > 0.85);
  CHECK(r.ratio < 1.15);
}
