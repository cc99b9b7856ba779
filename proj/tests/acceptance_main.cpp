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
// End-to-end verification suite. Each numbered check prints one [PASS] or
// [FAIL] line; the process exits nonzero if any check fails.
//
//   acceptance <configs_dir> <ctrw_binary> [--only N]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ctrw/config.hpp"
#include "ctrw/ctrw_engine.hpp"
#include "ctrw/experiments.hpp"
#include "ctrw/series_sampler.hpp"
#include "ctrw/stats.hpp"

using namespace ctrw;

namespace {

int g_failures = 0;
std::string g_configs_dir;
std::string g_ctrw_binary;

bool rel_close(double a, double b, double tol = 1e-12) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= tol * scale;
}

struct CheckList {
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void expect_rel(double got, double want, const std::string& what,
                  double tol = 1e-12) {
    if (!rel_close(got, want, tol)) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%s: got %.17g want %.17g", what.c_str(),
                    got, want);
      failures.push_back(buf);
    }
  }
};

using Clock = std::chrono::steady_clock;

void report(int id, const std::string& name, const CheckList& checks,
            double seconds, const std::string& detail = "") {
  if (checks.failures.empty()) {
    std::printf("[PASS] %2d %-38s (%.1f s)%s%s\n", id, name.c_str(), seconds,
                detail.empty() ? "" : "  ", detail.c_str());
  } else {
    ++g_failures;
    std::printf("[FAIL] %2d %-38s (%.1f s)\n", id, name.c_str(), seconds);
    for (const auto& f : checks.failures) {
      std::printf("       - %s\n", f.c_str());
    }
  }
  std::fflush(stdout);
}

LevyMeasureModel two_axis_model(double beta1 = 0.6, double beta2 = 0.8) {
  return LevyMeasureModel(
      SpectralMeasure::make_atoms({{{1.0, 0.0}, 0.25},
                                   {{-1.0, 0.0}, 0.25},
                                   {{0.0, 1.0}, 0.25},
                                   {{0.0, -1.0}, 0.25}}),
      {DirectionalTail(1.0, beta1), DirectionalTail(1.0, beta1),
       DirectionalTail(1.0, beta2), DirectionalTail(1.0, beta2)});
}

LevyMeasureModel tight_model() {
  return LevyMeasureModel(SpectralMeasure::make_atoms({{{1.0}, 1.0}}),
                          {DirectionalTail(1.0, 0.5)});
}

// ---------------------------------------------------------------------------
// 1. Hand-worked deterministic values at 1e-12 relative, under one second.
// ---------------------------------------------------------------------------
void criterion_hand_worked() {
  const auto t0 = Clock::now();
  CheckList c;
  const SubordinatorTail sub(0.5, 1.0);

  // closed-form tails and norming sequences
  c.expect_rel(tight_model().tail(0.0625, 0), 4.0, "tail(0.0625)");
  const DirectionalTail heavy(1.0, 1.5);
  c.expect_rel(pareto_inverse_tail(heavy, 2.0), std::pow(2.0, -2.0 / 3.0),
               "inverse_tail(2)");
  c.expect_rel(pareto_tail(heavy, pareto_inverse_tail(heavy, 2.0)), 2.0,
               "tail(inverse_tail(2))");
  c.expect_rel(subordinator_inverse_tail(0.5, SubordinatorTail(0.5, 2.0)),
               16.0, "subordinator_inverse_tail(0.5)");
  const Vec comp =
      atom_compensator(0.01, SpectralAtom{{1.0, 0.0}, 1.0}, heavy);
  c.expect_rel(comp[0], 30.0, "atom compensator mass");
  c.expect(comp[1] == 0.0, "atom compensator direction");
  const Normalization n16 = normalization(16, two_axis_model(0.5, 0.8), sub);
  c.expect_rel(n16.spatial_diag[0], 0.00390625, "A_16 axis 1");
  c.expect_rel(n16.spatial_diag[1], 0.03125, "A_16 axis 2");
  c.expect_rel(normalization(100, tight_model(), sub).b_n, 10000.0, "b_100");

  // Ferguson-Klass series of the subordinator
  const PoissonDriver driver({1.0, 2.0, 3.0}, {0.5, 0.2, 0.9},
                             {{1.0}, {1.0}, {1.0}}, {0, 0, 0}, 0);
  const StepPath d = subordinator_path(driver, 1.0, sub);
  c.expect_rel(d.scalar_at(0.5), 1.25, "D(0.5)");
  c.expect_rel(d.scalar_at(1.0), 1.0 + 0.25 + 1.0 / 9.0, "D(1.0)");
  c.expect_rel(hitting_time(d, 0.3), 0.5, "E(0.3)");
  c.expect_rel(hitting_time(d, 0.0), 0.2, "E(0)");

  // LePage series of the spatial limit
  const PoissonDriver spatial({1.0, 2.0}, {0.3, 0.6}, {{1.0}, {1.0}}, {0, 0},
                              0);
  const StepPath a = operator_levy_path(spatial, 1.0, tight_model(), 0.0);
  c.expect_rel(a.scalar_at(0.4), 1.0, "A(0.4)");
  c.expect_rel(a.scalar_at(1.0), 1.25, "A(1.0)");

  // coupled backward/forward limits
  const LimitCoupling tight(LimitMode::kTight, tight_model(), sub);
  const double bwd = backward_limit(tight, driver, nullptr, 1.0, 0.3, 0.0)[0];
  const double fwd = forward_limit(tight, driver, nullptr, 1.0, 0.3, 0.0)[0];
  c.expect_rel(bwd, 0.25, "backward limit at 0.3");
  c.expect_rel(fwd, 1.25, "forward limit at 0.3");
  c.expect_rel(fwd - bwd, 1.0, "straddling gap");

  // antirank flip across direction-dependent tails
  const std::vector<DirectionalTail> tails = {DirectionalTail(1.0, 0.5),
                                              DirectionalTail(1.0, 1.5)};
  const PoissonDriver flip({1.5, 2.0}, {0.3, 0.7}, {{1.0, 0.0}, {0.0, 1.0}},
                           {0, 1}, 0);
  const ResidualLimitSequence res =
      limit_residual_order_stats(flip, 1.0, tails, 2);
  c.expect(res.dhat == std::vector<std::size_t>{1, 0}, "antirank flip");
  c.expect_rel(res.magnitudes[0], std::pow(0.5, 2.0 / 3.0), "flip top mark");
  c.expect_rel(res.magnitudes[1], 4.0 / 9.0, "flip second mark");

  // residual order sorting
  const ResidualOrderResult sorted =
      residual_order_statistics({{3.0, 0.0}, {0.0, -5.0}, {1.0, 1.0}}, 3);
  c.expect(sorted.antiranks == std::vector<std::size_t>{1, 0, 2},
           "sorting antiranks");
  c.expect(sorted.sorted[0] == Vec{0.0, -5.0}, "sorting order");

  // renewal counting
  const WalkSample walk = WalkSample::from_arrays(
      {0.5, 0.7, 0.8}, {{1.0, 0.0}, {0.0, -2.0}, {0.5, 0.0}});
  c.expect(counting(walk, 1.2).count == 2, "N(1.2)");
  c.expect(counting(walk, 0.49).count == 0, "N(0.49)");

  // marked point process on the hand walk
  const CouplingSpec spec(WalkMode::kUncoupled, sub, two_axis_model());
  const MarkedPointProcess mb =
      marked_point_process(walk, 1, MppMarking::kBackward, 1e-9, spec);
  const MarkedPointProcess mf =
      marked_point_process(walk, 1, MppMarking::kForward, 1e-9, spec);
  c.expect(mb.size() == 3 && mf.size() == 3, "mpp sizes");
  c.expect_rel(mb.times[1], 1.2, "mpp backward time");
  c.expect(mf.times[0] == 0.0, "mpp forward first time");

  // verification instruments
  c.expect_rel(ks_two_sample(std::vector<double>{1.0, 3.0},
                             std::vector<double>{2.0, 4.0}),
               0.5, "ks hand value");
  const PointSample none, one{{0.5}, {2.0}};
  std::vector<PointSample> half = {none, none, one, one};
  std::vector<PointSample> quarter = {none, one, one, one};
  c.expect_rel(count_functional_distance(half, quarter, {1.0, 1.0}), 0.25,
               "count tv hand value");
  const KolmogorovCheck k1 = kolmogorov_inequality_check(
      {StepLaw::Kind::kRademacher, 1.0, 0.0},
      {StoppingRule::Kind::kFixed, 1, 0.0}, 0.5, 500, 1);
  c.expect(k1.lhs_estimate == 1.0 && k1.rhs_bound == 4.0,
           "single-step inequality");

  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  c.expect(secs < 1.0, "runtime under one second");
  report(1, "hand-worked deterministic values", c, secs);
}

// ---------------------------------------------------------------------------
// 2. Pathwise identities on 10^4 random drivers, under 30 seconds.
// ---------------------------------------------------------------------------
void criterion_pathwise() {
  const auto t0 = Clock::now();
  CheckList c;
  const SubordinatorTail sub(0.5, 1.0);
  const LevyMeasureModel axis = two_axis_model();
  const LevyMeasureModel tight = tight_model();
  const std::size_t depth = 400;
  const double horizon = 1.0;
  std::size_t sandwich_bad = 0, gap_bad = 0, ident_bad = 0, perm_bad = 0;

  Rng tpick(271828);
  for (int i = 0; i < 10000; ++i) {
    const LimitMode mode = i % 3 == 0   ? LimitMode::kUncoupled
                           : i % 3 == 1 ? LimitMode::kTight
                                        : LimitMode::kCommonGamma;
    const LevyMeasureModel& model =
        mode == LimitMode::kTight ? tight : axis;
    const LimitCoupling coupling(mode, model, sub);
    const PoissonDriver driver =
        sample_driver(depth, 90000 + i, model.spectral());
    std::optional<PoissonDriver> temporal;
    if (mode == LimitMode::kUncoupled) {
      temporal = sample_temporal_driver(depth, 50000 + i);
    }
    const LimitMpp mpp = build_limit_mpp(coupling, driver,
                                         temporal ? &*temporal : nullptr,
                                         horizon, 0.0);
    const StepPath& dpath = mpp.subordinator;
    const double total = dpath.scalar_at(horizon);
    const double t = 0.9 * tpick.uniform01() * total;

    // inversion sandwich D(E(t)-) <= t < D(E(t))
    const double e = hitting_time(dpath, t);
    if (!(dpath.scalar_left(e) <= t && t < dpath.scalar_at(e))) {
      ++sandwich_bad;
    }

    // forward - backward equals the straddling mark (or zero)
    const Vec bwd = backward_limit(mpp, t);
    const Vec fwd = forward_limit(mpp, t);
    std::ptrdiff_t straddler = -1;
    bool multiple = false;
    for (std::size_t k = 0; k < mpp.size(); ++k) {
      if (mpp.time_forward[k] <= t && t < mpp.time_backward[k]) {
        if (straddler >= 0) multiple = true;
        straddler = static_cast<std::ptrdiff_t>(k);
      }
    }
    if (multiple) {
      ++gap_bad;
    } else {
      for (int j = 0; j < mpp.dimension; ++j) {
        const double want =
            straddler >= 0
                ? mpp.mark(static_cast<std::size_t>(straddler))[j]
                : 0.0;
        if (!rel_close(fwd[j] - bwd[j], want)) ++gap_bad;
      }
    }

    // tight identification: backward = D(E(t)-), forward = D(E(t))
    if (mode == LimitMode::kTight) {
      if (!rel_close(bwd[0], dpath.scalar_left(e)) ||
          !rel_close(fwd[0], dpath.scalar_at(e))) {
        ++ident_bad;
      }
    }

    // rank composed with antirank is the identity
    const ResidualLimitSequence res =
        limit_residual_order_stats(driver, horizon, model, 8);
    for (std::size_t k = 0; k < depth; ++k) {
      if (res.ranks[res.dhat[k]] != k || res.dhat[res.ranks[k]] != k) {
        ++perm_bad;
        break;
      }
    }
  }
  c.expect(sandwich_bad == 0,
           "inversion sandwich violations: " + std::to_string(sandwich_bad));
  c.expect(gap_bad == 0,
           "straddling-gap violations: " + std::to_string(gap_bad));
  c.expect(ident_bad == 0,
           "tight identification violations: " + std::to_string(ident_bad));
  c.expect(perm_bad == 0,
           "antirank inverse violations: " + std::to_string(perm_bad));
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  c.expect(secs < 30.0, "runtime under 30 seconds");
  report(2, "pathwise identities, 10^4 drivers", c, secs);
}

// ---------------------------------------------------------------------------
// 3. Isotropic models keep the identity antirank permutation.
// ---------------------------------------------------------------------------
void criterion_isotropic_antiranks() {
  const auto t0 = Clock::now();
  CheckList c;
  const LevyMeasureModel sphere(SpectralMeasure::make_uniform_sphere(2),
                                {DirectionalTail(1.0, 0.7)});
  std::size_t violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const PoissonDriver driver =
        sample_driver(100, 777000 + i, sphere.spectral());
    const ResidualLimitSequence res =
        limit_residual_order_stats(driver, 1.0, sphere, 100);
    for (std::size_t k = 0; k < 100; ++k) {
      if (res.dhat[k] != k) {
        ++violations;
        break;
      }
    }
  }
  c.expect(violations == 0,
           "identity violations: " + std::to_string(violations));
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  report(3, "isotropic antirank identity", c, secs);
}

// ---------------------------------------------------------------------------
// Config-driven experiments (4-8, 10).
// ---------------------------------------------------------------------------
void run_config_criterion(int id, const std::string& name,
                          const std::string& config_file) {
  const auto t0 = Clock::now();
  CheckList c;
  std::string detail;
  try {
    const ExperimentConfig cfg =
        load_config_file(g_configs_dir + "/" + config_file);
    const ExperimentOutcome out = run_experiment(cfg);
    c.expect(out.pass, "statistical thresholds: " + out.stats.dump());
    if (out.pass) {
      nlohmann::json brief = out.stats.contains("ks") ? out.stats["ks"]
                            : out.stats.contains("tv") ? out.stats["tv"]
                                                       : out.stats;
      detail = brief.dump();
      if (detail.size() > 150) detail = detail.substr(0, 150) + "...";
    }
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  report(id, name, c, secs, detail);
}

// ---------------------------------------------------------------------------
// 9. Stopped-maximum inequality plus the enumeration cross-check.
// ---------------------------------------------------------------------------
double enumerate_rademacher_max_prob(std::size_t m, double delta) {
  const std::size_t paths = std::size_t{1} << m;
  std::size_t hits = 0;
  for (std::size_t bits = 0; bits < paths; ++bits) {
    double s = 0.0;
    bool hit = false;
    for (std::size_t k = 0; k < m; ++k) {
      s += (bits >> k) & 1 ? 1.0 : -1.0;
      if (std::abs(s) >= delta) hit = true;
    }
    if (hit) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(paths);
}

void criterion_kolmogorov() {
  const auto t0 = Clock::now();
  CheckList c;
  std::string detail;
  try {
    const ExperimentConfig cfg =
        load_config_file(g_configs_dir + "/lemma6_kolmogorov.json");
    const ExperimentOutcome out = run_kolmogorov(cfg);
    c.expect(out.pass, "inequality 3-sigma bound: " + out.stats.dump());

    // the pinned Rademacher case against exhaustive enumeration
    const double exact = enumerate_rademacher_max_prob(4, 2.0);
    const KolmogorovCheck mc = kolmogorov_inequality_check(
        {StepLaw::Kind::kRademacher, 1.0, 0.0},
        {StoppingRule::Kind::kFixed, 4, 0.0}, 2.0, 40000, cfg.base_seed + 1,
        cfg.workers);
    c.expect(std::abs(mc.lhs_estimate - exact) <= 3.0 * mc.lhs_stderr,
             "enumeration match: mc " + std::to_string(mc.lhs_estimate) +
                 " enum " + std::to_string(exact));
    char buf[96];
    std::snprintf(buf, sizeof(buf), "enum %.4f mc %.4f rhs 1.0", exact,
                  mc.lhs_estimate);
    detail = buf;
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  report(9, "stopped-maximum inequality", c, secs, detail);
}

// ---------------------------------------------------------------------------
// 11. Byte-identical CSV across worker counts, every subcommand.
// ---------------------------------------------------------------------------
std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_reproducibility() {
  const auto t0 = Clock::now();
  CheckList c;
  const std::vector<std::string> subcommands = {
      "residual_order", "limit_compare", "arcsine",
      "mpp",            "kolmogorov",    "renewal_mean"};
  for (const auto& sub : subcommands) {
    const std::string cfg = g_configs_dir + "/smoke/" + sub + ".json";
    const std::string out1 = "acc11_" + sub + "_w1.csv";
    const std::string out2 = "acc11_" + sub + "_w3.csv";
    const std::string cmd1 = g_ctrw_binary + " " + sub + " --config " + cfg +
                             " --workers 1 --out " + out1 + " > /dev/null";
    const std::string cmd2 = g_ctrw_binary + " " + sub + " --config " + cfg +
                             " --workers 3 --out " + out2 + " > /dev/null";
    const int rc1 = std::system(cmd1.c_str());
    const int rc2 = std::system(cmd2.c_str());
    c.expect(rc1 == 0 && rc2 == 0, sub + ": nonzero exit code");
    const std::string csv1 = read_file(out1);
    const std::string csv2 = read_file(out2);
    c.expect(!csv1.empty(), sub + ": empty output");
    c.expect(csv1 == csv2, sub + ": CSV differs across worker counts");
    if (sub == "residual_order") {
      // smoke config: 10 replicates -> exactly 10 data rows
      const long rows = std::count(csv1.begin(), csv1.end(), '\n') - 1;
      c.expect(rows == 10, "smoke run row count: " + std::to_string(rows));
    }
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  report(11, "byte-identical CSV across workers", c, secs);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <configs_dir> <ctrw_binary> "
                         "[--only N]\n");
    return 2;
  }
  g_configs_dir = argv[1];
  g_ctrw_binary = argv[2];
  int only = 0;
  if (argc >= 5 && std::string(argv[3]) == "--only") {
    only = std::atoi(argv[4]);
  }
  auto want = [&](int id) { return only == 0 || only == id; };

  if (want(1)) criterion_hand_worked();
  if (want(2)) criterion_pathwise();
  if (want(3)) criterion_isotropic_antiranks();
  if (want(4)) {
    run_config_criterion(4, "residual order statistics at scale",
                         "theorem2_residual_order.json");
  }
  if (want(5)) {
    run_config_criterion(5, "uncoupled limits coincide",
                         "theorem5_uncoupled.json");
  }
  if (want(6)) {
    run_config_criterion(6, "tight coupling under/overshoot",
                         "theorem5_tight_arcsine.json");
  }
  if (want(7)) {
    run_config_criterion(7, "common-shock coupling limits",
                         "theorem5_common_shock.json");
  }
  if (want(8)) {
    run_config_criterion(8, "point process count functionals",
                         "lemma4_mpp.json");
  }
  if (want(9)) criterion_kolmogorov();
  if (want(10)) {
    run_config_criterion(10, "renewal-mean asymptotic", "renewal_mean.json");
  }
  if (want(11)) criterion_reproducibility();

  if (g_failures == 0) {
    std::printf("all checks passed\n");
    return 0;
  }
  std::printf("%d check(s) failed\n", g_failures);
  return 1;
}
