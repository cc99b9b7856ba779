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
// Batch experiment runner: one subcommand per limit theorem. Reads a JSON
// config, writes a CSV result table and prints a one-line JSON summary.
// Exit codes: 0 all checks passed, 1 a statistical check failed or the
// series truncation was exhausted, 2 invalid configuration.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ctrw/config.hpp"
#include "ctrw/errors.hpp"
#include "ctrw/experiments.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  unsigned workers = 0;
};

int run(const std::string& subcommand, const CliOptions& opts) {
  ctrw::ExperimentConfig cfg;
  try {
    cfg = ctrw::load_config_file(opts.config_path);
    if (cfg.experiment != subcommand) {
      throw ctrw::ConfigError("config experiment \"" + cfg.experiment +
                              "\" does not match subcommand \"" + subcommand +
                              "\"");
    }
  } catch (const ctrw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  if (opts.seed_set) cfg.base_seed = opts.seed;
  if (!opts.out_path.empty()) cfg.output = opts.out_path;
  if (opts.workers > 0) cfg.workers = opts.workers;

  try {
    const ctrw::ExperimentOutcome outcome = ctrw::run_experiment(cfg);
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write output file: " << cfg.output << "\n";
      return 2;
    }
    out << outcome.table.to_csv();
    out.close();

    nlohmann::json summary{{"experiment", cfg.experiment},
                           {"pass", outcome.pass},
                           {"seed", cfg.base_seed},
                           {"output", cfg.output},
                           {"stats", outcome.stats}};
    std::cout << summary.dump() << "\n";
    return outcome.pass ? 0 : 1;
  } catch (const ctrw::TruncationExhaustedError& e) {
    std::cerr << "truncation exhausted: " << e.what()
              << " (raise \"K\" in the config)\n";
    return 1;
  } catch (const ctrw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coupled CTRW scaling-limit simulation and verification"};
  app.require_subcommand(1);

  static const char* kExperiments[] = {"residual_order", "limit_compare",
                                       "arcsine",        "mpp",
                                       "kolmogorov",     "renewal_mean"};
  static const char* kDescriptions[] = {
      "residual order statistics against the limit sequence",
      "pre-limit CTRW positions against the series limits",
      "tight-coupling under/overshoot against a renewal oracle",
      "marked point process counting functionals",
      "stopped-maximum inequality checks",
      "renewal-mean integrated-tail asymptotic"};

  CliOptions opts;
  for (std::size_t i = 0; i < 6; ++i) {
    CLI::App* sub = app.add_subcommand(kExperiments[i], kDescriptions[i]);
    sub->add_option("--config", opts.config_path, "JSON experiment config")
        ->required();
    sub->add_option("--seed", opts.seed, "override base_seed");
    sub->add_option("--out", opts.out_path, "override the CSV output path");
    sub->add_option("--workers", opts.workers, "override the worker count");
  }

  CLI11_PARSE(app, argc, argv);

  const CLI::App* sub = app.get_subcommands().front();
  opts.seed_set = sub->count("--seed") > 0;
  return run(sub->get_name(), opts);
}
