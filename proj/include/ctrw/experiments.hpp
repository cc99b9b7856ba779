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
// One experiment runner per limit theorem. Each runner samples the pre-limit
// and limit sides, applies the configured statistical checks and returns a
// deterministic result table plus a pass/fail summary.

#ifndef CTRW_EXPERIMENTS_HPP_
#define CTRW_EXPERIMENTS_HPP_

#include <string>
#include <vector>

#include <json.hpp>

#include "ctrw/config.hpp"

namespace ctrw {

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string to_csv() const;
};

struct ExperimentOutcome {
  bool pass = false;
  nlohmann::json stats;
  ResultTable table;
};

ExperimentOutcome run_residual_order(const ExperimentConfig& cfg);
ExperimentOutcome run_limit_compare(const ExperimentConfig& cfg);
ExperimentOutcome run_arcsine(const ExperimentConfig& cfg);
ExperimentOutcome run_mpp(const ExperimentConfig& cfg);
ExperimentOutcome run_kolmogorov(const ExperimentConfig& cfg);
ExperimentOutcome run_renewal_mean(const ExperimentConfig& cfg);

// Dispatches on cfg.experiment.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

}  // namespace ctrw

#endif  // CTRW_EXPERIMENTS_HPP_
