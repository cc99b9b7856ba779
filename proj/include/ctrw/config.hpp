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
// JSON experiment configuration. Parsing is strict: unknown keys are
// rejected, types are checked, and every experiment declares its required
// and optional key sets (see configs/schema.json for the published schema).

#ifndef CTRW_CONFIG_HPP_
#define CTRW_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctrw/ctrw_engine.hpp"
#include "ctrw/errors.hpp"
#include "ctrw/levy_measure.hpp"
#include "ctrw/stats.hpp"

namespace ctrw {

struct ExperimentConfig {
  std::string experiment;
  std::optional<LevyMeasureModel> model;
  std::optional<SubordinatorTail> subordinator;
  std::optional<WalkMode> coupling;
  std::uint64_t n_scale = 0;
  double horizon = 0.0;
  double t = 0.0;
  std::size_t truncation_depth = 0;  // 0: derive from the truncation rule
  double truncation_tol_factor = 1e-4;
  std::optional<double> eps;  // absent: 0 when all beta < 1, else 1e-6
  std::size_t replicates = 0;
  std::size_t limit_replicates = 0;
  std::size_t k_max = 0;
  std::size_t config_count = 0;            // kolmogorov
  std::vector<double> t_values;            // renewal_mean
  std::vector<std::size_t> replicates_per_t;
  std::uint64_t base_seed = 0;
  unsigned workers = 1;
  std::map<std::string, double> thresholds;
  std::vector<CountWindow> windows;  // mpp; empty: derived defaults
  std::string output;                // empty: "<experiment>.csv"

  // Derived accessors used by the experiment runners.
  double resolved_eps() const;
  std::size_t resolved_truncation_depth() const;
  CouplingSpec coupling_spec() const;
};

// Throws ConfigError on any schema violation.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);

LevyMeasureModel model_from_json(const nlohmann::json& j);
SubordinatorTail subordinator_from_json(const nlohmann::json& j);

}  // namespace ctrw

#endif  // CTRW_CONFIG_HPP_
