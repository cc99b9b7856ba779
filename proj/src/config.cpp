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

#include "ctrw/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "ctrw/series_sampler.hpp"

namespace ctrw {

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::set<std::string>& required,
                  const std::set<std::string>& optional,
                  const std::string& context) {
  if (!j.is_object()) {
    throw ConfigError(context + ": expected a JSON object");
  }
  for (const auto& item : j.items()) {
    if (!required.count(item.key()) && !optional.count(item.key())) {
      throw ConfigError(context + ": unknown key \"" + item.key() + "\"");
    }
  }
  for (const auto& key : required) {
    if (!j.contains(key)) {
      throw ConfigError(context + ": missing required key \"" + key + "\"");
    }
  }
}

double get_number(const json& j, const std::string& key,
                  const std::string& context) {
  if (!j.at(key).is_number()) {
    throw ConfigError(context + ": \"" + key + "\" must be a number");
  }
  return j.at(key).get<double>();
}

double get_positive(const json& j, const std::string& key,
                    const std::string& context) {
  const double v = get_number(j, key, context);
  if (!(v > 0.0)) {
    throw ConfigError(context + ": \"" + key + "\" must be positive");
  }
  return v;
}

std::uint64_t get_uint(const json& j, const std::string& key,
                       const std::string& context) {
  const json& v = j.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  throw ConfigError(context + ": \"" + key +
                    "\" must be a non-negative integer");
}

std::string get_string(const json& j, const std::string& key,
                       const std::string& context) {
  if (!j.at(key).is_string()) {
    throw ConfigError(context + ": \"" + key + "\" must be a string");
  }
  return j.at(key).get<std::string>();
}

WalkMode coupling_from_string(const std::string& s) {
  if (s == "uncoupled") return WalkMode::kUncoupled;
  if (s == "tight") return WalkMode::kTight;
  if (s == "common_shock") return WalkMode::kCommonShock;
  throw ConfigError("coupling must be one of uncoupled, tight, common_shock");
}

// The tight coupling pins the 1-d spatial model to the temporal tail.
LevyMeasureModel tight_model(const SubordinatorTail& sub) {
  return LevyMeasureModel(
      SpectralMeasure::make_atoms({SpectralAtom{{1.0}, 1.0}}),
      {DirectionalTail(sub.c_time, sub.alpha)});
}

}  // namespace

LevyMeasureModel model_from_json(const json& j) {
  require_keys(j, {"dimension"}, {"atoms", "uniform_sphere"}, "model");
  const int dimension = static_cast<int>(get_uint(j, "dimension", "model"));
  const bool has_atoms = j.contains("atoms");
  const bool has_uniform = j.contains("uniform_sphere");
  if (has_atoms == has_uniform) {
    throw ConfigError(
        "model: exactly one of \"atoms\" and \"uniform_sphere\" is required");
  }
  try {
    if (has_uniform) {
      const json& u = j.at("uniform_sphere");
      require_keys(u, {"c", "beta"}, {}, "model.uniform_sphere");
      return LevyMeasureModel(
          SpectralMeasure::make_uniform_sphere(dimension),
          {DirectionalTail(get_positive(u, "c", "model.uniform_sphere"),
                           get_number(u, "beta", "model.uniform_sphere"))});
    }
    if (!j.at("atoms").is_array() || j.at("atoms").empty()) {
      throw ConfigError("model: \"atoms\" must be a non-empty array");
    }
    std::vector<SpectralAtom> atoms;
    std::vector<DirectionalTail> tails;
    for (const auto& a : j.at("atoms")) {
      require_keys(a, {"direction", "weight", "c", "beta"}, {}, "model.atom");
      if (!a.at("direction").is_array() ||
          a.at("direction").size() != static_cast<std::size_t>(dimension)) {
        throw ConfigError("model.atom: \"direction\" must be an array of "
                          "length \"dimension\"");
      }
      Vec dir;
      for (const auto& x : a.at("direction")) {
        if (!x.is_number()) {
          throw ConfigError("model.atom: direction entries must be numbers");
        }
        dir.push_back(x.get<double>());
      }
      atoms.push_back({std::move(dir), get_positive(a, "weight", "model.atom")});
      tails.emplace_back(get_positive(a, "c", "model.atom"),
                         get_number(a, "beta", "model.atom"));
    }
    return LevyMeasureModel(SpectralMeasure::make_atoms(std::move(atoms)),
                            std::move(tails));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
}

SubordinatorTail subordinator_from_json(const json& j) {
  require_keys(j, {"alpha", "c_time"}, {}, "subordinator");
  try {
    return SubordinatorTail(get_number(j, "alpha", "subordinator"),
                            get_number(j, "c_time", "subordinator"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("subordinator: ") + e.what());
  }
}

double ExperimentConfig::resolved_eps() const {
  if (eps.has_value()) return *eps;
  if (!model.has_value()) return 0.0;
  return model->centering_mode() == CenteringMode::kNone ? 0.0 : 1e-6;
}

std::size_t ExperimentConfig::resolved_truncation_depth() const {
  if (truncation_depth > 0) return truncation_depth;
  if (!subordinator.has_value() || !(horizon > 0.0) || !(t > 0.0)) {
    throw ConfigError("config: \"K\" is required for this experiment");
  }
  return default_truncation_depth(*subordinator, horizon,
                                  truncation_tol_factor * t);
}

CouplingSpec ExperimentConfig::coupling_spec() const {
  if (!coupling.has_value() || !subordinator.has_value()) {
    throw ConfigError("config: \"coupling\" and \"subordinator\" required");
  }
  LevyMeasureModel m = model.has_value() ? *model : tight_model(*subordinator);
  try {
    return CouplingSpec(*coupling, *subordinator, std::move(m));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig parse_config(const json& j) {
  static const std::set<std::string> kExperiments = {
      "residual_order", "limit_compare", "arcsine",
      "mpp",            "kolmogorov",    "renewal_mean"};

  if (!j.is_object() || !j.contains("experiment") ||
      !j.at("experiment").is_string()) {
    throw ConfigError("config: \"experiment\" (string) is required");
  }
  ExperimentConfig cfg;
  cfg.experiment = j.at("experiment").get<std::string>();
  if (!kExperiments.count(cfg.experiment)) {
    throw ConfigError("config: unknown experiment \"" + cfg.experiment + "\"");
  }

  std::set<std::string> required = {"experiment", "base_seed"};
  std::set<std::string> optional = {"workers", "output", "thresholds"};
  if (cfg.experiment == "residual_order") {
    required.insert({"model", "subordinator", "coupling", "n_scale",
                     "horizon", "replicates", "k_max"});
    optional.insert({"K"});
  } else if (cfg.experiment == "limit_compare") {
    required.insert({"model", "subordinator", "coupling", "n_scale",
                     "horizon", "t", "replicates", "limit_replicates"});
    optional.insert({"K", "eps", "truncation_tol_factor"});
  } else if (cfg.experiment == "arcsine") {
    required.insert({"subordinator", "coupling", "n_scale", "horizon", "t",
                     "replicates", "limit_replicates"});
    optional.insert({"model", "K", "truncation_tol_factor"});
  } else if (cfg.experiment == "mpp") {
    required.insert({"model", "subordinator", "coupling", "n_scale",
                     "horizon", "replicates", "K", "eps"});
    optional.insert({"limit_replicates", "windows"});
  } else if (cfg.experiment == "kolmogorov") {
    required.insert({"replicates", "config_count"});
  } else if (cfg.experiment == "renewal_mean") {
    required.insert({"subordinator", "t_values", "replicates"});
  }
  require_keys(j, required, optional, "config");

  cfg.base_seed = get_uint(j, "base_seed", "config");
  if (j.contains("workers")) {
    cfg.workers = static_cast<unsigned>(get_uint(j, "workers", "config"));
    if (cfg.workers < 1) throw ConfigError("config: workers must be >= 1");
  }
  if (j.contains("output")) cfg.output = get_string(j, "output", "config");
  if (j.contains("model")) cfg.model = model_from_json(j.at("model"));
  if (j.contains("subordinator")) {
    cfg.subordinator = subordinator_from_json(j.at("subordinator"));
  }
  if (j.contains("coupling")) {
    cfg.coupling = coupling_from_string(get_string(j, "coupling", "config"));
  }
  if (j.contains("n_scale")) {
    cfg.n_scale = get_uint(j, "n_scale", "config");
    if (cfg.n_scale < 1) throw ConfigError("config: n_scale must be >= 1");
  }
  if (j.contains("horizon")) {
    cfg.horizon = get_positive(j, "horizon", "config");
  }
  if (j.contains("t")) {
    cfg.t = get_number(j, "t", "config");
    if (cfg.t < 0.0) throw ConfigError("config: t must be >= 0");
  }
  if (j.contains("K")) {
    cfg.truncation_depth = get_uint(j, "K", "config");
    if (cfg.truncation_depth < 1) throw ConfigError("config: K must be >= 1");
  }
  if (j.contains("truncation_tol_factor")) {
    cfg.truncation_tol_factor =
        get_positive(j, "truncation_tol_factor", "config");
  }
  if (j.contains("eps")) {
    cfg.eps = get_number(j, "eps", "config");
    if (*cfg.eps < 0.0) throw ConfigError("config: eps must be >= 0");
  }
  if (j.contains("replicates")) {
    if (j.at("replicates").is_array()) {
      if (cfg.experiment != "renewal_mean") {
        throw ConfigError("config: per-t replicates only for renewal_mean");
      }
      for (const auto& r : j.at("replicates")) {
        if (!r.is_number_unsigned() || r.get<std::uint64_t>() < 1) {
          throw ConfigError("config: replicates entries must be positive");
        }
        cfg.replicates_per_t.push_back(r.get<std::size_t>());
      }
    } else {
      cfg.replicates = get_uint(j, "replicates", "config");
      if (cfg.replicates < 1) {
        throw ConfigError("config: replicates must be >= 1");
      }
    }
  }
  if (j.contains("limit_replicates")) {
    cfg.limit_replicates = get_uint(j, "limit_replicates", "config");
    if (cfg.limit_replicates < 1) {
      throw ConfigError("config: limit_replicates must be >= 1");
    }
  }
  if (j.contains("k_max")) {
    cfg.k_max = get_uint(j, "k_max", "config");
    if (cfg.k_max < 1) throw ConfigError("config: k_max must be >= 1");
  }
  if (j.contains("config_count")) {
    cfg.config_count = get_uint(j, "config_count", "config");
    if (cfg.config_count < 1) {
      throw ConfigError("config: config_count must be >= 1");
    }
  }
  if (j.contains("t_values")) {
    if (!j.at("t_values").is_array() || j.at("t_values").empty()) {
      throw ConfigError("config: t_values must be a non-empty array");
    }
    for (const auto& x : j.at("t_values")) {
      if (!x.is_number() || !(x.get<double>() > 0.0)) {
        throw ConfigError("config: t_values entries must be positive");
      }
      cfg.t_values.push_back(x.get<double>());
    }
    if (!std::is_sorted(cfg.t_values.begin(), cfg.t_values.end())) {
      throw ConfigError("config: t_values must be increasing");
    }
  }
  if (j.contains("thresholds")) {
    if (!j.at("thresholds").is_object()) {
      throw ConfigError("config: thresholds must be an object");
    }
    for (const auto& item : j.at("thresholds").items()) {
      if (!item.value().is_number()) {
        throw ConfigError("config: threshold values must be numbers");
      }
      cfg.thresholds[item.key()] = item.value().get<double>();
    }
  }
  if (j.contains("windows")) {
    if (!j.at("windows").is_array() || j.at("windows").empty()) {
      throw ConfigError("config: windows must be a non-empty array");
    }
    for (const auto& w : j.at("windows")) {
      require_keys(w, {"s", "delta"}, {}, "config.window");
      cfg.windows.push_back({get_positive(w, "s", "config.window"),
                             get_positive(w, "delta", "config.window")});
    }
  }

  // Cross-field checks.
  if (cfg.experiment == "renewal_mean") {
    if (!cfg.replicates_per_t.empty() &&
        cfg.replicates_per_t.size() != cfg.t_values.size()) {
      throw ConfigError(
          "config: replicates array must match t_values length");
    }
  }
  if (cfg.experiment == "arcsine") {
    if (cfg.coupling != WalkMode::kTight) {
      throw ConfigError("config: arcsine requires tight coupling");
    }
  }
  if (cfg.experiment == "residual_order" && cfg.model.has_value()) {
    const std::size_t depth = cfg.truncation_depth > 0
                                  ? cfg.truncation_depth
                                  : std::max<std::size_t>(256, 8 * cfg.k_max);
    if (cfg.k_max > depth) {
      throw ConfigError("config: k_max exceeds the truncation depth K");
    }
  }
  if (cfg.output.empty()) cfg.output = cfg.experiment + ".csv";
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config JSON parse error: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace ctrw
