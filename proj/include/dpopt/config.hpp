// Copyright 2026 The dpopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPOPT_CONFIG_HPP_
#define DPOPT_CONFIG_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpopt/optimizer.hpp"
#include "dpopt/problem.hpp"
#include "dpopt/schedule.hpp"

namespace dpopt {

// Malformed or inconsistent configuration. The CLI maps this (and any other
// std::invalid_argument) to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ProblemConfig {
  int dim = 2;
  int agents = 5;
  Vector lower;  // defaults to -1 per component
  Vector upper;  // defaults to +1 per component
  std::optional<std::vector<Vector>> anchors;
  std::uint64_t anchor_seed = 1;
  InitPolicy init = InitPolicy::anchors();
};

struct GraphConfig {
  GraphFamily family = GraphFamily::kRing;
  std::uint64_t seed = 1;
  double extra_edge_probability = 0.3;
};

struct ExperimentSection {
  std::vector<double> epsilon_list;
  int trials = 100;
  std::int64_t rounds = 0;  // 0: derive from the step schedule tail
  std::int64_t max_rounds = 20000;
  bool tune_auto = true;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
};

struct Config {
  ProblemConfig problem;
  GraphConfig graph;
  std::optional<ScheduleParams> schedule;
  ExperimentSection experiment;
};

Config parse_config(const nlohmann::json& j);
Config load_config_file(const std::string& path);
nlohmann::json to_json(const Config& config);

// FNV-1a over the canonical JSON dump; 16 hex digits. Stamped into emitted
// manifests so outputs can be traced back to the exact configuration.
std::string config_hash(const Config& config);

std::shared_ptr<const ProblemInstance> build_problem(const Config& config);

}  // namespace dpopt

#endif  // DPOPT_CONFIG_HPP_
