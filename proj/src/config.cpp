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

#include "dpopt/config.hpp"

#include <fstream>
#include <stdexcept>

namespace dpopt {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw ConfigError(what); }

const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) {
    bad("missing field " + path + "." + key);
  }
  return j.at(key);
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) bad(path + " must be a number");
  return j.get<double>();
}

std::int64_t as_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) bad(path + " must be an integer");
  return j.get<std::int64_t>();
}

std::uint64_t as_seed(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    bad(path + " must be a nonnegative integer");
  }
  return j.get<std::uint64_t>();
}

Vector as_vector(const json& j, int dim, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    bad(path + " must be an array of " + std::to_string(dim) + " numbers");
  }
  Vector v(dim);
  for (int k = 0; k < dim; ++k) v[k] = as_number(j.at(k), path);
  return v;
}

ProblemConfig parse_problem(const json& j) {
  ProblemConfig p;
  p.dim = static_cast<int>(as_integer(require(j, "dim", "problem"), "problem.dim"));
  if (p.dim < 1) bad("problem.dim must be >= 1");
  p.agents = static_cast<int>(
      as_integer(require(j, "agents", "problem"), "problem.agents"));
  if (p.agents < 2) bad("problem.agents must be >= 2");
  p.lower = j.contains("lower") ? as_vector(j.at("lower"), p.dim, "problem.lower")
                                : Vector::Constant(p.dim, -1.0);
  p.upper = j.contains("upper") ? as_vector(j.at("upper"), p.dim, "problem.upper")
                                : Vector::Constant(p.dim, 1.0);
  if (j.contains("anchors")) {
    const json& arr = j.at("anchors");
    if (!arr.is_array() || static_cast<int>(arr.size()) != p.agents) {
      bad("problem.anchors must list one anchor per agent");
    }
    std::vector<Vector> anchors;
    anchors.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
      anchors.push_back(as_vector(arr.at(i), p.dim, "problem.anchors"));
    }
    p.anchors = std::move(anchors);
  }
  if (j.contains("anchor_seed")) {
    p.anchor_seed = as_seed(j.at("anchor_seed"), "problem.anchor_seed");
  }
  if (j.contains("init")) {
    const json& init = j.at("init");
    if (init.is_string()) {
      const std::string name = init.get<std::string>();
      if (name == "anchors") {
        p.init = InitPolicy::anchors();
      } else if (name == "uniform") {
        p.init = InitPolicy::uniform();
      } else {
        bad("problem.init must be 'anchors', 'uniform', or {\"point\": [...]}");
      }
    } else if (init.is_object() && init.contains("point")) {
      p.init = InitPolicy::fixed(as_vector(init.at("point"), p.dim, "problem.init.point"));
    } else {
      bad("problem.init must be 'anchors', 'uniform', or {\"point\": [...]}");
    }
  }
  return p;
}

GraphConfig parse_graph(const json& j) {
  GraphConfig g;
  const json& fam = require(j, "family", "graph");
  if (!fam.is_string()) bad("graph.family must be a string");
  try {
    g.family = graph_family_from_string(fam.get<std::string>());
  } catch (const std::invalid_argument& err) {
    bad("graph.family: " + std::string(err.what()));
  }
  if (j.contains("seed")) g.seed = as_seed(j.at("seed"), "graph.seed");
  if (j.contains("extra_edge_probability")) {
    g.extra_edge_probability =
        as_number(j.at("extra_edge_probability"), "graph.extra_edge_probability");
    if (!(g.extra_edge_probability >= 0.0 && g.extra_edge_probability <= 1.0)) {
      bad("graph.extra_edge_probability must lie in [0,1]");
    }
  }
  return g;
}

ScheduleParams parse_schedule(const json& j) {
  const double eps = as_number(require(j, "epsilon", "schedule"), "schedule.epsilon");
  const double c = as_number(require(j, "c", "schedule"), "schedule.c");
  const double q = as_number(require(j, "q", "schedule"), "schedule.q");
  const double p = as_number(require(j, "p", "schedule"), "schedule.p");
  try {
    return ScheduleParams(eps, c, q, p);
  } catch (const std::invalid_argument& err) {
    bad(std::string("schedule: ") + err.what());
  }
}

ExperimentSection parse_experiment(const json& j) {
  ExperimentSection e;
  if (j.contains("epsilon_list")) {
    const json& arr = j.at("epsilon_list");
    if (!arr.is_array() || arr.empty()) {
      bad("experiment.epsilon_list must be a nonempty array");
    }
    for (const json& v : arr) {
      const double eps = as_number(v, "experiment.epsilon_list");
      if (!(eps > 0.0)) bad("experiment.epsilon_list entries must be > 0");
      e.epsilon_list.push_back(eps);
    }
  }
  if (j.contains("trials")) {
    e.trials = static_cast<int>(as_integer(j.at("trials"), "experiment.trials"));
    if (e.trials < 1) bad("experiment.trials must be >= 1");
  }
  if (j.contains("rounds")) {
    e.rounds = as_integer(j.at("rounds"), "experiment.rounds");
    if (e.rounds < 0) bad("experiment.rounds must be >= 0");
  }
  if (j.contains("max_rounds")) {
    e.max_rounds = as_integer(j.at("max_rounds"), "experiment.max_rounds");
    if (e.max_rounds < 1) bad("experiment.max_rounds must be >= 1");
  }
  if (j.contains("tuning")) {
    const json& mode = j.at("tuning");
    if (!mode.is_string() ||
        (mode.get<std::string>() != "auto" && mode.get<std::string>() != "fixed")) {
      bad("experiment.tuning must be 'auto' or 'fixed'");
    }
    e.tune_auto = mode.get<std::string>() == "auto";
  }
  if (j.contains("seed")) e.seed = as_seed(j.at("seed"), "experiment.seed");
  if (j.contains("output_dir")) {
    if (!j.at("output_dir").is_string()) bad("experiment.output_dir must be a string");
    e.output_dir = j.at("output_dir").get<std::string>();
  }
  return e;
}

}  // namespace

Config parse_config(const nlohmann::json& j) {
  if (!j.is_object()) bad("config root must be a JSON object");
  Config config;
  config.problem = parse_problem(require(j, "problem", "config"));
  config.graph = parse_graph(require(j, "graph", "config"));
  if (j.contains("schedule")) {
    config.schedule = parse_schedule(j.at("schedule"));
  }
  if (j.contains("experiment")) {
    config.experiment = parse_experiment(j.at("experiment"));
  }
  if (!config.experiment.tune_auto && !config.schedule.has_value()) {
    bad("experiment.tuning 'fixed' requires a schedule section");
  }
  return config;
}

Config load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& err) {
    bad("config JSON parse error: " + std::string(err.what()));
  }
  return parse_config(j);
}

nlohmann::json to_json(const Config& config) {
  nlohmann::json j;
  nlohmann::json problem;
  problem["dim"] = config.problem.dim;
  problem["agents"] = config.problem.agents;
  problem["lower"] = std::vector<double>(
      config.problem.lower.data(),
      config.problem.lower.data() + config.problem.lower.size());
  problem["upper"] = std::vector<double>(
      config.problem.upper.data(),
      config.problem.upper.data() + config.problem.upper.size());
  if (config.problem.anchors.has_value()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Vector& a : *config.problem.anchors) {
      arr.push_back(std::vector<double>(a.data(), a.data() + a.size()));
    }
    problem["anchors"] = std::move(arr);
  }
  problem["anchor_seed"] = config.problem.anchor_seed;
  switch (config.problem.init.kind) {
    case InitPolicy::Kind::kAnchors:
      problem["init"] = "anchors";
      break;
    case InitPolicy::Kind::kUniform:
      problem["init"] = "uniform";
      break;
    case InitPolicy::Kind::kFixedPoint:
      problem["init"] = {
          {"point", std::vector<double>(config.problem.init.point.data(),
                                        config.problem.init.point.data() +
                                            config.problem.init.point.size())}};
      break;
  }
  j["problem"] = std::move(problem);

  j["graph"] = {{"family", to_string(config.graph.family)},
                {"seed", config.graph.seed},
                {"extra_edge_probability", config.graph.extra_edge_probability}};

  if (config.schedule.has_value()) {
    j["schedule"] = {{"epsilon", config.schedule->epsilon},
                     {"c", config.schedule->c},
                     {"q", config.schedule->q},
                     {"p", config.schedule->p}};
  }

  j["experiment"] = {{"epsilon_list", config.experiment.epsilon_list},
                     {"trials", config.experiment.trials},
                     {"rounds", config.experiment.rounds},
                     {"max_rounds", config.experiment.max_rounds},
                     {"tuning", config.experiment.tune_auto ? "auto" : "fixed"},
                     {"seed", config.experiment.seed},
                     {"output_dir", config.experiment.output_dir}};
  return j;
}

std::string config_hash(const Config& config) {
  const std::string dump = to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  static const char* hex = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = hex[h & 0xf];
    h >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf);
}

std::shared_ptr<const ProblemInstance> build_problem(const Config& config) {
  BoxDomain domain(config.problem.lower, config.problem.upper);
  auto graph = std::make_shared<const GraphSchedule>(
      config.graph.family, config.problem.agents, config.graph.seed,
      config.graph.extra_edge_probability);
  if (config.problem.anchors.has_value()) {
    return std::make_shared<const ProblemInstance>(make_rendezvous_with_anchors(
        domain, *config.problem.anchors, std::move(graph)));
  }
  return std::make_shared<const ProblemInstance>(make_rendezvous(
      config.problem.agents, domain, config.problem.anchor_seed, std::move(graph)));
}

}  // namespace dpopt
