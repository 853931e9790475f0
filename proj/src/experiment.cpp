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

#include "dpopt/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "dpopt/csvio.hpp"

namespace dpopt {
namespace {

constexpr std::uint64_t kTrialTag = 0x7472696cu;

const char kPlotScript[] = R"PY(#!/usr/bin/env python3
"""Plot mean squared distance to the optimum against the privacy budget.

Reads summary.csv from this script's directory and writes
accuracy_vs_privacy.png next to it.
"""
import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
rows = []
with open(os.path.join(here, "summary.csv"), newline="") as fh:
    for row in csv.DictReader(fh):
        rows.append({k: float(v) for k, v in row.items()})
rows.sort(key=lambda r: r["epsilon"])

eps = [r["epsilon"] for r in rows]
mean_d = [r["mean_d"] for r in rows]
lo = [r["p5"] for r in rows]
hi = [r["p95"] for r in rows]
theory = [r["theoretical_d"] for r in rows]

fig, ax = plt.subplots(figsize=(6, 4.5))
ax.fill_between(eps, lo, hi, alpha=0.25, label="5th-95th percentile")
ax.plot(eps, mean_d, "o-", label="empirical mean")
ax.plot(eps, theory, "s--", label="theoretical cap")
ax.set_xscale("log")
ax.set_yscale("log")
ax.set_xlabel("privacy budget epsilon")
ax.set_ylabel("squared distance to optimum")
ax.legend()
ax.grid(True, which="both", alpha=0.3)
fig.tight_layout()
fig.savefig(os.path.join(here, "accuracy_vs_privacy.png"), dpi=150)
print("wrote accuracy_vs_privacy.png")
)PY";

double one_trial(const ProblemInstance& problem, const InitPolicy& init,
                 const ScheduleParams& params, std::int64_t rounds,
                 const Vector& x_star, std::uint64_t master,
                 std::size_t eps_index, int trial) {
  const std::uint64_t seed =
      stream_for(master, {kTrialTag, static_cast<std::uint64_t>(eps_index),
                          static_cast<std::uint64_t>(trial)})
          .key();
  const Matrix final_states = run_final(problem, params, rounds, seed, init);
  return (mean_estimate(final_states) - x_star).squaredNorm();
}

void summarize(EpsilonSummary& summary) {
  std::vector<double> finite;
  finite.reserve(summary.sq_distance.size());
  for (double v : summary.sq_distance) {
    if (std::isfinite(v)) {
      finite.push_back(v);
    } else {
      ++summary.flagged;
    }
  }
  if (finite.empty()) {
    summary.mean = summary.p5 = summary.p50 = summary.p95 =
        std::numeric_limits<double>::quiet_NaN();
    return;
  }
  double acc = 0.0;
  for (double v : finite) acc += v;
  summary.mean = acc / static_cast<double>(finite.size());
  summary.p5 = quantile(finite, 0.05);
  summary.p50 = quantile(finite, 0.50);
  summary.p95 = quantile(finite, 0.95);
}

ExperimentResult run_impl(const Config& config, bool parallel) {
  if (config.experiment.epsilon_list.empty()) {
    throw ConfigError("experiment.epsilon_list must be set to run a sweep");
  }
  const std::shared_ptr<const ProblemInstance> problem = build_problem(config);
  const CostConstants& constants = problem->constants();
  const int dim = problem->dim();
  const OptimumResult opt = global_optimum(*problem);

  ExperimentResult result;
  result.config = config;
  result.hash = config_hash(config);
  result.x_star = opt.x_star;
  result.f_star = opt.f_star;

  ScheduleParams warm_params;
  const ScheduleParams* warm = nullptr;
  for (std::size_t eps_index = 0;
       eps_index < config.experiment.epsilon_list.size(); ++eps_index) {
    const double eps = config.experiment.epsilon_list[eps_index];
    EpsilonSummary summary;
    summary.epsilon = eps;
    summary.params = params_for_epsilon(config, constants, dim, eps, warm);
    warm_params = summary.params;
    warm = &warm_params;
    summary.rounds = config.experiment.rounds > 0
                         ? config.experiment.rounds
                         : auto_rounds(summary.params,
                                       config.experiment.max_rounds);
    summary.bound = accuracy_bound(constants, dim, summary.params);
    summary.sq_distance.assign(static_cast<std::size_t>(config.experiment.trials),
                               0.0);

    const int trials = config.experiment.trials;
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
      for (int trial = 0; trial < trials; ++trial) {
        summary.sq_distance[static_cast<std::size_t>(trial)] =
            one_trial(*problem, config.problem.init, summary.params,
                      summary.rounds, result.x_star, config.experiment.seed,
                      eps_index, trial);
      }
    } else {
      for (int trial = 0; trial < trials; ++trial) {
        summary.sq_distance[static_cast<std::size_t>(trial)] =
            one_trial(*problem, config.problem.init, summary.params,
                      summary.rounds, result.x_star, config.experiment.seed,
                      eps_index, trial);
      }
    }
    summarize(summary);
    result.per_epsilon.push_back(std::move(summary));
  }
  return result;
}

}  // namespace

std::int64_t auto_rounds(const ScheduleParams& params, std::int64_t max_rounds) {
  if (max_rounds < 1) {
    throw std::invalid_argument("auto_rounds: max_rounds must be >= 1");
  }
  if (params.c <= 1e-6) return 1;
  const double t =
      std::ceil(1.0 + std::log(1e-6 / params.c) / std::log(params.q));
  if (!(t >= 1.0)) return 1;
  if (t >= static_cast<double>(max_rounds)) return max_rounds;
  return static_cast<std::int64_t>(t);
}

ScheduleParams params_for_epsilon(const Config& config,
                                  const CostConstants& constants, int dim,
                                  double epsilon, const ScheduleParams* warm) {
  if (!config.experiment.tune_auto) {
    if (!config.schedule.has_value()) {
      throw ConfigError("fixed tuning requires a schedule section");
    }
    return config.schedule->with_epsilon(epsilon);
  }
  return tune_best(constants, dim, epsilon, warm).params;
}

double quantile(std::span<const double> values, double prob) {
  if (values.empty()) {
    throw std::invalid_argument("quantile: values must be nonempty");
  }
  if (!(prob >= 0.0 && prob <= 1.0)) {
    throw std::invalid_argument("quantile: prob must lie in [0,1]");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double rank = prob * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(rank);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

ExperimentResult run_experiment(const Config& config) {
  return run_impl(config, /*parallel=*/true);
}

ExperimentResult run_experiment_serial(const Config& config) {
  return run_impl(config, /*parallel=*/false);
}

void write_experiment_outputs(const ExperimentResult& result,
                              const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "trials.csv", std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write trials.csv");
    out << "epsilon,trial,sq_distance\n";
    for (const EpsilonSummary& s : result.per_epsilon) {
      for (std::size_t trial = 0; trial < s.sq_distance.size(); ++trial) {
        out << format_double(s.epsilon) << ',' << trial << ','
            << format_double(s.sq_distance[trial]) << '\n';
      }
    }
  }
  {
    std::ofstream out(dir / "summary.csv", std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write summary.csv");
    out << "epsilon,mean_d,p5,p50,p95,theoretical_d,c,q,p,T,seed\n";
    for (const EpsilonSummary& s : result.per_epsilon) {
      out << format_double(s.epsilon) << ',' << format_double(s.mean) << ','
          << format_double(s.p5) << ',' << format_double(s.p50) << ','
          << format_double(s.p95) << ',' << format_double(s.bound.total())
          << ',' << format_double(s.params.c) << ',' << format_double(s.params.q)
          << ',' << format_double(s.params.p) << ',' << s.rounds << ','
          << result.config.experiment.seed << '\n';
    }
  }
  {
    nlohmann::json manifest;
    manifest["config_hash"] = result.hash;
    manifest["seed"] = result.config.experiment.seed;
    manifest["files"] = {"trials.csv", "summary.csv", "plot_summary.py"};
    manifest["config"] = to_json(result.config);
    std::ofstream out(dir / "manifest.json", std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write manifest.json");
    out << manifest.dump(2) << '\n';
  }
  {
    std::ofstream out(dir / "plot_summary.py", std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write plot_summary.py");
    out << kPlotScript;
  }
}

}  // namespace dpopt
