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

#ifndef DPOPT_EXPERIMENT_HPP_
#define DPOPT_EXPERIMENT_HPP_

#include <filesystem>
#include <span>
#include <vector>

#include "dpopt/config.hpp"
#include "dpopt/tuning.hpp"

namespace dpopt {

// Number of rounds to run when the config leaves it automatic: the first t
// with step size at or below 1e-6, i.e. ceil(1 + log(1e-6/c)/log(q)), clamped
// to [1, max_rounds].
std::int64_t auto_rounds(const ScheduleParams& params, std::int64_t max_rounds);

// Schedule for one sweep point. In fixed mode this is the configured
// schedule with epsilon swapped in. In auto mode it is tuned from a small set
// of deterministic starting points plus the previous sweep point's optimum
// (warm, may be null), keeping the tuned bound monotone along the sweep.
ScheduleParams params_for_epsilon(const Config& config,
                                  const CostConstants& constants, int dim,
                                  double epsilon, const ScheduleParams* warm);

// Empirical quantile with linear interpolation at rank prob*(n-1) of the
// sorted values. prob in [0,1]; values need not be sorted.
double quantile(std::span<const double> values, double prob);

struct EpsilonSummary {
  double epsilon = 0.0;
  ScheduleParams params;
  std::int64_t rounds = 0;
  std::vector<double> sq_distance;  // per trial; non-finite entries flagged
  int flagged = 0;
  double mean = 0.0;
  double p5 = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
  AccuracyBound bound;
};

struct ExperimentResult {
  Config config;
  std::string hash;
  Vector x_star;
  double f_star = 0.0;
  std::vector<EpsilonSummary> per_epsilon;
};

// Monte Carlo sweep over experiment.epsilon_list: for each epsilon, `trials`
// independent runs, each measuring the squared distance between the final
// mean estimate and the true optimum. Trial seeds derive from
// (experiment.seed, epsilon index, trial index), so any single trial can be
// reproduced in isolation.
//
// run_experiment distributes trials across OpenMP threads;
// run_experiment_serial is the plain-loop reference. Both produce identical
// results, which tests assert and the bench target times.
ExperimentResult run_experiment(const Config& config);
ExperimentResult run_experiment_serial(const Config& config);

// trials.csv, summary.csv, manifest.json, and plot_summary.py under dir.
// Existing files are overwritten. All numeric output is shortest round-trip
// formatted, so reruns of the same config produce byte-identical files.
void write_experiment_outputs(const ExperimentResult& result,
                              const std::filesystem::path& dir);

}  // namespace dpopt

#endif  // DPOPT_EXPERIMENT_HPP_
