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

// Times the Monte Carlo sweep with the OpenMP trial loop against the serial
// reference and reports the speedup. Also sanity-checks that both runners
// produce identical numbers before timing anything.

#include <chrono>
#include <cstdio>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dpopt/experiment.hpp"

namespace {

dpopt::Config bench_config() {
  dpopt::Config config;
  config.problem.dim = 2;
  config.problem.agents = 5;
  config.problem.lower = dpopt::Vector::Constant(2, -1.0);
  config.problem.upper = dpopt::Vector::Constant(2, 1.0);
  config.problem.anchor_seed = 21;
  config.graph.family = dpopt::GraphFamily::kRing;
  config.graph.seed = 5;
  config.schedule = dpopt::ScheduleParams(1.0, 0.02, 0.5, 0.8);
  config.experiment.epsilon_list = {0.5, 1.0};
  config.experiment.trials = 1500;
  config.experiment.rounds = 400;
  config.experiment.tune_auto = false;
  config.experiment.seed = 99;
  return config;
}

template <typename F>
double time_seconds(F&& body) {
  const auto start = std::chrono::steady_clock::now();
  body();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

}  // namespace

int main() {
  const dpopt::Config config = bench_config();

  const dpopt::ExperimentResult serial = dpopt::run_experiment_serial(config);
  const dpopt::ExperimentResult parallel = dpopt::run_experiment(config);
  for (std::size_t e = 0; e < serial.per_epsilon.size(); ++e) {
    for (std::size_t t = 0; t < serial.per_epsilon[e].sq_distance.size(); ++t) {
      if (serial.per_epsilon[e].sq_distance[t] !=
          parallel.per_epsilon[e].sq_distance[t]) {
        std::fprintf(stderr, "mismatch at epsilon %zu trial %zu\n", e, t);
        return 1;
      }
    }
  }

  const double t_serial =
      time_seconds([&] { (void)dpopt::run_experiment_serial(config); });
  const double t_parallel =
      time_seconds([&] { (void)dpopt::run_experiment(config); });

  int threads = 1;
#ifdef _OPENMP
#pragma omp parallel
  {
#pragma omp single
    threads = omp_get_num_threads();
  }
#endif

  std::printf("trials            : %d x %zu epsilon values\n",
              config.experiment.trials, config.experiment.epsilon_list.size());
  std::printf("rounds per trial  : %lld\n",
              static_cast<long long>(config.experiment.rounds));
  std::printf("serial            : %.3f s\n", t_serial);
  std::printf("parallel (%2d thr) : %.3f s\n", threads, t_parallel);
  std::printf("speedup           : %.2fx\n", t_serial / t_parallel);
  return 0;
}
