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

#ifndef DPOPT_PRIVACY_HPP_
#define DPOPT_PRIVACY_HPP_

#include <cstdint>
#include <vector>

#include "dpopt/optimizer.hpp"
#include "dpopt/problem.hpp"
#include "dpopt/schedule.hpp"

namespace dpopt {

// Per-round L1 sensitivity cap of the protocol state to a single-agent cost
// swap: delta(t) = 2 * gradient_cap * sqrt(dim) * gamma_t. A cost change only
// enters the state through one gradient evaluation scaled by gamma_t, so the
// cap decays with the step size.
std::vector<double> sensitivity_bound(const CostConstants& constants, int dim,
                                      const ScheduleParams& params,
                                      std::int64_t rounds);

struct BudgetReport {
  std::vector<double> per_round_ratio;  // delta(t) / M_t
  std::vector<double> partial_sums;
  double infinite_sum = 0.0;  // closed-form limit of the full series
  double epsilon_target = 0.0;
  bool pass = false;  // no partial sum exceeds the target (up to rounding)
};

// Ratio of sensitivity cap to noise scale per round. With the geometric
// schedules the ratio is epsilon*(p-q)/p * (q/p)^(t-1), a geometric series
// whose limit is exactly epsilon: the whole infinite protocol spends epsilon,
// no more.
BudgetReport budget(const CostConstants& constants, int dim,
                    const ScheduleParams& params, std::int64_t rounds);

// Realized L1 state gap per round: replays the same observations under both
// instances of the pair and records ||x(t) - x'(t)||_1 summed over agents.
// Every value must stay within the analytic cap; tests enforce that.
std::vector<double> measured_sensitivity(const AdjacentPair& pair,
                                         const ScheduleParams& params,
                                         const std::vector<Matrix>& observations,
                                         const Matrix& x0);

// Exact log-likelihood of the observations under the given instance: the
// noise densities evaluated at y(t) - x(t-1) where x(.) is the replayed state
// sequence. Working in logs keeps long products finite.
double log_likelihood(const ProblemInstance& problem,
                      const ScheduleParams& params,
                      const std::vector<Matrix>& observations, const Matrix& x0);

struct RatioCheckResult {
  double worst_abs_log_ratio = 0.0;
  int trials = 0;
  double epsilon_target = 0.0;
  bool pass = false;
};

// Monte Carlo differential privacy check: simulates the protocol under the
// base instance, evaluates the likelihood of the published values under both
// instances of the pair, and tracks the worst absolute log ratio. The
// guarantee promises it never exceeds epsilon. Trials run in parallel when
// OpenMP is enabled; the result does not depend on the thread count.
RatioCheckResult dp_ratio_check(const AdjacentPair& pair,
                                const ScheduleParams& params,
                                std::int64_t rounds, int trials,
                                std::uint64_t seed);

}  // namespace dpopt

#endif  // DPOPT_PRIVACY_HPP_
