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

#include "dpopt/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dpopt/laplace.hpp"

namespace dpopt {
namespace {

constexpr std::uint64_t kRatioTrialTag = 0x72746f74u;

void check_pair(const AdjacentPair& pair) {
  if (!pair.base || !pair.variant) {
    throw std::invalid_argument("adjacent pair: both instances must be set");
  }
  if (pair.base->agents() != pair.variant->agents() ||
      pair.base->dim() != pair.variant->dim()) {
    throw std::invalid_argument("adjacent pair: instance shapes differ");
  }
  if (pair.changed_agent < 0 || pair.changed_agent >= pair.base->agents()) {
    throw std::invalid_argument("adjacent pair: changed agent out of range");
  }
}

}  // namespace

std::vector<double> sensitivity_bound(const CostConstants& constants, int dim,
                                      const ScheduleParams& params,
                                      std::int64_t rounds) {
  if (rounds < 1) {
    throw std::invalid_argument("sensitivity_bound: rounds must be >= 1");
  }
  if (dim < 1) {
    throw std::invalid_argument("sensitivity_bound: dim must be >= 1");
  }
  std::vector<double> delta(static_cast<std::size_t>(rounds));
  const double lead =
      2.0 * constants.gradient_cap * std::sqrt(static_cast<double>(dim));
  for (std::int64_t t = 1; t <= rounds; ++t) {
    delta[static_cast<std::size_t>(t - 1)] = lead * step_size(params, t);
  }
  return delta;
}

BudgetReport budget(const CostConstants& constants, int dim,
                    const ScheduleParams& params, std::int64_t rounds) {
  const std::vector<double> delta =
      sensitivity_bound(constants, dim, params, rounds);
  BudgetReport report;
  report.epsilon_target = params.epsilon;
  report.per_round_ratio.reserve(delta.size());
  report.partial_sums.reserve(delta.size());
  double acc = 0.0;
  bool pass = true;
  for (std::int64_t t = 1; t <= rounds; ++t) {
    // delta(t)/M_t with both sides in closed form; dividing the sampled
    // values would hit 0/0 once the noise scale underflows.
    const double ratio = params.epsilon * (params.p - params.q) / params.p *
                         std::pow(params.q / params.p, static_cast<double>(t - 1));
    acc += ratio;
    report.per_round_ratio.push_back(ratio);
    report.partial_sums.push_back(acc);
    if (acc > params.epsilon * (1.0 + 1e-9)) pass = false;
  }
  // Geometric series with ratio q/p < 1: the limit telescopes to epsilon.
  report.infinite_sum = params.epsilon * (params.p - params.q) / params.p /
                        (1.0 - params.q / params.p);
  report.pass = pass;
  return report;
}

std::vector<double> measured_sensitivity(const AdjacentPair& pair,
                                         const ScheduleParams& params,
                                         const std::vector<Matrix>& observations,
                                         const Matrix& x0) {
  check_pair(pair);
  const std::vector<Matrix> base_states =
      replay(*pair.base, params, observations, x0);
  const std::vector<Matrix> variant_states =
      replay(*pair.variant, params, observations, x0);
  std::vector<double> gaps;
  gaps.reserve(observations.size());
  for (std::size_t t = 1; t < base_states.size(); ++t) {
    gaps.push_back((base_states[t] - variant_states[t]).cwiseAbs().sum());
  }
  return gaps;
}

double log_likelihood(const ProblemInstance& problem,
                      const ScheduleParams& params,
                      const std::vector<Matrix>& observations,
                      const Matrix& x0) {
  if (observations.empty()) {
    throw std::invalid_argument("log_likelihood: need at least one observation");
  }
  const std::vector<Matrix> states = replay(problem, params, observations, x0);
  double acc = 0.0;
  for (std::size_t s = 0; s < observations.size(); ++s) {
    const std::int64_t t = static_cast<std::int64_t>(s) + 1;
    const double scale =
        noise_scale(params, t, problem.constants().gradient_cap, problem.dim());
    if (!(scale > 0.0)) {
      throw std::invalid_argument(
          "log_likelihood: noise scale underflowed to zero at round " +
          std::to_string(t) + "; shorten the horizon");
    }
    const Matrix residual = observations[s] - states[s];
    for (Eigen::Index i = 0; i < residual.rows(); ++i) {
      for (Eigen::Index k = 0; k < residual.cols(); ++k) {
        acc += laplace_log_density(scale, residual(i, k));
      }
    }
  }
  return acc;
}

RatioCheckResult dp_ratio_check(const AdjacentPair& pair,
                                const ScheduleParams& params,
                                std::int64_t rounds, int trials,
                                std::uint64_t seed) {
  check_pair(pair);
  if (trials < 1) {
    throw std::invalid_argument("dp_ratio_check: trials must be >= 1");
  }
  // Both hypotheses share the initial state; the guarantee is conditioned on
  // that, and it makes the round-1 densities cancel in the ratio.
  const Matrix x0 =
      initial_states(*pair.base, InitPolicy::anchors(), /*seed=*/0);

  std::vector<double> ratios(static_cast<std::size_t>(trials), 0.0);
#pragma omp parallel for schedule(dynamic)
  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t trial_seed =
        stream_for(seed, {kRatioTrialTag, static_cast<std::uint64_t>(trial)})
            .key();
    const ExecutionTrace trace =
        run_from(*pair.base, params, rounds, trial_seed, x0);
    const std::vector<Matrix> obs = trace.observations();
    const double ll_base = log_likelihood(*pair.base, params, obs, x0);
    const double ll_variant = log_likelihood(*pair.variant, params, obs, x0);
    ratios[static_cast<std::size_t>(trial)] = std::fabs(ll_base - ll_variant);
  }

  RatioCheckResult result;
  result.trials = trials;
  result.epsilon_target = params.epsilon;
  result.worst_abs_log_ratio =
      *std::max_element(ratios.begin(), ratios.end());
  result.pass = result.worst_abs_log_ratio <= params.epsilon;
  return result;
}

}  // namespace dpopt
