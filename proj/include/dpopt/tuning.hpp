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

#ifndef DPOPT_TUNING_HPP_
#define DPOPT_TUNING_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "dpopt/cost.hpp"
#include "dpopt/graph.hpp"
#include "dpopt/schedule.hpp"

namespace dpopt {

// Closed-form cap on the limiting squared distance between the running mean
// estimate and the optimum, split into its three sources:
//   init   C1 * exp(-C3 c / (1-q))                     forgetting the start
//   step   C2^2 c^2 / (1-q^2)                          persistent step error
//   noise  8 C2^2 n c^2 p^2 / (eps^2 (p-q)^2 (1-p^2))  injected privacy noise
// The noise share scales like 1/eps^2: the accuracy price of privacy.
struct AccuracyBound {
  double term_init = 0.0;
  double term_step = 0.0;
  double term_noise = 0.0;

  double total() const { return term_init + term_step + term_noise; }
  // Variant with the forgetting term doubled. The derivation of the cap
  // supports the doubled constant end to end, so this is the value safe to
  // compare against measurements.
  double total_conservative() const {
    return 2.0 * term_init + term_step + term_noise;
  }
};

AccuracyBound accuracy_bound(const CostConstants& constants, int dim,
                             const ScheduleParams& params);

// Partial derivatives of the total bound in c and in q, used to verify
// first-order optimality of tuned parameters.
double accuracy_bound_dc(const CostConstants& constants, int dim,
                         const ScheduleParams& params);
double accuracy_bound_dq(const CostConstants& constants, int dim,
                         const ScheduleParams& params);

// Coordinate minimizers of the bound. Each one returns the global minimizer
// of the bound in its own coordinate with the others held fixed.

// Unique stationary point in c of d(c) for fixed (q,p); the bound is
// quasiconvex in c with an interior minimum, found by bisecting the
// derivative.
double solve_c_star(const CostConstants& constants, int dim, double epsilon,
                    double q, double p);

struct QStarResult {
  double q = 0.0;
  bool interior = false;  // false when the minimum sits at the scan boundary
};

// Scans the derivative of the bound in q over (0, p), bisects every sign
// change, and returns the candidate with the lowest bound.
QStarResult solve_q_star(const CostConstants& constants, int dim,
                         double epsilon, double c, double p);

// For fixed q the noise term is minimized at p = q^(1/3), the unique root of
// q (1 - p^2) = p^2 (p - q) in (q, 1); the other terms do not involve p.
double solve_p_star(double q);

// Bisection on the defining equation, kept as an independent cross-check of
// the closed form.
double solve_p_star_numeric(double q);

struct TuningResult {
  ScheduleParams params;
  AccuracyBound bound;
  int passes_used = 0;
  bool converged = false;
  bool q_interior = true;
};

// Cyclic coordinate descent c -> p -> q from the given starting point. Every
// sub-step is a global coordinate minimizer, so the bound never increases
// from pass to pass. Stops early once a full pass improves the bound by less
// than one part in 1e12.
TuningResult tune(const CostConstants& constants, int dim, double epsilon,
                  const ScheduleParams& initial, int max_passes = 64);

// tune() from a fixed fan of starting points (plus an optional warm start,
// usually the optimum of a neighboring epsilon), keeping the best result.
// With a warm start the achieved bound is monotone along an increasing
// epsilon sweep.
TuningResult tune_best(const CostConstants& constants, int dim, double epsilon,
                       const ScheduleParams* warm = nullptr);

// Cap on the worst pairwise distance between agent states after round t,
// driven by the mixing envelope, the step schedule, and the realized
// per-round noise magnitudes (max over agents of ||w_i(s)||, s = 1..t):
//   M1 beta^t + M2 sum_s beta^(t-s) gamma_s + M3 sum_s beta^(t-s+1) w_s
// with M1 = 2 N theta sup_x, M2 = 2 N C2 theta, M3 = 2 N theta.
double convergence_bound(const ConvergenceEnvelope& env,
                         const CostConstants& constants, int agents,
                         const BoxDomain& domain, const ScheduleParams& params,
                         std::span<const double> noise_norms, std::int64_t t);

// All rounds 1..noise_norms.size() at once in linear time via the running
// recurrences of the two sums.
std::vector<double> convergence_bound_series(
    const ConvergenceEnvelope& env, const CostConstants& constants, int agents,
    const BoxDomain& domain, const ScheduleParams& params,
    std::span<const double> noise_norms);

}  // namespace dpopt

#endif  // DPOPT_TUNING_HPP_
