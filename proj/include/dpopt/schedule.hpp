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

#ifndef DPOPT_SCHEDULE_HPP_
#define DPOPT_SCHEDULE_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace dpopt {

// Geometric step and noise schedules:
//   step size    gamma_t = c * q^(t-1)
//   noise scale  M_t     = 2 * C2 * sqrt(n) * (c*p / (epsilon*(p-q))) * p^(t-1)
// The ordering 0 < q < p < 1 makes the per-round privacy-loss ratios a
// geometric series summing to exactly epsilon; p <= q would make the budget
// diverge, so it is rejected at construction.
struct ScheduleParams {
  double epsilon = 0.0;
  double c = 0.0;
  double q = 0.0;
  double p = 0.0;

  ScheduleParams() = default;
  ScheduleParams(double epsilon_in, double c_in, double q_in, double p_in)
      : epsilon(epsilon_in), c(c_in), q(q_in), p(p_in) {
    if (!(epsilon > 0.0)) {
      throw std::invalid_argument("ScheduleParams: epsilon must be > 0");
    }
    if (!(c > 0.0)) {
      throw std::invalid_argument("ScheduleParams: c must be > 0");
    }
    if (!(q > 0.0 && q < p && p < 1.0)) {
      throw std::invalid_argument(
          "ScheduleParams: need 0 < q < p < 1 (otherwise the privacy budget "
          "diverges)");
    }
  }

  ScheduleParams with_epsilon(double eps) const {
    return ScheduleParams(eps, c, q, p);
  }
};

inline double step_size(const ScheduleParams& params, std::int64_t t) {
  if (t < 1) throw std::invalid_argument("step_size: round must be >= 1");
  return params.c * std::pow(params.q, static_cast<double>(t - 1));
}

// Rounds far into the schedule underflow to subnormals and finally to zero;
// anything below 1e-300 is treated as exactly zero noise rather than feeding
// subnormal scales into samplers and densities.
inline double noise_scale(const ScheduleParams& params, std::int64_t t,
                          double gradient_cap, int dim) {
  if (t < 1) throw std::invalid_argument("noise_scale: round must be >= 1");
  if (!(gradient_cap > 0.0)) {
    throw std::invalid_argument("noise_scale: gradient cap must be > 0");
  }
  if (dim < 1) throw std::invalid_argument("noise_scale: dim must be >= 1");
  const double lead = 2.0 * gradient_cap * std::sqrt(static_cast<double>(dim)) *
                      params.c * params.p / (params.epsilon * (params.p - params.q));
  const double m = lead * std::pow(params.p, static_cast<double>(t - 1));
  return m < 1e-300 ? 0.0 : m;
}

}  // namespace dpopt

#endif  // DPOPT_SCHEDULE_HPP_
