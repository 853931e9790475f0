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

#ifndef DPOPT_LAPLACE_HPP_
#define DPOPT_LAPLACE_HPP_

#include <cmath>
#include <stdexcept>

#include "dpopt/random.hpp"

namespace dpopt {

// Inverse-CDF transform of a uniform draw into a zero-mean Laplace variate.
// One uniform per scalar keeps every trace reproducible from its seed.
//
// A scale of exactly zero is allowed and produces 0: schedules with fast
// geometric decay eventually underflow to zero scale, and the simulation
// treats that as noiseless rather than failing.
inline double laplace_from_uniform(double u, double scale) {
  if (!(scale >= 0.0)) {
    throw std::invalid_argument("laplace_from_uniform: scale must be >= 0");
  }
  if (!(u > 0.0 && u < 1.0)) {
    throw std::invalid_argument(
        "laplace_from_uniform: u must lie strictly inside (0,1)");
  }
  const double v = u - 0.5;
  const double sign = (v > 0.0) ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
  // log1p keeps precision when |v| is tiny; u is strictly inside (0,1) so the
  // argument stays above -1 and the log is finite.
  const double x = -scale * sign * std::log1p(-2.0 * std::fabs(v));
  return x + 0.0;  // normalize -0.0 so serialized traces never print "-0"
}

inline double laplace_sample(RngStream& rng, double scale) {
  return laplace_from_uniform(rng.next_u01(), scale);
}

// Log of the Laplace density with the given scale at x. Used to evaluate
// likelihood ratios exactly instead of through density quotients that would
// underflow.
inline double laplace_log_density(double scale, double x) {
  if (!(scale > 0.0)) {
    throw std::invalid_argument("laplace_log_density: scale must be > 0");
  }
  return -std::log(2.0 * scale) - std::fabs(x) / scale;
}

}  // namespace dpopt

#endif  // DPOPT_LAPLACE_HPP_
