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

#include "dpopt/tuning.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace dpopt {
namespace {

void check_tuning_inputs(const CostConstants& constants, int dim,
                         double epsilon) {
  if (!(constants.diameter > 0.0) || !(constants.gradient_cap > 0.0) ||
      !(constants.convexity > 0.0)) {
    throw std::invalid_argument("tuning: constants must be positive");
  }
  if (dim < 1) throw std::invalid_argument("tuning: dim must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("tuning: epsilon must be > 0");
}

double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw std::invalid_argument("bisect: endpoints do not bracket a root");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval exhausted in doubles
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// d(d)/dc for fixed (q, p).
double bound_dc(const CostConstants& k, int dim, double eps, double c,
                double q, double p) {
  const double b = k.gradient_cap * k.gradient_cap / (1.0 - q * q) +
                   8.0 * k.gradient_cap * k.gradient_cap * dim * p * p /
                       (eps * eps * (p - q) * (p - q) * (1.0 - p * p));
  return -k.diameter * k.convexity / (1.0 - q) *
             std::exp(-k.convexity * c / (1.0 - q)) +
         2.0 * b * c;
}

// d(d)/dq for fixed (c, p).
double bound_dq(const CostConstants& k, int dim, double eps, double c,
                double q, double p) {
  const double omq = 1.0 - q;
  const double omq2 = 1.0 - q * q;
  return -k.diameter * k.convexity * c / (omq * omq) *
             std::exp(-k.convexity * c / omq) +
         2.0 * k.gradient_cap * k.gradient_cap * c * c * q / (omq2 * omq2) +
         16.0 * k.gradient_cap * k.gradient_cap * dim * c * c * p * p /
             (eps * eps * (p - q) * (p - q) * (p - q) * (1.0 - p * p));
}

double bound_at(const CostConstants& k, int dim, double eps, double c,
                double q, double p) {
  return accuracy_bound(k, dim, ScheduleParams(eps, c, q, p)).total();
}

}  // namespace

AccuracyBound accuracy_bound(const CostConstants& constants, int dim,
                             const ScheduleParams& params) {
  check_tuning_inputs(constants, dim, params.epsilon);
  const double c1 = constants.diameter;
  const double c2 = constants.gradient_cap;
  const double c3 = constants.convexity;
  const double c = params.c;
  const double q = params.q;
  const double p = params.p;
  AccuracyBound b;
  b.term_init = c1 * std::exp(-c3 * c / (1.0 - q));
  b.term_step = c2 * c2 * c * c / (1.0 - q * q);
  b.term_noise = 8.0 * c2 * c2 * dim * c * c * p * p /
                 (params.epsilon * params.epsilon * (p - q) * (p - q) *
                  (1.0 - p * p));
  return b;
}

double accuracy_bound_dc(const CostConstants& constants, int dim,
                         const ScheduleParams& params) {
  check_tuning_inputs(constants, dim, params.epsilon);
  return bound_dc(constants, dim, params.epsilon, params.c, params.q, params.p);
}

double accuracy_bound_dq(const CostConstants& constants, int dim,
                         const ScheduleParams& params) {
  check_tuning_inputs(constants, dim, params.epsilon);
  return bound_dq(constants, dim, params.epsilon, params.c, params.q, params.p);
}

double solve_c_star(const CostConstants& constants, int dim, double epsilon,
                    double q, double p) {
  check_tuning_inputs(constants, dim, epsilon);
  if (!(q > 0.0 && q < p && p < 1.0)) {
    throw std::invalid_argument("solve_c_star: need 0 < q < p < 1");
  }
  auto g = [&](double c) { return bound_dc(constants, dim, epsilon, c, q, p); };
  const double lo = 1e-300;
  double hi = 1.0;
  while (g(hi) < 0.0 && hi < 1e12) hi *= 2.0;
  // g(lo) ~ -C1*C3/(1-q) < 0 and g grows without bound, so a root exists.
  return bisect(g, lo, hi);
}

QStarResult solve_q_star(const CostConstants& constants, int dim,
                         double epsilon, double c, double p) {
  check_tuning_inputs(constants, dim, epsilon);
  if (!(c > 0.0)) throw std::invalid_argument("solve_q_star: c must be > 0");
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("solve_q_star: p must lie in (0,1)");
  }
  const double qlo = p * 1e-9;
  const double qhi = p * (1.0 - 1e-9);
  auto h = [&](double q) { return bound_dq(constants, dim, epsilon, c, q, p); };

  std::vector<double> candidates = {qlo, qhi};
  std::vector<double> roots;
  const int grid = 2048;
  double prev_q = qlo;
  double prev_h = h(prev_q);
  for (int i = 1; i <= grid; ++i) {
    const double qi = qlo + (qhi - qlo) * static_cast<double>(i) / grid;
    const double hi_val = h(qi);
    if (prev_h == 0.0) {
      roots.push_back(prev_q);
    } else if (hi_val != 0.0 && (prev_h > 0.0) != (hi_val > 0.0)) {
      roots.push_back(bisect(h, prev_q, qi));
    }
    prev_q = qi;
    prev_h = hi_val;
  }
  candidates.insert(candidates.end(), roots.begin(), roots.end());

  double best_q = candidates.front();
  double best_d = bound_at(constants, dim, epsilon, c, best_q, p);
  for (double q : candidates) {
    const double d = bound_at(constants, dim, epsilon, c, q, p);
    if (d < best_d) {
      best_d = d;
      best_q = q;
    }
  }
  bool interior = false;
  for (double r : roots) {
    if (r == best_q) interior = true;
  }
  return QStarResult{best_q, interior};
}

double solve_p_star(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("solve_p_star: q must lie in (0,1)");
  }
  // cbrt is not guaranteed correctly rounded; one Newton step on p^3 = q
  // repairs the last ulp (and makes exact cube roots exact).
  const double p = std::cbrt(q);
  return p - (p * p * p - q) / (3.0 * p * p);
}

double solve_p_star_numeric(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("solve_p_star_numeric: q must lie in (0,1)");
  }
  auto r = [q](double p) { return q * (1.0 - p * p) - p * p * (p - q); };
  // r(q) = q(1-q^2) > 0 and r(1) = -(1-q) < 0.
  return bisect(r, q, 1.0);
}

TuningResult tune(const CostConstants& constants, int dim, double epsilon,
                  const ScheduleParams& initial, int max_passes) {
  check_tuning_inputs(constants, dim, epsilon);
  if (max_passes < 1) {
    throw std::invalid_argument("tune: max_passes must be >= 1");
  }
  double c = initial.c;
  double q = initial.q;
  double p = initial.p;
  double d = bound_at(constants, dim, epsilon, c, q, p);
  bool q_interior = true;
  bool converged = false;
  int pass = 0;
  while (pass < max_passes) {
    ++pass;
    c = solve_c_star(constants, dim, epsilon, q, p);
    p = solve_p_star(q);
    const QStarResult qs = solve_q_star(constants, dim, epsilon, c, p);
    // The scan could in principle miss a narrow dip; keeping the incumbent q
    // when it is at least as good preserves the never-increases contract.
    if (bound_at(constants, dim, epsilon, c, qs.q, p) <=
        bound_at(constants, dim, epsilon, c, q, p)) {
      q = qs.q;
      q_interior = qs.interior;
    }
    const double d_next = bound_at(constants, dim, epsilon, c, q, p);
    if (d_next > d + 1e-12 * std::max(1.0, d)) {
      throw std::runtime_error("tune: bound increased during a pass");
    }
    const bool settled = d - d_next <= 1e-12 * std::max(1.0, d);
    d = d_next;
    if (settled) {
      converged = true;
      break;
    }
  }
  TuningResult result;
  result.params = ScheduleParams(epsilon, c, q, p);
  result.bound = accuracy_bound(constants, dim, result.params);
  result.passes_used = pass;
  result.converged = converged;
  result.q_interior = q_interior;
  return result;
}

TuningResult tune_best(const CostConstants& constants, int dim, double epsilon,
                       const ScheduleParams* warm) {
  check_tuning_inputs(constants, dim, epsilon);
  bool have_best = false;
  TuningResult best;
  auto consider = [&](const ScheduleParams& start) {
    const TuningResult r = tune(constants, dim, epsilon, start);
    if (!have_best || r.bound.total() < best.bound.total()) {
      best = r;
      have_best = true;
    }
  };
  if (warm != nullptr) consider(warm->with_epsilon(epsilon));
  for (double q0 : {0.3, 0.6, 0.9}) {
    const double p0 = solve_p_star(q0);
    consider(ScheduleParams(epsilon, solve_c_star(constants, dim, epsilon, q0, p0),
                            q0, p0));
  }
  return best;
}

double convergence_bound(const ConvergenceEnvelope& env,
                         const CostConstants& constants, int agents,
                         const BoxDomain& domain, const ScheduleParams& params,
                         std::span<const double> noise_norms, std::int64_t t) {
  if (t < 1 || static_cast<std::size_t>(t) > noise_norms.size()) {
    throw std::invalid_argument(
        "convergence_bound: need 1 <= t <= noise_norms.size()");
  }
  std::vector<double> steps(static_cast<std::size_t>(t));
  for (std::int64_t s = 1; s <= t; ++s) {
    steps[static_cast<std::size_t>(s - 1)] = step_size(params, s);
  }
  const double m1 = 2.0 * agents * env.theta * domain.max_point_norm();
  const double m2 = 2.0 * agents * constants.gradient_cap * env.theta;
  const double m3 = 2.0 * agents * env.theta;
  return m1 * std::pow(env.beta, static_cast<double>(t)) +
         m2 * geometric_tail(env.beta, steps) +
         m3 * env.beta *
             geometric_tail(env.beta, noise_norms.subspan(
                                          0, static_cast<std::size_t>(t)));
}

std::vector<double> convergence_bound_series(
    const ConvergenceEnvelope& env, const CostConstants& constants, int agents,
    const BoxDomain& domain, const ScheduleParams& params,
    std::span<const double> noise_norms) {
  const double m1 = 2.0 * agents * env.theta * domain.max_point_norm();
  const double m2 = 2.0 * agents * constants.gradient_cap * env.theta;
  const double m3 = 2.0 * agents * env.theta;
  std::vector<double> bounds;
  bounds.reserve(noise_norms.size());
  double beta_pow = 1.0;
  double step_sum = 0.0;   // sum_s beta^(t-s) gamma_s
  double noise_sum = 0.0;  // sum_s beta^(t-s+1) w_s
  for (std::size_t s = 0; s < noise_norms.size(); ++s) {
    const std::int64_t t = static_cast<std::int64_t>(s) + 1;
    beta_pow *= env.beta;
    step_sum = env.beta * step_sum + step_size(params, t);
    noise_sum = env.beta * (noise_sum + noise_norms[s]);
    bounds.push_back(m1 * beta_pow + m2 * step_sum + m3 * noise_sum);
  }
  return bounds;
}

}  // namespace dpopt
