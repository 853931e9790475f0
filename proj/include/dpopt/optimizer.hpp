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

#ifndef DPOPT_OPTIMIZER_HPP_
#define DPOPT_OPTIMIZER_HPP_

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dpopt/problem.hpp"
#include "dpopt/schedule.hpp"

namespace dpopt {

// States are N x n matrices: one row per agent.

struct InitPolicy {
  enum class Kind { kAnchors, kFixedPoint, kUniform };
  Kind kind = Kind::kAnchors;
  Vector point;

  static InitPolicy anchors() { return InitPolicy{}; }
  static InitPolicy fixed(Vector point) {
    return InitPolicy{Kind::kFixedPoint, std::move(point)};
  }
  static InitPolicy uniform() { return InitPolicy{Kind::kUniform, Vector()}; }
};

Matrix initial_states(const ProblemInstance& problem, const InitPolicy& init,
                      std::uint64_t seed);

// Everything one round produces. x_prev is the state entering the round,
// w the noise perturbations, y = x_prev + w the published values,
// z the mixed values, x_next the projected gradient update.
struct RoundRecord {
  std::int64_t t = 0;
  Matrix x_prev;
  Matrix w;
  Matrix y;
  Matrix z;
  Matrix x_next;
};

struct ExecutionTrace {
  ScheduleParams params;
  std::uint64_t seed = 0;
  std::vector<RoundRecord> records;

  std::int64_t rounds() const { return static_cast<std::int64_t>(records.size()); }
  const RoundRecord& at(std::int64_t t) const;
  Matrix initial_states() const;
  // Published values y(1..T): the only data an observer of the protocol sees.
  std::vector<Matrix> observations() const;
};

// One round of the protocol. The noise for (agent i, round t, component k)
// comes from its own counter-based stream under noise_seed, so rounds can be
// recomputed independently and in parallel with identical results.
RoundRecord step(const ProblemInstance& problem, const ScheduleParams& params,
                 const Matrix& x_prev, std::int64_t t, std::uint64_t noise_seed);

ExecutionTrace run(const ProblemInstance& problem, const ScheduleParams& params,
                   std::int64_t rounds, std::uint64_t seed,
                   const InitPolicy& init = InitPolicy::anchors());

// Same as run but starting from an explicit state matrix (one row per agent).
ExecutionTrace run_from(const ProblemInstance& problem,
                        const ScheduleParams& params, std::int64_t rounds,
                        std::uint64_t seed, const Matrix& x0);

// Final states only, without materializing per-round records. Identical to
// run(...).records.back().x_next; Monte Carlo sweeps use this to skip the
// trace bookkeeping.
Matrix run_final(const ProblemInstance& problem, const ScheduleParams& params,
                 std::int64_t rounds, std::uint64_t seed,
                 const InitPolicy& init = InitPolicy::anchors());

// Reconstructs the full state sequence x(0..T) from the published values and
// the initial state alone. Deterministic: no randomness is consumed. This is
// exactly the computation an adversary can run, and tests pin it against the
// forward simulation.
std::vector<Matrix> replay(const ProblemInstance& problem,
                           const ScheduleParams& params,
                           const std::vector<Matrix>& observations,
                           const Matrix& x0);

// Recomputes every recorded round from its inputs and throws
// std::runtime_error naming round and field on the first mismatch beyond tol.
void validate_trace(const ProblemInstance& problem, const ExecutionTrace& trace,
                    double tol = 1e-12);

double disagreement(const Matrix& states);
Vector mean_estimate(const Matrix& states);
double disagreement(const ExecutionTrace& trace, std::int64_t t);
Vector mean_estimate(const ExecutionTrace& trace, std::int64_t t);

// max_i ||w_i(s)||_2 for s = 1..T, the per-round noise magnitudes that the
// disagreement envelope consumes.
std::vector<double> max_noise_norms(const ExecutionTrace& trace);

// CSV with header round,agent,component,x,w,y,z. Rows for round 0 carry the
// initial state with w, y, z zero; rows for round t >= 1 carry the values of
// that round with x the post-update state x(t). Doubles are written in
// shortest round-trip form, so output is byte-stable across platforms.
void write_trace_csv(const ExecutionTrace& trace, std::ostream& out);

struct TraceData {
  Matrix x0;
  std::vector<Matrix> x;  // x(1..T)
  std::vector<Matrix> w;
  std::vector<Matrix> y;
  std::vector<Matrix> z;
};

TraceData read_trace_csv(std::istream& in);

}  // namespace dpopt

#endif  // DPOPT_OPTIMIZER_HPP_
