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

#ifndef DPOPT_GRAPH_HPP_
#define DPOPT_GRAPH_HPP_

#include <cstdint>
#include <string>

#include "dpopt/geometry.hpp"

namespace dpopt {

enum class GraphFamily { kComplete, kRing, kRandomConnected };

GraphFamily graph_family_from_string(const std::string& name);
std::string to_string(GraphFamily family);

// Deterministic source of one mixing matrix per round. Matrices use
// Metropolis weights, so they are symmetric, doubly stochastic, and have all
// positive entries bounded below by the certified floor eta().
//
// complete and ring are time-invariant. random_connected redraws the topology
// every round: a uniform spanning tree plus each remaining edge independently
// with extra_edge_probability. The draw for round t depends only on
// (seed, t), so schedules are stateless and random access is cheap.
class GraphSchedule {
 public:
  GraphSchedule(GraphFamily family, int agents, std::uint64_t seed,
                double extra_edge_probability = 0.3);

  int agents() const { return agents_; }
  GraphFamily family() const { return family_; }
  std::uint64_t seed() const { return seed_; }
  double extra_edge_probability() const { return extra_edge_probability_; }

  // Closed-form lower bound on every positive entry of every matrix the
  // schedule can emit. Metropolis weights on a connected graph over N agents
  // are at least 1/N, and the ring never puts more than two neighbors on a
  // node, which improves the floor to 1/3.
  double eta() const;

  Matrix matrix_at(std::int64_t round) const;

 private:
  GraphFamily family_;
  int agents_;
  std::uint64_t seed_;
  double extra_edge_probability_;
};

// Contraction constants of the averaging dynamics over N agents with entry
// floor eta:
//   beta  = 1 - eta / (4 N^2)
//   theta = (1 - eta / (4 N^2))^(-2)
// Every entry of the round-(s+1)..k product then satisfies
//   |Phi(k,s)_ij - 1/N| <= theta * beta^(k-s).
struct ConvergenceEnvelope {
  double theta = 0.0;
  double beta = 0.0;
};

ConvergenceEnvelope envelope(int agents, double eta);

// Checks one mixing matrix: entries nonnegative, rows and columns sum to one
// within tol, positive entries and the diagonal at or above eta (when
// eta > 0), and the positive off-diagonal pattern connected. Throws
// std::invalid_argument naming the first violated property.
void validate_weight_matrix(const Matrix& a, double eta, double tol = 1e-12);

// Runs validate_weight_matrix on rounds 1..horizon and returns the smallest
// positive entry seen, a certified eta for that horizon. Error messages name
// the offending round.
double certify_eta(const GraphSchedule& schedule, std::int64_t horizon,
                   double tol = 1e-12);

// Product of the mixing matrices for rounds s+1..k, applied in round order
// (later rounds multiply from the left). k == s gives the identity.
Matrix transfer_matrix(const GraphSchedule& schedule, std::int64_t s,
                       std::int64_t k);

}  // namespace dpopt

#endif  // DPOPT_GRAPH_HPP_
