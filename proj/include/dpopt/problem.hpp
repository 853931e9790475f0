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

#ifndef DPOPT_PROBLEM_HPP_
#define DPOPT_PROBLEM_HPP_

#include <memory>
#include <vector>

#include "dpopt/cost.hpp"
#include "dpopt/geometry.hpp"
#include "dpopt/graph.hpp"

namespace dpopt {

// One multi-agent optimization instance: a shared box domain, one cost per
// agent, the mixing-matrix schedule, and the family regularity constants.
// Immutable after construction; derive variants with with_cost.
class ProblemInstance {
 public:
  ProblemInstance(BoxDomain domain,
                  std::vector<std::unique_ptr<CostFunction>> costs,
                  std::shared_ptr<const GraphSchedule> graph,
                  CostConstants constants);

  ProblemInstance(const ProblemInstance& other);
  ProblemInstance& operator=(const ProblemInstance&) = delete;

  int agents() const { return static_cast<int>(costs_.size()); }
  int dim() const { return domain_.dim(); }
  const BoxDomain& domain() const { return domain_; }
  const CostFunction& cost(int agent) const;
  const GraphSchedule& graph() const { return *graph_; }
  std::shared_ptr<const GraphSchedule> graph_ptr() const { return graph_; }
  const CostConstants& constants() const { return constants_; }

  // nullptr when the agent's cost is not the quadratic distance form.
  const QuadraticCost* quadratic(int agent) const;
  bool all_quadratic() const;

  // Copy of this instance with one agent's cost replaced. The replacement
  // must match the dimension and satisfy the family constants.
  ProblemInstance with_cost(int agent,
                            std::unique_ptr<CostFunction> cost) const;

 private:
  BoxDomain domain_;
  std::vector<std::unique_ptr<CostFunction>> costs_;
  std::shared_ptr<const GraphSchedule> graph_;
  CostConstants constants_;
};

// Two instances differing in exactly one agent's cost. This is the adjacency
// relation the privacy guarantees quantify over.
struct AdjacentPair {
  std::shared_ptr<const ProblemInstance> base;
  std::shared_ptr<const ProblemInstance> variant;
  int changed_agent = -1;
};

// Variant of `base` where one agent's quadratic anchor moves to new_anchor.
// The anchor must lie in the domain and differ from the current one.
AdjacentPair make_adjacent(std::shared_ptr<const ProblemInstance> base,
                           int agent, const Vector& new_anchor);

// Quadratic rendezvous family: agent i pays the squared distance to an anchor
// drawn uniformly from the domain under anchor_seed. Constants come in closed
// form: diameter of the box, gradient cap twice that, convexity modulus 2.
ProblemInstance make_rendezvous(int agents, const BoxDomain& domain,
                                std::uint64_t anchor_seed,
                                std::shared_ptr<const GraphSchedule> graph);

ProblemInstance make_rendezvous_with_anchors(
    const BoxDomain& domain, const std::vector<Vector>& anchors,
    std::shared_ptr<const GraphSchedule> graph);

struct OptimumResult {
  Vector x_star;
  double f_star = 0.0;
  // true when the optimizer below could certify the first-order condition
  // exactly (quadratic costs over a box); false when it fell back to
  // projected gradient iteration.
  bool exact = false;
};

// Minimizer of the summed cost over the domain. For all-quadratic instances
// this is the box projection of the anchor centroid. Otherwise runs projected
// gradient descent to first-order stationarity.
OptimumResult global_optimum(const ProblemInstance& problem);

}  // namespace dpopt

#endif  // DPOPT_PROBLEM_HPP_
