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

#include "dpopt/problem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace dpopt {
namespace {

constexpr std::uint64_t kAnchorTag = 0x616e6368u;
constexpr std::uint64_t kAuditSeed = 0x70726f62u;
constexpr int kAuditSamples = 64;

}  // namespace

ProblemInstance::ProblemInstance(
    BoxDomain domain, std::vector<std::unique_ptr<CostFunction>> costs,
    std::shared_ptr<const GraphSchedule> graph, CostConstants constants)
    : domain_(std::move(domain)),
      costs_(std::move(costs)),
      graph_(std::move(graph)),
      constants_(constants) {
  if (costs_.size() < 2) {
    throw std::invalid_argument("ProblemInstance: need at least 2 agents");
  }
  if (!graph_) {
    throw std::invalid_argument("ProblemInstance: graph schedule must be set");
  }
  if (graph_->agents() != static_cast<int>(costs_.size())) {
    throw std::invalid_argument(
        "ProblemInstance: graph agent count differs from cost count");
  }
  if (!(constants_.diameter > 0.0) || !(constants_.gradient_cap > 0.0) ||
      !(constants_.convexity > 0.0)) {
    throw std::invalid_argument("ProblemInstance: constants must be positive");
  }
  for (std::size_t i = 0; i < costs_.size(); ++i) {
    if (!costs_[i]) {
      throw std::invalid_argument("ProblemInstance: cost " + std::to_string(i) +
                                  " is null");
    }
    if (costs_[i]->dim() != domain_.dim()) {
      throw std::invalid_argument("ProblemInstance: cost " + std::to_string(i) +
                                  " dimension differs from domain");
    }
    audit_constants(domain_, *costs_[i], constants_, kAuditSamples,
                    kAuditSeed + i);
  }
}

ProblemInstance::ProblemInstance(const ProblemInstance& other)
    : domain_(other.domain_), graph_(other.graph_), constants_(other.constants_) {
  costs_.reserve(other.costs_.size());
  for (const auto& c : other.costs_) costs_.push_back(c->clone());
}

const CostFunction& ProblemInstance::cost(int agent) const {
  if (agent < 0 || agent >= agents()) {
    throw std::invalid_argument("ProblemInstance::cost: agent out of range");
  }
  return *costs_[static_cast<std::size_t>(agent)];
}

const QuadraticCost* ProblemInstance::quadratic(int agent) const {
  return dynamic_cast<const QuadraticCost*>(&cost(agent));
}

bool ProblemInstance::all_quadratic() const {
  for (int i = 0; i < agents(); ++i) {
    if (quadratic(i) == nullptr) return false;
  }
  return true;
}

ProblemInstance ProblemInstance::with_cost(
    int agent, std::unique_ptr<CostFunction> cost) const {
  if (agent < 0 || agent >= agents()) {
    throw std::invalid_argument("ProblemInstance::with_cost: agent out of range");
  }
  if (!cost) {
    throw std::invalid_argument("ProblemInstance::with_cost: cost is null");
  }
  std::vector<std::unique_ptr<CostFunction>> costs;
  costs.reserve(costs_.size());
  for (int i = 0; i < agents(); ++i) {
    costs.push_back(i == agent ? std::move(cost)
                               : costs_[static_cast<std::size_t>(i)]->clone());
  }
  return ProblemInstance(domain_, std::move(costs), graph_, constants_);
}

AdjacentPair make_adjacent(std::shared_ptr<const ProblemInstance> base,
                           int agent, const Vector& new_anchor) {
  if (!base) {
    throw std::invalid_argument("make_adjacent: base instance must be set");
  }
  const QuadraticCost* current = base->quadratic(agent);
  if (current == nullptr) {
    throw std::invalid_argument(
        "make_adjacent: agent cost must be the quadratic distance form");
  }
  if (!base->domain().contains(new_anchor)) {
    throw std::invalid_argument("make_adjacent: new anchor lies outside the domain");
  }
  if ((new_anchor - current->anchor()).norm() == 0.0) {
    throw std::invalid_argument("make_adjacent: new anchor equals the current one");
  }
  auto variant = std::make_shared<ProblemInstance>(
      base->with_cost(agent, std::make_unique<QuadraticCost>(new_anchor)));
  return AdjacentPair{std::move(base), std::move(variant), agent};
}

ProblemInstance make_rendezvous(int agents, const BoxDomain& domain,
                                std::uint64_t anchor_seed,
                                std::shared_ptr<const GraphSchedule> graph) {
  if (agents < 2) {
    throw std::invalid_argument("make_rendezvous: need at least 2 agents");
  }
  std::vector<std::unique_ptr<CostFunction>> costs;
  costs.reserve(static_cast<std::size_t>(agents));
  for (int i = 0; i < agents; ++i) {
    RngStream rng =
        stream_for(anchor_seed, {kAnchorTag, static_cast<std::uint64_t>(i)});
    costs.push_back(std::make_unique<QuadraticCost>(domain.sample(rng)));
  }
  const double c1 = domain.diameter();
  return ProblemInstance(domain, std::move(costs), std::move(graph),
                         CostConstants{c1, 2.0 * c1, 2.0});
}

ProblemInstance make_rendezvous_with_anchors(
    const BoxDomain& domain, const std::vector<Vector>& anchors,
    std::shared_ptr<const GraphSchedule> graph) {
  if (anchors.size() < 2) {
    throw std::invalid_argument(
        "make_rendezvous_with_anchors: need at least 2 anchors");
  }
  std::vector<std::unique_ptr<CostFunction>> costs;
  costs.reserve(anchors.size());
  for (const Vector& a : anchors) {
    if (!domain.contains(a)) {
      throw std::invalid_argument(
          "make_rendezvous_with_anchors: anchor lies outside the domain");
    }
    costs.push_back(std::make_unique<QuadraticCost>(a));
  }
  const double c1 = domain.diameter();
  return ProblemInstance(domain, std::move(costs), std::move(graph),
                         CostConstants{c1, 2.0 * c1, 2.0});
}

OptimumResult global_optimum(const ProblemInstance& problem) {
  const int n_agents = problem.agents();
  if (problem.all_quadratic()) {
    // The summed cost is N ||x||^2 - 2 x . sum(a_i) + const, minimized over
    // the box by clamping the unconstrained minimizer, the anchor centroid,
    // because the objective separates per coordinate.
    Vector centroid = Vector::Zero(problem.dim());
    for (int i = 0; i < n_agents; ++i) {
      centroid += problem.quadratic(i)->anchor();
    }
    centroid /= static_cast<double>(n_agents);
    Vector x_star = problem.domain().project(centroid);
    double f_star = 0.0;
    for (int i = 0; i < n_agents; ++i) f_star += problem.cost(i).value(x_star);
    return OptimumResult{std::move(x_star), f_star, true};
  }

  // Projected gradient descent with adaptive step on the summed cost.
  auto total_value = [&](const Vector& x) {
    double v = 0.0;
    for (int i = 0; i < n_agents; ++i) v += problem.cost(i).value(x);
    return v;
  };
  auto total_gradient = [&](const Vector& x) {
    Vector g = Vector::Zero(problem.dim());
    for (int i = 0; i < n_agents; ++i) g += problem.cost(i).gradient(x);
    return g;
  };
  Vector x = problem.domain().project(
      0.5 * (problem.domain().lower() + problem.domain().upper()));
  double fx = total_value(x);
  double step = problem.constants().diameter /
                (n_agents * problem.constants().gradient_cap);
  const double tol = 1e-12 * (1.0 + std::fabs(fx));
  for (int iter = 0; iter < 100000; ++iter) {
    const Vector g = total_gradient(x);
    Vector x_next = problem.domain().project(x - step * g);
    double f_next = total_value(x_next);
    int halvings = 0;
    while (f_next > fx && halvings < 60) {
      step *= 0.5;
      x_next = problem.domain().project(x - step * g);
      f_next = total_value(x_next);
      ++halvings;
    }
    const double moved = (x_next - x).norm();
    x = std::move(x_next);
    const double improved = fx - f_next;
    fx = f_next;
    if (halvings == 0) step *= 1.2;
    if (moved < 1e-14 * (1.0 + x.norm()) && improved < tol) break;
  }
  return OptimumResult{std::move(x), fx, false};
}

}  // namespace dpopt
