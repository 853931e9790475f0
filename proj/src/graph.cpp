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

#include "dpopt/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dpopt {
namespace {

constexpr std::uint64_t kGraphTag = 0x67726170u;  // draw domain for topologies

// Adjacency of a uniform random labeled tree, from the bijection between
// trees on N nodes and integer sequences of length N-2 over [0, N). The
// decode connects the smallest current leaf to each sequence element in turn.
std::vector<std::vector<bool>> random_tree(int n, RngStream& rng) {
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  auto connect = [&adj](int u, int v) {
    adj[u][v] = true;
    adj[v][u] = true;
  };
  if (n == 2) {
    connect(0, 1);
    return adj;
  }
  std::vector<int> seq(n - 2);
  for (int& v : seq) {
    v = std::min(n - 1, static_cast<int>(rng.next_u01() * n));
  }
  std::vector<int> degree(n, 1);
  for (int v : seq) ++degree[v];
  for (int v : seq) {
    for (int u = 0; u < n; ++u) {
      if (degree[u] == 1) {
        connect(u, v);
        --degree[u];
        --degree[v];
        break;
      }
    }
  }
  int first = -1;
  for (int u = 0; u < n; ++u) {
    if (degree[u] == 1) {
      if (first < 0) {
        first = u;
      } else {
        connect(first, u);
        break;
      }
    }
  }
  return adj;
}

Matrix metropolis_weights(const std::vector<std::vector<bool>>& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> degree(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (adj[i][j]) ++degree[i];
    }
  }
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != i && adj[i][j]) {
        a(i, j) = 1.0 / (1.0 + std::max(degree[i], degree[j]));
        off += a(i, j);
      }
    }
    a(i, i) = 1.0 - off;
  }
  return a;
}

}  // namespace

GraphFamily graph_family_from_string(const std::string& name) {
  if (name == "complete") return GraphFamily::kComplete;
  if (name == "ring") return GraphFamily::kRing;
  if (name == "random_connected") return GraphFamily::kRandomConnected;
  throw std::invalid_argument("unknown graph family: " + name);
}

std::string to_string(GraphFamily family) {
  switch (family) {
    case GraphFamily::kComplete:
      return "complete";
    case GraphFamily::kRing:
      return "ring";
    case GraphFamily::kRandomConnected:
      return "random_connected";
  }
  throw std::invalid_argument("unknown graph family value");
}

GraphSchedule::GraphSchedule(GraphFamily family, int agents, std::uint64_t seed,
                             double extra_edge_probability)
    : family_(family),
      agents_(agents),
      seed_(seed),
      extra_edge_probability_(extra_edge_probability) {
  if (agents_ < 2) {
    throw std::invalid_argument("GraphSchedule: need at least 2 agents");
  }
  if (!(extra_edge_probability_ >= 0.0 && extra_edge_probability_ <= 1.0)) {
    throw std::invalid_argument(
        "GraphSchedule: extra_edge_probability must lie in [0,1]");
  }
}

double GraphSchedule::eta() const {
  switch (family_) {
    case GraphFamily::kComplete:
      return 1.0 / agents_;
    case GraphFamily::kRing:
      return agents_ == 2 ? 0.5 : 1.0 / 3.0;
    case GraphFamily::kRandomConnected:
      return 1.0 / agents_;
  }
  throw std::invalid_argument("unknown graph family value");
}

Matrix GraphSchedule::matrix_at(std::int64_t round) const {
  if (round < 1) {
    throw std::invalid_argument("GraphSchedule::matrix_at: round must be >= 1");
  }
  const int n = agents_;
  switch (family_) {
    case GraphFamily::kComplete:
      return Matrix::Constant(n, n, 1.0 / n);
    case GraphFamily::kRing: {
      if (n == 2) return Matrix::Constant(2, 2, 0.5);
      Matrix a = Matrix::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        a(i, i) = 1.0 / 3.0;
        a(i, (i + 1) % n) = 1.0 / 3.0;
        a(i, (i + n - 1) % n) = 1.0 / 3.0;
      }
      return a;
    }
    case GraphFamily::kRandomConnected: {
      RngStream rng =
          stream_for(seed_, {kGraphTag, static_cast<std::uint64_t>(round)});
      std::vector<std::vector<bool>> adj = random_tree(n, rng);
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          if (!adj[i][j] && rng.next_u01() < extra_edge_probability_) {
            adj[i][j] = true;
            adj[j][i] = true;
          }
        }
      }
      return metropolis_weights(adj);
    }
  }
  throw std::invalid_argument("unknown graph family value");
}

ConvergenceEnvelope envelope(int agents, double eta) {
  if (agents < 2) {
    throw std::invalid_argument("envelope: need at least 2 agents");
  }
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("envelope: eta must lie in (0,1]");
  }
  const double beta = 1.0 - eta / (4.0 * agents * agents);
  return ConvergenceEnvelope{1.0 / (beta * beta), beta};
}

void validate_weight_matrix(const Matrix& a, double eta, double tol) {
  const Eigen::Index n = a.rows();
  if (n < 2 || a.cols() != n) {
    throw std::invalid_argument("validate_weight_matrix: matrix must be square, at least 2x2");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = a(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument("validate_weight_matrix: negative or non-finite entry");
      }
      if (eta > 0.0 && v > 0.0 && v < eta - tol) {
        throw std::invalid_argument(
            "validate_weight_matrix: positive entry below floor " +
            std::to_string(eta));
      }
    }
    if (eta > 0.0 && a(i, i) < eta - tol) {
      throw std::invalid_argument("validate_weight_matrix: diagonal entry below floor");
    }
    if (std::fabs(a.row(i).sum() - 1.0) > tol) {
      throw std::invalid_argument("validate_weight_matrix: row sum differs from 1");
    }
    if (std::fabs(a.col(i).sum() - 1.0) > tol) {
      throw std::invalid_argument("validate_weight_matrix: column sum differs from 1");
    }
  }
  // Connectivity over positive off-diagonal entries.
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<Eigen::Index> stack = {0};
  seen[0] = true;
  while (!stack.empty()) {
    const Eigen::Index i = stack.back();
    stack.pop_back();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i && a(i, j) > 0.0 && !seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = true;
        stack.push_back(j);
      }
    }
  }
  for (bool s : seen) {
    if (!s) {
      throw std::invalid_argument("validate_weight_matrix: graph is not connected");
    }
  }
}

double certify_eta(const GraphSchedule& schedule, std::int64_t horizon,
                   double tol) {
  if (horizon < 1) {
    throw std::invalid_argument("certify_eta: horizon must be >= 1");
  }
  double floor_seen = 1.0;
  for (std::int64_t t = 1; t <= horizon; ++t) {
    const Matrix a = schedule.matrix_at(t);
    try {
      validate_weight_matrix(a, schedule.eta(), tol);
    } catch (const std::invalid_argument& err) {
      throw std::invalid_argument("round " + std::to_string(t) + ": " +
                                  err.what());
    }
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        if (a(i, j) > 0.0) floor_seen = std::min(floor_seen, a(i, j));
      }
    }
  }
  return floor_seen;
}

Matrix transfer_matrix(const GraphSchedule& schedule, std::int64_t s,
                       std::int64_t k) {
  if (s < 0 || k < s) {
    throw std::invalid_argument("transfer_matrix: need 0 <= s <= k");
  }
  Matrix phi = Matrix::Identity(schedule.agents(), schedule.agents());
  for (std::int64_t t = s + 1; t <= k; ++t) {
    phi = schedule.matrix_at(t) * phi;
  }
  return phi;
}

}  // namespace dpopt
