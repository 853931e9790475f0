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

#include "dpopt/optimizer.hpp"

#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "dpopt/csvio.hpp"
#include "dpopt/laplace.hpp"

namespace dpopt {
namespace {

constexpr std::uint64_t kNoiseTag = 0x6e6f6973u;
constexpr std::uint64_t kInitTag = 0x696e6974u;

void check_states_shape(const ProblemInstance& problem, const Matrix& states,
                        const char* where) {
  if (states.rows() != problem.agents() || states.cols() != problem.dim()) {
    throw std::invalid_argument(std::string(where) + ": state matrix must be agents x dim");
  }
  if (!states.allFinite()) {
    throw std::invalid_argument(std::string(where) + ": states must be finite");
  }
}

Matrix update_states(const ProblemInstance& problem, const Matrix& z,
                     double gamma) {
  Matrix x_next(z.rows(), z.cols());
  for (int i = 0; i < problem.agents(); ++i) {
    const Vector zi = z.row(i).transpose();
    x_next.row(i) =
        problem.domain().project(zi - gamma * problem.cost(i).gradient(zi));
  }
  return x_next;
}

}  // namespace

Matrix initial_states(const ProblemInstance& problem, const InitPolicy& init,
                      std::uint64_t seed) {
  Matrix x0(problem.agents(), problem.dim());
  switch (init.kind) {
    case InitPolicy::Kind::kAnchors:
      for (int i = 0; i < problem.agents(); ++i) {
        const QuadraticCost* quad = problem.quadratic(i);
        if (quad == nullptr) {
          throw std::invalid_argument(
              "initial_states: anchors policy needs quadratic costs");
        }
        x0.row(i) = quad->anchor();
      }
      return x0;
    case InitPolicy::Kind::kFixedPoint: {
      if (!problem.domain().contains(init.point)) {
        throw std::invalid_argument(
            "initial_states: fixed point lies outside the domain");
      }
      for (int i = 0; i < problem.agents(); ++i) x0.row(i) = init.point;
      return x0;
    }
    case InitPolicy::Kind::kUniform:
      for (int i = 0; i < problem.agents(); ++i) {
        RngStream rng =
            stream_for(seed, {kInitTag, static_cast<std::uint64_t>(i)});
        x0.row(i) = problem.domain().sample(rng);
      }
      return x0;
  }
  throw std::invalid_argument("initial_states: unknown policy");
}

RoundRecord step(const ProblemInstance& problem, const ScheduleParams& params,
                 const Matrix& x_prev, std::int64_t t,
                 std::uint64_t noise_seed) {
  if (t < 1) throw std::invalid_argument("step: round must be >= 1");
  check_states_shape(problem, x_prev, "step");

  const double gamma = step_size(params, t);
  const double scale =
      noise_scale(params, t, problem.constants().gradient_cap, problem.dim());

  RoundRecord rec;
  rec.t = t;
  rec.x_prev = x_prev;
  rec.w.resize(x_prev.rows(), x_prev.cols());
  for (int i = 0; i < problem.agents(); ++i) {
    for (int k = 0; k < problem.dim(); ++k) {
      const double u = stream_for(noise_seed,
                                  {kNoiseTag, static_cast<std::uint64_t>(t),
                                   static_cast<std::uint64_t>(i),
                                   static_cast<std::uint64_t>(k)})
                           .u01_at(0);
      rec.w(i, k) = laplace_from_uniform(u, scale);
    }
  }
  rec.y = x_prev + rec.w;
  rec.z = problem.graph().matrix_at(t) * rec.y;
  rec.x_next = update_states(problem, rec.z, gamma);
  return rec;
}

ExecutionTrace run(const ProblemInstance& problem, const ScheduleParams& params,
                   std::int64_t rounds, std::uint64_t seed,
                   const InitPolicy& init) {
  return run_from(problem, params, rounds, seed,
                  initial_states(problem, init, seed));
}

ExecutionTrace run_from(const ProblemInstance& problem,
                        const ScheduleParams& params, std::int64_t rounds,
                        std::uint64_t seed, const Matrix& x0) {
  if (rounds < 1) throw std::invalid_argument("run: rounds must be >= 1");
  check_states_shape(problem, x0, "run");
  ExecutionTrace trace;
  trace.params = params;
  trace.seed = seed;
  trace.records.reserve(static_cast<std::size_t>(rounds));
  Matrix x = x0;
  for (std::int64_t t = 1; t <= rounds; ++t) {
    trace.records.push_back(step(problem, params, x, t, seed));
    x = trace.records.back().x_next;
  }
  return trace;
}

Matrix run_final(const ProblemInstance& problem, const ScheduleParams& params,
                 std::int64_t rounds, std::uint64_t seed,
                 const InitPolicy& init) {
  if (rounds < 1) throw std::invalid_argument("run_final: rounds must be >= 1");
  Matrix x = initial_states(problem, init, seed);
  for (std::int64_t t = 1; t <= rounds; ++t) {
    x = step(problem, params, x, t, seed).x_next;
  }
  return x;
}

const RoundRecord& ExecutionTrace::at(std::int64_t t) const {
  if (t < 1 || t > rounds()) {
    throw std::invalid_argument("ExecutionTrace::at: round out of range");
  }
  return records[static_cast<std::size_t>(t - 1)];
}

Matrix ExecutionTrace::initial_states() const {
  if (records.empty()) {
    throw std::invalid_argument("ExecutionTrace::initial_states: empty trace");
  }
  return records.front().x_prev;
}

std::vector<Matrix> ExecutionTrace::observations() const {
  std::vector<Matrix> obs;
  obs.reserve(records.size());
  for (const RoundRecord& rec : records) obs.push_back(rec.y);
  return obs;
}

std::vector<Matrix> replay(const ProblemInstance& problem,
                           const ScheduleParams& params,
                           const std::vector<Matrix>& observations,
                           const Matrix& x0) {
  check_states_shape(problem, x0, "replay");
  std::vector<Matrix> states;
  states.reserve(observations.size() + 1);
  states.push_back(x0);
  for (std::size_t s = 0; s < observations.size(); ++s) {
    const std::int64_t t = static_cast<std::int64_t>(s) + 1;
    const Matrix& y = observations[s];
    if (y.rows() != problem.agents() || y.cols() != problem.dim()) {
      throw std::invalid_argument("replay: observation shape mismatch at round " +
                                  std::to_string(t));
    }
    const Matrix z = problem.graph().matrix_at(t) * y;
    states.push_back(update_states(problem, z, step_size(params, t)));
  }
  return states;
}

void validate_trace(const ProblemInstance& problem, const ExecutionTrace& trace,
                    double tol) {
  auto fail = [](std::int64_t t, const char* what) {
    throw std::runtime_error("trace inconsistent at round " + std::to_string(t) +
                             ": " + what);
  };
  for (std::size_t s = 0; s < trace.records.size(); ++s) {
    const RoundRecord& rec = trace.records[s];
    const std::int64_t t = static_cast<std::int64_t>(s) + 1;
    if (rec.t != t) fail(t, "round index out of order");
    if (s > 0 && (rec.x_prev - trace.records[s - 1].x_next).cwiseAbs().maxCoeff() > tol) {
      fail(t, "entering state differs from previous update");
    }
    if ((rec.y - (rec.x_prev + rec.w)).cwiseAbs().maxCoeff() > tol) {
      fail(t, "published values differ from state plus noise");
    }
    const Matrix z = problem.graph().matrix_at(t) * rec.y;
    if ((rec.z - z).cwiseAbs().maxCoeff() > tol) {
      fail(t, "mixed values differ from weighted neighborhood average");
    }
    const Matrix x_next = update_states(problem, rec.z, step_size(trace.params, t));
    if ((rec.x_next - x_next).cwiseAbs().maxCoeff() > tol) {
      fail(t, "updated state differs from projected gradient step");
    }
    for (int i = 0; i < problem.agents(); ++i) {
      if (!problem.domain().contains(rec.x_next.row(i).transpose(), tol)) {
        fail(t, "updated state escapes the domain");
      }
    }
  }
}

double disagreement(const Matrix& states) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < states.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < states.rows(); ++j) {
      worst = std::max(worst, (states.row(i) - states.row(j)).norm());
    }
  }
  return worst;
}

Vector mean_estimate(const Matrix& states) {
  return states.colwise().mean().transpose();
}

double disagreement(const ExecutionTrace& trace, std::int64_t t) {
  if (t == 0) return disagreement(trace.initial_states());
  return disagreement(trace.at(t).x_next);
}

Vector mean_estimate(const ExecutionTrace& trace, std::int64_t t) {
  if (t == 0) return mean_estimate(trace.initial_states());
  return mean_estimate(trace.at(t).x_next);
}

std::vector<double> max_noise_norms(const ExecutionTrace& trace) {
  std::vector<double> norms;
  norms.reserve(trace.records.size());
  for (const RoundRecord& rec : trace.records) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < rec.w.rows(); ++i) {
      worst = std::max(worst, rec.w.row(i).norm());
    }
    norms.push_back(worst);
  }
  return norms;
}

void write_trace_csv(const ExecutionTrace& trace, std::ostream& out) {
  out << "round,agent,component,x,w,y,z\n";
  if (trace.records.empty()) return;
  const Matrix x0 = trace.initial_states();
  for (Eigen::Index i = 0; i < x0.rows(); ++i) {
    for (Eigen::Index k = 0; k < x0.cols(); ++k) {
      out << "0," << i << ',' << k << ',' << format_double(x0(i, k))
          << ",0,0,0\n";
    }
  }
  for (const RoundRecord& rec : trace.records) {
    for (Eigen::Index i = 0; i < rec.w.rows(); ++i) {
      for (Eigen::Index k = 0; k < rec.w.cols(); ++k) {
        out << rec.t << ',' << i << ',' << k << ','
            << format_double(rec.x_next(i, k)) << ','
            << format_double(rec.w(i, k)) << ',' << format_double(rec.y(i, k))
            << ',' << format_double(rec.z(i, k)) << '\n';
      }
    }
  }
}

TraceData read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "round,agent,component,x,w,y,z") {
    throw std::runtime_error("read_trace_csv: missing or unexpected header");
  }
  struct Cell {
    double x, w, y, z;
  };
  // first pass: collect cells and extents
  std::vector<std::tuple<long long, long long, long long, Cell>> cells;
  long long max_round = -1, max_agent = -1, max_comp = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<std::string_view, 7> fields;
    std::string_view rest(line);
    for (int f = 0; f < 7; ++f) {
      const std::size_t pos = rest.find(',');
      if (f < 6) {
        if (pos == std::string_view::npos) {
          throw std::runtime_error("read_trace_csv: short row '" + line + "'");
        }
        fields[f] = rest.substr(0, pos);
        rest.remove_prefix(pos + 1);
      } else {
        if (pos != std::string_view::npos) {
          throw std::runtime_error("read_trace_csv: long row '" + line + "'");
        }
        fields[f] = rest;
      }
    }
    const long long t = parse_int(fields[0]);
    const long long i = parse_int(fields[1]);
    const long long k = parse_int(fields[2]);
    if (t < 0 || i < 0 || k < 0) {
      throw std::runtime_error("read_trace_csv: negative index in '" + line + "'");
    }
    cells.emplace_back(t, i, k,
                       Cell{parse_double(fields[3]), parse_double(fields[4]),
                            parse_double(fields[5]), parse_double(fields[6])});
    max_round = std::max(max_round, t);
    max_agent = std::max(max_agent, i);
    max_comp = std::max(max_comp, k);
  }
  if (max_round < 0 || max_agent < 0 || max_comp < 0) {
    throw std::runtime_error("read_trace_csv: no data rows");
  }
  const auto agents = static_cast<Eigen::Index>(max_agent + 1);
  const auto dim = static_cast<Eigen::Index>(max_comp + 1);
  const auto rounds = static_cast<std::size_t>(max_round);
  TraceData data;
  data.x0 = Matrix::Zero(agents, dim);
  data.x.assign(rounds, Matrix::Zero(agents, dim));
  data.w.assign(rounds, Matrix::Zero(agents, dim));
  data.y.assign(rounds, Matrix::Zero(agents, dim));
  data.z.assign(rounds, Matrix::Zero(agents, dim));
  for (const auto& [t, i, k, cell] : cells) {
    if (i >= agents || k >= dim) continue;
    if (t == 0) {
      data.x0(i, k) = cell.x;
    } else {
      const auto s = static_cast<std::size_t>(t - 1);
      data.x[s](i, k) = cell.x;
      data.w[s](i, k) = cell.w;
      data.y[s](i, k) = cell.y;
      data.z[s](i, k) = cell.z;
    }
  }
  return data;
}

}  // namespace dpopt
