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

#ifndef DPOPT_GEOMETRY_HPP_
#define DPOPT_GEOMETRY_HPP_

#include <Eigen/Dense>
#include <span>

#include "dpopt/random.hpp"

namespace dpopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline double norm1(const Vector& x) { return x.lpNorm<1>(); }
inline double norm2(const Vector& x) { return x.norm(); }

// Axis-aligned box with nonempty interior. The Euclidean projection onto a
// box is the componentwise clamp, which is all the optimizer needs.
class BoxDomain {
 public:
  BoxDomain(Vector lower, Vector upper);

  int dim() const { return static_cast<int>(lower_.size()); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

  Vector project(const Vector& x) const;
  bool contains(const Vector& x, double tol = 0.0) const;

  // Euclidean diameter: the length of the main diagonal.
  double diameter() const;

  // max of ||x||_2 over the box; attained at a corner, so it is the norm of
  // the componentwise max of |lower| and |upper|.
  double max_point_norm() const;

  Vector sample(RngStream& rng) const;

 private:
  Vector lower_;
  Vector upper_;
};

// sum_{s=1}^{t} beta^{t-s} a_s for t = len(a), evaluated by the forward
// recurrence acc <- beta*acc + a_s. No explicit powers, so it stays accurate
// for long horizons.
double geometric_tail(double beta, std::span<const double> a);

}  // namespace dpopt

#endif  // DPOPT_GEOMETRY_HPP_
