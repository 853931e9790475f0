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

#include "dpopt/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dpopt {

BoxDomain::BoxDomain(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() == 0) {
    throw std::invalid_argument("BoxDomain: dimension must be positive");
  }
  if (lower_.size() != upper_.size()) {
    throw std::invalid_argument("BoxDomain: lower and upper dimensions differ");
  }
  for (Eigen::Index k = 0; k < lower_.size(); ++k) {
    if (!std::isfinite(lower_[k]) || !std::isfinite(upper_[k])) {
      throw std::invalid_argument("BoxDomain: bounds must be finite");
    }
    if (!(lower_[k] < upper_[k])) {
      throw std::invalid_argument(
          "BoxDomain: lower[" + std::to_string(k) +
          "] must be strictly below upper[" + std::to_string(k) + "]");
    }
  }
}

Vector BoxDomain::project(const Vector& x) const {
  if (x.size() != lower_.size()) {
    throw std::invalid_argument("BoxDomain::project: dimension mismatch");
  }
  return x.cwiseMax(lower_).cwiseMin(upper_);
}

bool BoxDomain::contains(const Vector& x, double tol) const {
  if (x.size() != lower_.size()) {
    throw std::invalid_argument("BoxDomain::contains: dimension mismatch");
  }
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (x[k] < lower_[k] - tol || x[k] > upper_[k] + tol) return false;
  }
  return true;
}

double BoxDomain::diameter() const { return (upper_ - lower_).norm(); }

double BoxDomain::max_point_norm() const {
  return lower_.cwiseAbs().cwiseMax(upper_.cwiseAbs()).norm();
}

Vector BoxDomain::sample(RngStream& rng) const {
  Vector x(lower_.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    x[k] = rng.next_uniform(lower_[k], upper_[k]);
  }
  return x;
}

double geometric_tail(double beta, std::span<const double> a) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::invalid_argument("geometric_tail: beta must lie in (0,1)");
  }
  double acc = 0.0;
  for (double v : a) acc = beta * acc + v;
  return acc;
}

}  // namespace dpopt
