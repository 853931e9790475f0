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

#include "dpopt/cost.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dpopt {

QuadraticCost::QuadraticCost(Vector anchor) : anchor_(std::move(anchor)) {
  if (anchor_.size() == 0) {
    throw std::invalid_argument("QuadraticCost: dimension must be positive");
  }
  if (!anchor_.allFinite()) {
    throw std::invalid_argument("QuadraticCost: anchor must be finite");
  }
}

double QuadraticCost::value(const Vector& x) const {
  if (x.size() != anchor_.size()) {
    throw std::invalid_argument("QuadraticCost::value: dimension mismatch");
  }
  return (x - anchor_).squaredNorm();
}

Vector QuadraticCost::gradient(const Vector& x) const {
  if (x.size() != anchor_.size()) {
    throw std::invalid_argument("QuadraticCost::gradient: dimension mismatch");
  }
  return 2.0 * (x - anchor_);
}

std::unique_ptr<CostFunction> QuadraticCost::clone() const {
  return std::make_unique<QuadraticCost>(*this);
}

FunctionalCost::FunctionalCost(int dim,
                               std::function<double(const Vector&)> value,
                               std::function<Vector(const Vector&)> gradient)
    : dim_(dim), value_(std::move(value)), gradient_(std::move(gradient)) {
  if (dim_ <= 0) {
    throw std::invalid_argument("FunctionalCost: dimension must be positive");
  }
  if (!value_ || !gradient_) {
    throw std::invalid_argument("FunctionalCost: callbacks must be set");
  }
}

double FunctionalCost::value(const Vector& x) const {
  if (x.size() != dim_) {
    throw std::invalid_argument("FunctionalCost::value: dimension mismatch");
  }
  return value_(x);
}

Vector FunctionalCost::gradient(const Vector& x) const {
  if (x.size() != dim_) {
    throw std::invalid_argument("FunctionalCost::gradient: dimension mismatch");
  }
  return gradient_(x);
}

std::unique_ptr<CostFunction> FunctionalCost::clone() const {
  return std::make_unique<FunctionalCost>(*this);
}

void audit_constants(const BoxDomain& domain, const CostFunction& cost,
                     const CostConstants& constants, int samples,
                     std::uint64_t seed, double tol) {
  if (cost.dim() != domain.dim()) {
    throw std::invalid_argument("audit_constants: cost/domain dimension mismatch");
  }
  if (samples <= 0) {
    throw std::invalid_argument("audit_constants: samples must be positive");
  }
  if (!(constants.diameter > 0.0 && constants.gradient_cap > 0.0 &&
        constants.convexity > 0.0)) {
    throw std::invalid_argument("audit_constants: constants must be positive");
  }
  // The diameter has a closed form for a box, so it is checked exactly
  // rather than sampled.
  const double true_diameter = domain.diameter();
  if (std::fabs(constants.diameter - true_diameter) >
      tol + 1e-9 * true_diameter) {
    throw std::invalid_argument(
        "audit_constants: declared diameter " +
        std::to_string(constants.diameter) + " does not match the domain (" +
        std::to_string(true_diameter) + ")");
  }
  RngStream rng = stream_for(seed, {0x61756469u});  // distinct audit stream
  for (int s = 0; s < samples; ++s) {
    const Vector x = domain.sample(rng);
    const Vector y = domain.sample(rng);
    const double grad_norm = norm2(cost.gradient(x));
    if (grad_norm > constants.gradient_cap + tol) {
      throw std::invalid_argument(
          "audit_constants: gradient norm " + std::to_string(grad_norm) +
          " exceeds cap " + std::to_string(constants.gradient_cap));
    }
    const double lhs = cost.gradient(x).dot(y - x);
    const double rhs = cost.value(y) - cost.value(x) -
                       0.5 * constants.convexity * (y - x).squaredNorm();
    if (lhs > rhs + tol) {
      throw std::invalid_argument(
          "audit_constants: strong convexity violated by " +
          std::to_string(lhs - rhs));
    }
  }
}

}  // namespace dpopt
