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

#ifndef DPOPT_COST_HPP_
#define DPOPT_COST_HPP_

#include <functional>
#include <memory>

#include "dpopt/geometry.hpp"

namespace dpopt {

// Per-agent objective. Implementations must be strongly convex and have a
// bounded gradient over the domain they are used with; audit_constants below
// spot-checks both.
class CostFunction {
 public:
  virtual ~CostFunction() = default;
  virtual int dim() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  virtual std::unique_ptr<CostFunction> clone() const = 0;
};

// f(x) = ||x - anchor||^2. Gradient 2(x - anchor), strong convexity modulus 2.
class QuadraticCost final : public CostFunction {
 public:
  explicit QuadraticCost(Vector anchor);

  int dim() const override { return static_cast<int>(anchor_.size()); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  std::unique_ptr<CostFunction> clone() const override;

  const Vector& anchor() const { return anchor_; }

 private:
  Vector anchor_;
};

// Adapter for closures, mainly useful in tests.
class FunctionalCost final : public CostFunction {
 public:
  FunctionalCost(int dim, std::function<double(const Vector&)> value,
                 std::function<Vector(const Vector&)> gradient);

  int dim() const override { return dim_; }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  std::unique_ptr<CostFunction> clone() const override;

 private:
  int dim_;
  std::function<double(const Vector&)> value_;
  std::function<Vector(const Vector&)> gradient_;
};

// Family-level regularity constants shared by all agents:
//   diameter      bound on ||x - y|| over the domain
//   gradient_cap  bound on ||grad f_i(x)|| over the domain
//   convexity     strong convexity modulus of every f_i
struct CostConstants {
  double diameter = 0.0;      // C1
  double gradient_cap = 0.0;  // C2
  double convexity = 0.0;     // C3
};

// Samples `samples` point pairs in the domain and verifies the gradient cap
// and the strong convexity inequality
//   grad f(x)^T (y - x) <= f(y) - f(x) - (convexity/2) ||y - x||^2
// up to `tol`. Throws std::invalid_argument naming the failing check.
void audit_constants(const BoxDomain& domain, const CostFunction& cost,
                     const CostConstants& constants, int samples,
                     std::uint64_t seed, double tol = 1e-12);

}  // namespace dpopt

#endif  // DPOPT_COST_HPP_
