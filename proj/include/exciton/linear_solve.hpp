// Copyright 2026 The exciton-transfer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <memory>

#include "exciton/types.hpp"

namespace exciton {

struct SolveOptions {
  /// Reject the generator when the 1-norm condition estimate exceeds this.
  double max_condition = 1e13;
  int refinement_steps = 2;
  /// Systems up to this size are factored densely, which also allows the
  /// eigenvalue dissipativity check.
  Index dense_threshold = 1024;
  bool check_dissipative = true;
};

/// LU factorization of a (generally nonsymmetric complex) generator M with
/// iterative refinement. Dense partial pivoting for small systems, SparseLU
/// otherwise. Throws NumericalError when M is singular, ill-conditioned, or
/// (dense path) has an eigenvalue with non-negative real part; the message
/// names the offending direction.
class GeneratorSolver {
 public:
  explicit GeneratorSolver(const SparseC& m, const SolveOptions& options = {});
  ~GeneratorSolver();
  GeneratorSolver(GeneratorSolver&&) noexcept;
  GeneratorSolver& operator=(GeneratorSolver&&) noexcept;

  /// Solves M x = b.
  CVector solve(const CVector& b) const;

  double condition_estimate() const { return condition_; }
  bool dense() const { return dense_; }
  Index size() const { return m_.rows(); }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  SparseC m_;
  SolveOptions options_;
  double condition_ = 0.0;
  bool dense_ = false;

  CVector raw_solve(const CVector& b) const;
  CVector raw_solve_adjoint(const CVector& b) const;
  double estimate_inverse_norm1() const;
};

}  // namespace exciton
