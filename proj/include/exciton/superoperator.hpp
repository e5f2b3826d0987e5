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

#include "exciton/types.hpp"

namespace exciton {

// Column-stacking vectorization: vec(rho)[a + n*b] = rho(a, b).
// With this convention vec(A rho B) = (B^T kron A) vec(rho).

CVector vectorize(const CMatrix& rho);
CMatrix devectorize(const CVector& v, int n);

/// Linear map on n x n matrices, stored as an n^2 x n^2 matrix acting on vec(rho).
class Superoperator {
 public:
  Superoperator() = default;
  explicit Superoperator(int dim);
  Superoperator(int dim, CMatrix matrix);

  static Superoperator zero(int dim) { return Superoperator(dim); }
  static Superoperator identity(int dim);

  int dim() const { return dim_; }
  const CMatrix& matrix() const { return matrix_; }

  CMatrix apply(const CMatrix& rho) const;
  CVector apply(const CVector& v) const { return matrix_ * v; }

  Superoperator& operator+=(const Superoperator& other);
  friend Superoperator operator+(Superoperator a, const Superoperator& b) { return a += b; }
  friend Superoperator operator-(const Superoperator& a, const Superoperator& b);
  friend Superoperator operator*(double s, const Superoperator& a);
  /// Composition: (a * b)(rho) = a(b(rho)).
  friend Superoperator operator*(const Superoperator& a, const Superoperator& b);

  SparseC sparse() const;

 private:
  int dim_ = 0;
  CMatrix matrix_;
};

/// rho -> A rho B.
Superoperator left_right_superoperator(const CMatrix& left, const CMatrix& right);

/// rho -> -i [H, rho]. H in rad/fs.
Superoperator commutator_superoperator(const CMatrix& h);

/// rho -> -rate {P, rho}.
Superoperator anticommutator_superoperator(const CMatrix& p, double rate);

/// rho -> L rho L^dagger.
Superoperator sandwich_superoperator(const CMatrix& l);

/// rho -> rate (L rho L^dagger - 1/2 {L^dagger L, rho}).
Superoperator lindblad_dissipator(const CMatrix& l, double rate);

}  // namespace exciton
