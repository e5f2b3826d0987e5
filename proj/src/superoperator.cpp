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
#include "exciton/superoperator.hpp"

#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace exciton {

namespace {

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols()) throw ConfigError(std::string(what) + " must be square");
}

}  // namespace

CVector vectorize(const CMatrix& rho) {
  return Eigen::Map<const CVector>(rho.data(), rho.size());
}

CMatrix devectorize(const CVector& v, int n) {
  if (v.size() != static_cast<Index>(n) * n) throw ConfigError("vector length is not n^2");
  return Eigen::Map<const CMatrix>(v.data(), n, n);
}

Superoperator::Superoperator(int dim) : dim_(dim), matrix_(CMatrix::Zero(dim * dim, dim * dim)) {}

Superoperator::Superoperator(int dim, CMatrix matrix) : dim_(dim), matrix_(std::move(matrix)) {
  if (matrix_.rows() != dim * dim || matrix_.cols() != dim * dim) {
    throw ConfigError("superoperator matrix must be n^2 x n^2");
  }
}

Superoperator Superoperator::identity(int dim) {
  return Superoperator(dim, CMatrix::Identity(dim * dim, dim * dim));
}

CMatrix Superoperator::apply(const CMatrix& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) throw ConfigError("dimension mismatch in superoperator apply");
  return devectorize(matrix_ * vectorize(rho), dim_);
}

Superoperator& Superoperator::operator+=(const Superoperator& other) {
  if (other.dim_ != dim_) throw ConfigError("dimension mismatch in superoperator sum");
  matrix_ += other.matrix_;
  return *this;
}

Superoperator operator-(const Superoperator& a, const Superoperator& b) {
  if (a.dim_ != b.dim_) throw ConfigError("dimension mismatch in superoperator difference");
  return Superoperator(a.dim_, a.matrix_ - b.matrix_);
}

Superoperator operator*(double s, const Superoperator& a) { return Superoperator(a.dim_, s * a.matrix_); }

Superoperator operator*(const Superoperator& a, const Superoperator& b) {
  if (a.dim_ != b.dim_) throw ConfigError("dimension mismatch in superoperator composition");
  return Superoperator(a.dim_, a.matrix_ * b.matrix_);
}

SparseC Superoperator::sparse() const { return matrix_.sparseView(0.0, 0.0); }

Superoperator left_right_superoperator(const CMatrix& left, const CMatrix& right) {
  require_square(left, "left operator");
  require_square(right, "right operator");
  if (left.rows() != right.rows()) throw ConfigError("dimension mismatch between left and right operators");
  const int n = static_cast<int>(left.rows());
  CMatrix m = Eigen::kroneckerProduct(right.transpose(), left);
  return Superoperator(n, std::move(m));
}

Superoperator commutator_superoperator(const CMatrix& h) {
  require_square(h, "Hamiltonian");
  const CMatrix id = CMatrix::Identity(h.rows(), h.cols());
  Superoperator s = left_right_superoperator(h, id) - left_right_superoperator(id, h);
  return Superoperator(s.dim(), -kI * s.matrix());
}

Superoperator anticommutator_superoperator(const CMatrix& p, double rate) {
  require_square(p, "projector");
  const CMatrix id = CMatrix::Identity(p.rows(), p.cols());
  return -rate * (left_right_superoperator(p, id) + left_right_superoperator(id, p));
}

Superoperator sandwich_superoperator(const CMatrix& l) {
  return left_right_superoperator(l, l.adjoint());
}

Superoperator lindblad_dissipator(const CMatrix& l, double rate) {
  const CMatrix ldl = l.adjoint() * l;
  return rate * (sandwich_superoperator(l) + anticommutator_superoperator(ldl, 0.5));
}

}  // namespace exciton
