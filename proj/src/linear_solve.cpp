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
#include "exciton/linear_solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

namespace exciton {

struct GeneratorSolver::Impl {
  Eigen::PartialPivLU<CMatrix> dense;
  Eigen::SparseLU<SparseC, Eigen::COLAMDOrdering<int>> sparse;
};

namespace {

double norm1(const SparseC& m) {
  double best = 0.0;
  for (Index c = 0; c < m.outerSize(); ++c) {
    double s = 0.0;
    for (SparseC::InnerIterator it(m, c); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

// Largest components of v, formatted as "(index: value)".
std::string describe_direction(const CVector& v) {
  std::vector<Index> order(v.size());
  for (Index i = 0; i < v.size(); ++i) order[i] = i;
  const auto shown = std::min<std::size_t>(order.size(), 4);
  std::partial_sort(order.begin(), order.begin() + shown, order.end(),
                    [&v](Index a, Index b) { return std::abs(v[a]) > std::abs(v[b]); });
  std::ostringstream out;
  for (std::size_t k = 0; k < shown; ++k) out << (k ? ", " : "") << "[" << order[k] << "]=" << v[order[k]];
  return out.str();
}

}  // namespace

GeneratorSolver::~GeneratorSolver() = default;
GeneratorSolver::GeneratorSolver(GeneratorSolver&&) noexcept = default;
GeneratorSolver& GeneratorSolver::operator=(GeneratorSolver&&) noexcept = default;

GeneratorSolver::GeneratorSolver(const SparseC& m, const SolveOptions& options)
    : impl_(std::make_unique<Impl>()), m_(m), options_(options) {
  if (m.rows() != m.cols() || m.rows() == 0) throw ConfigError("generator must be square and nonempty");
  m_.makeCompressed();
  dense_ = m.rows() <= options.dense_threshold;

  if (dense_) {
    const CMatrix md(m_);
    if (options.check_dissipative) {
      Eigen::ComplexEigenSolver<CMatrix> es(md);
      Index worst = 0;
      es.eigenvalues().real().maxCoeff(&worst);
      const cplx ev = es.eigenvalues()[worst];
      if (!(ev.real() < 0.0)) {
        std::ostringstream msg;
        msg << "generator is not strictly dissipative: eigenvalue " << ev
            << " has non-negative real part; null direction " << describe_direction(es.eigenvectors().col(worst));
        throw NumericalError(msg.str());
      }
    }
    impl_->dense.compute(md);
  } else {
    impl_->sparse.analyzePattern(m_);
    impl_->sparse.factorize(m_);
    if (impl_->sparse.info() != Eigen::Success) {
      throw NumericalError("sparse LU of generator failed (singular): " + impl_->sparse.lastErrorMessage());
    }
  }

  condition_ = norm1(m_) * estimate_inverse_norm1();
  if (!std::isfinite(condition_) || condition_ > options.max_condition) {
    // Inverse iteration from a random start converges onto the near-null direction.
    CVector v = CVector::Ones(m_.rows()).normalized();
    for (int k = 0; k < 3; ++k) {
      v = raw_solve(v);
      const double n = v.norm();
      if (!std::isfinite(n) || n == 0.0) break;
      v /= n;
    }
    std::ostringstream msg;
    msg << "generator is singular or ill-conditioned (condition estimate " << condition_
        << "); near-null direction " << describe_direction(v);
    throw NumericalError(msg.str());
  }
}

CVector GeneratorSolver::raw_solve(const CVector& b) const {
  if (dense_) return impl_->dense.solve(b);
  return impl_->sparse.solve(b);
}

CVector GeneratorSolver::raw_solve_adjoint(const CVector& b) const {
  if (dense_) return impl_->dense.adjoint().solve(b);
  return impl_->sparse.adjoint().solve(b);
}

// Hager-Higham estimate of ||M^-1||_1 using solves with M and M^H.
double GeneratorSolver::estimate_inverse_norm1() const {
  const Index n = m_.rows();
  CVector x = CVector::Constant(n, 1.0 / static_cast<double>(n));
  double est = 0.0;
  Index last = -1;
  for (int iter = 0; iter < 5; ++iter) {
    const CVector y = raw_solve(x);
    const double ny = y.cwiseAbs().sum();
    if (!std::isfinite(ny)) return std::numeric_limits<double>::infinity();
    if (iter > 0 && ny <= est) break;
    est = ny;
    CVector s(n);
    for (Index i = 0; i < n; ++i) s[i] = std::abs(y[i]) > 0.0 ? y[i] / std::abs(y[i]) : cplx(1.0);
    const CVector z = raw_solve_adjoint(s);
    Index j = 0;
    z.cwiseAbs().maxCoeff(&j);
    if (j == last) break;
    last = j;
    x.setZero();
    x[j] = 1.0;
  }
  return est;
}

CVector GeneratorSolver::solve(const CVector& b) const {
  if (b.size() != m_.rows()) throw ConfigError("right-hand side has wrong size");
  CVector x = raw_solve(b);
  for (int k = 0; k < options_.refinement_steps; ++k) {
    const CVector r = b - m_ * x;
    x += raw_solve(r);
  }
  return x;
}

}  // namespace exciton
