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
#include "exciton/hamiltonian.hpp"

#include <cmath>

namespace exciton {

CMatrix build_hamiltonian(const ExcitonSystem& system) {
  system.validate();
  const int n = system.n_sites();
  CMatrix h = system.couplings_cm.cast<cplx>();
  for (int m = 0; m < n; ++m) h(m, m) = system.site_energies_cm(m) + system.reorganization_cm;
  return h;
}

ExcitonBasis diagonalize(const CMatrix& hamiltonian) {
  if (hamiltonian.rows() != hamiltonian.cols()) throw ConfigError("Hamiltonian must be square");
  const double scale = std::max(1.0, hamiltonian.norm());
  if ((hamiltonian - hamiltonian.adjoint()).norm() > 1e-12 * scale) {
    throw ConfigError("Hamiltonian is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hamiltonian);
  if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");

  ExcitonBasis basis;
  basis.energies = es.eigenvalues();
  basis.vectors = es.eigenvectors();
  const int n = basis.size();
  for (int k = 0; k < n; ++k) {
    auto v = basis.vectors.col(k);
    Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    const cplx phase = v(imax) / std::abs(v(imax));
    v /= phase;
    v(imax) = std::abs(v(imax));
  }
  for (int k = 0; k + 1 < n; ++k) {
    if (basis.energies(k + 1) - basis.energies(k) < kDegeneracyTolerance) {
      basis.degenerate_pairs.emplace_back(k, k + 1);
    }
  }
  return basis;
}

}  // namespace exciton
