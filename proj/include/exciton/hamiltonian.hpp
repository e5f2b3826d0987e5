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

#include <utility>
#include <vector>

#include "exciton/system.hpp"
#include "exciton/types.hpp"

namespace exciton {

/// Eigen-decomposition of a Hermitian Hamiltonian.
///
/// Eigenvalues ascend; column k of `vectors` is the eigenvector of
/// energies[k] in the input basis. Each eigenvector is phased so that its
/// largest-magnitude component is real and positive. Pairs closer than
/// kDegeneracyTolerance (same units as the input) are listed in
/// `degenerate_pairs`.
struct ExcitonBasis {
  RVector energies;
  CMatrix vectors;
  std::vector<std::pair<int, int>> degenerate_pairs;

  int size() const { return static_cast<int>(energies.size()); }
  bool degenerate() const { return !degenerate_pairs.empty(); }
};

inline constexpr double kDegeneracyTolerance = 1e-9;

/// Site-basis exciton Hamiltonian in cm^-1: diagonal epsilon_m + lambda, off-diagonal J_mn.
CMatrix build_hamiltonian(const ExcitonSystem& system);

/// Throws ConfigError when H is not Hermitian to 1e-12 relative.
ExcitonBasis diagonalize(const CMatrix& hamiltonian);

}  // namespace exciton
