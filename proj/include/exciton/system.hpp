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

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "exciton/types.hpp"

namespace exciton {

/// Single-exciton model definition. Energies in cm^-1, rates in fs^-1.
struct ExcitonSystem {
  RVector site_energies_cm;
  RMatrix couplings_cm;  // symmetric, zero diagonal
  double reorganization_cm = 0.0;
  double bath_correlation_fs = 50.0;  // 1/gamma
  double temperature_K = 300.0;
  int trap_site = 0;
  double trap_rate_per_fs = 0.0;  // kappa
  double loss_rate_per_fs = 0.0;  // Gamma
  std::vector<Eigen::Vector3d> dipoles;

  int n_sites() const { return static_cast<int>(site_energies_cm.size()); }

  /// Bath correlation rate gamma in rad/fs.
  double gamma() const { return 1.0 / bath_correlation_fs; }

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
};

ExcitonSystem system_from_json(const nlohmann::json& j);
nlohmann::json system_to_json(const ExcitonSystem& s);
ExcitonSystem load_system(const std::filesystem::path& path);

/// The 2-site model of FMO sites 1 and 2 (epsilon = 0, 120 cm^-1, J = -87.7 cm^-1)
/// with trap at site 2, 1/kappa = 1 ps, 1/Gamma = 1 ns, 1/gamma = 50 fs, 300 K.
ExcitonSystem dimer_system(double reorganization_cm = 35.0);

/// Seven-site FMO Hamiltonian (C. tepidum), energies
/// relative to site 1; trap at site 3 (index 2), same rates as dimer_system().
ExcitonSystem fmo_system(double reorganization_cm = 35.0);

/// |m><m| on an n-dimensional space.
DensityMatrix site_state(int n, int site);

/// Throws ConfigError when rho is not Hermitian to 1e-12 (relative) or has a
/// negative eigenvalue below -1e-12.
void check_density_matrix(const DensityMatrix& rho);

}  // namespace exciton
