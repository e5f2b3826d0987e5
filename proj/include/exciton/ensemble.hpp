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

#include <cstdint>
#include <vector>

#include "exciton/trajectory.hpp"

namespace exciton::bathtraj {

struct EnsembleOptions {
  std::uint64_t n_instances = 4000;
  /// Store the state every `sample_stride` steps (the final step is always stored).
  Index sample_stride = 1;
  bool keep_instances = false;
  /// Replaces the source's reference energies eps-bar_m when nonempty; the
  /// fluctuations eps_m(t) - eps-bar_m are kept.
  RVector reference_override;
};

struct EnsembleResult {
  std::vector<double> times;  // fs
  std::vector<CMatrix> rho;   // ensemble mean
  RVector rho11_stderr;       // standard error of the mean of rho_11
  std::uint64_t n_instances = 0;
  std::vector<std::vector<CMatrix>> instances;  // when keep_instances
};

/// Unitary propagator exp(-i H dt) from the eigendecomposition of Hermitian H (rad/fs).
CMatrix step_propagator(const CMatrix& h, double dt);

/// Mean-field Monte-Carlo ensemble: each instance evolves rho -> U rho U^dag with
/// U = exp(-i H(t_k) dt), H(t_k) = diag(eps-bar_m + delta eps_m(t_k)) + J with J
/// constant. Instances run in parallel; the reduction uses a fixed partition
/// into contiguous chunks, so results do not depend on the thread count.
EnsembleResult mc_unitary_ensemble(const TrajectorySource& source, const RMatrix& couplings_cm, const CMatrix& rho0,
                                   const EnsembleOptions& options = {});

/// Single-threaded reference with a plain running sum.
EnsembleResult mc_unitary_ensemble_serial(const TrajectorySource& source, const RMatrix& couplings_cm,
                                          const CMatrix& rho0, const EnsembleOptions& options = {});

}  // namespace exciton::bathtraj
