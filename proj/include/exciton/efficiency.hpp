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

#include <functional>
#include <utility>
#include <vector>

#include "exciton/heom.hpp"
#include "exciton/linear_solve.hpp"
#include "exciton/ode.hpp"
#include "exciton/redfield.hpp"
#include "exciton/system.hpp"

namespace exciton {

/// A generator M = M_H + M_decoherence + M_trap + M_loss on a state vector whose
/// first dim*dim entries are the column-stacked physical density matrix. For
/// Redfield the state is just rho; for HEOM it is the whole hierarchy.
struct GeneratorParts {
  int dim = 0;
  Index state_size = 0;
  SparseC coherent;
  SparseC decoherence;
  SparseC trap;
  SparseC loss;
  int trap_index = 0;
  double trap_rate = 0.0;
  double loss_rate = 0.0;
  /// Fast application of the full generator (y = M x).
  std::function<void(const CVector&, CVector&)> apply;

  SparseC full() const;
  CVector embed(const CMatrix& rho) const;
  CMatrix physical(const CVector& state) const;
};

GeneratorParts redfield_parts(const redfield::LindbladModel& model);
GeneratorParts heom_parts(const heom::HeomGenerator& generator);

struct EfficiencyOptions {
  SolveOptions solve;
  OdeOptions ode;
  /// Time-domain integration runs until Tr rho drops below this.
  double trace_floor = 1e-11;
  /// Coherence integral cutoff.
  double coherence_trace_cutoff = 1e-3;
  double horizon_fs = 1e8;
  /// Optional basis (columns) for the coherence integral; empty means site basis.
  CMatrix coherence_basis;
};

struct EfficiencyReport {
  double eta = 0.0;             // algebraic
  double eta_quadrature = 0.0;  // time-domain trapped flux
  double eta_H = 0.0;
  double eta_decoherence = 0.0;
  double eta_init = 0.0;
  double eta_dyn = 0.0;
  /// eta - (eta_H + eta_decoherence); equals the trap term of rho0 itself,
  /// which vanishes unless the exciton starts on the trap site.
  double residual = 0.0;
  double condition = 0.0;
};

struct CoherenceReport {
  double C = 0.0;  // fs
  double C_zero = 0.0;
  double C_normalized = 0.0;
  double cutoff_time = 0.0;  // fs
};

/// Trapped probability 2 kappa int rho_tt dt from the linear solve M x = rho0.
double efficiency(const GeneratorParts& parts, const CMatrix& rho0, const SolveOptions& options = {});

/// Same quantity by adaptive time-domain quadrature of the trapped flux.
double efficiency_quadrature(const GeneratorParts& parts, const CMatrix& rho0, const EfficiencyOptions& options = {});

/// Efficiency carried by one generator component:
/// -Tr{M_trap (M_trap + M_loss)^-1 M_part M^-1 rho0}, via two nested solves.
/// Requires kappa > 0 and Gamma > 0.
double contribution(const SparseC& part, const GeneratorParts& parts, const CMatrix& rho0,
                    const SolveOptions& options = {});

/// eta (both ways), eta_H, eta_decoherence and the residual. eta_init/eta_dyn
/// are left for the caller (they need the Lindblad channels).
EfficiencyReport efficiency_report(const GeneratorParts& parts, const CMatrix& rho0,
                                   const EfficiencyOptions& options = {});

/// Trapped probability along the no-jump trajectory of a pure initial state.
/// Throws ConfigError when `rho0` is not pure.
double initial_state_contribution(const redfield::LindbladModel& model, const CMatrix& rho0,
                                  const EfficiencyOptions& options = {});
double initial_state_contribution(const redfield::LindbladModel& model, const CVector& psi,
                                  const EfficiencyOptions& options = {});

/// Probability-weighted sum over the pure components of a classical mixture.
double initial_state_contribution(const redfield::LindbladModel& model,
                                  const std::vector<std::pair<double, CVector>>& mixture,
                                  const EfficiencyOptions& options = {});

/// Non-Hermitian no-jump Hamiltonian H - i/2 sum r L^dag L - i kappa P - i Gamma 1 (rad/fs).
CMatrix no_jump_hamiltonian(const redfield::LindbladModel& model);

/// Sum over m != n of int |rho_mn| dt until Tr rho <= cutoff, and the cutoff time.
std::pair<double, double> coherence_integral(const GeneratorParts& parts, const CMatrix& rho0,
                                             const EfficiencyOptions& options = {});

/// C and C/C(0), with C(0) from the coherent + trap/loss dynamics of the same
/// system at lambda = 0 (shared by both models).
CoherenceReport integrated_coherence(const GeneratorParts& parts, const CMatrix& rho0, const ExcitonSystem& system,
                                     const EfficiencyOptions& options = {});

/// 2 |rho_12| for a dimer single-exciton state.
double concurrence(const CMatrix& rho);

}  // namespace exciton
