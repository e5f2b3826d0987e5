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

#include <span>
#include <utility>
#include <vector>

#include "exciton/hamiltonian.hpp"
#include "exciton/ode.hpp"
#include "exciton/superoperator.hpp"
#include "exciton/system.hpp"

namespace exciton::redfield {

/// Overdamped (Drude-Lorentz) bath shared by all sites.
struct DrudeBath {
  double reorganization_cm = 0.0;
  double gamma = 0.02;  // rad/fs
  double temperature_K = 300.0;

  static DrudeBath from_system(const ExcitonSystem& s) {
    return {s.reorganization_cm, s.gamma(), s.temperature_K};
  }
  double lambda() const;  // rad/fs
  double kT() const;      // rad/fs
  void validate() const;
};

/// J(w) = 2 lambda gamma w / (pi (w^2 + gamma^2)), w and result in rad/fs.
double drude_spectral_density(double omega, const DrudeBath& bath);

/// 1 / (exp(w/kT) - 1).
double bose_einstein(double omega, double kT);

struct RelaxationChannel {
  int from = 0;  // exciton index (ascending energy)
  int to = 0;
  double rate = 0.0;  // fs^-1
};

struct DephasingChannel {
  int index = 0;  // exciton or site, per DephasingModel
  double rate = 0.0;
};

struct JumpOperator {
  CMatrix op;  // in the state space of the model
  double rate = 0.0;
};

enum class DephasingModel {
  exciton,  // L = |a><a|, rate (4 lambda kT / gamma) sum_m |c_m^a|^4
  site,     // L_m = sum_a |c_m^a|^2 |a><a|, rate 4 lambda kT / gamma
};

struct RedfieldOptions {
  /// Prepend an uncoupled ground state |g> at index 0 (for process tomography).
  bool with_ground_state = false;
  DephasingModel dephasing = DephasingModel::exciton;
};

/// Secular Redfield model in Lindblad form plus trap and loss channels.
///
/// All superoperators act on the site basis (index 0 = ground state when
/// present). Relaxation alpha -> beta uses L = |beta><alpha| with rate
/// 2 pi J(w_ab) [n(w_ab) + 1] sum_m |c_m^a|^2 |c_m^b|^2 (uphill: n instead of
/// n + 1). Pure dephasing has the zero-frequency rate 2 pi kT lim_{w->0} J(w)/w =
/// 4 lambda kT / gamma. The default exciton form dephases coherence (a, b) at
/// (2 lambda kT / gamma) sum_m (|c_m^a|^4 + |c_m^b|^4); the site form at
/// (2 lambda kT / gamma) sum_m (|c_m^a|^2 - |c_m^b|^2)^2, the weak-coupling limit.
struct LindbladModel {
  ExcitonBasis basis;  // of H_e, cm^-1
  std::vector<RelaxationChannel> relaxation;
  std::vector<DephasingChannel> dephasing;
  std::vector<JumpOperator> jumps;
  CMatrix hamiltonian;  // rad/fs, state space
  Superoperator coherent;
  Superoperator decoherence;
  Superoperator trap;
  Superoperator loss;
  int dim = 0;
  int trap_index = 0;
  double trap_rate = 0.0;
  double loss_rate = 0.0;
  int ground_offset = 0;  // 1 when a ground state is prepended

  Superoperator full() const { return coherent + decoherence + trap + loss; }
  double rate(int from, int to) const;
};

/// Throws NumericalError naming the pair when the spectrum is degenerate and lambda > 0.
LindbladModel build_redfield_generator(const ExcitonSystem& system, const RedfieldOptions& options = {});

/// (M_trap, M_loss): rho -> -kappa {P_trap, rho} and rho -> -Gamma {1, rho}.
/// `ground_offset` shifts site indices when a ground state is prepended.
std::pair<Superoperator, Superoperator> build_trap_loss(const ExcitonSystem& system, int ground_offset = 0);

/// Adaptive RK45 propagation of d rho/dt = M rho; grid must start at 0.
std::vector<DensityMatrix> propagate(const Superoperator& generator, const DensityMatrix& rho0,
                                     std::span<const double> grid, const OdeOptions& options = {});

/// Dense matrix-exponential propagation of the same equation.
std::vector<DensityMatrix> propagate_expm(const Superoperator& generator, const DensityMatrix& rho0,
                                          std::span<const double> grid);

}  // namespace exciton::redfield
