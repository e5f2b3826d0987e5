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
#include <functional>
#include <span>
#include <vector>

#include "exciton/hierarchy.hpp"
#include "exciton/ode.hpp"
#include "exciton/system.hpp"
#include "exciton/types.hpp"

namespace exciton::heom {

struct HeomOptions {
  int tiers = 4;
  int n_matsubara = 0;
  /// Permit beta*gamma > 1 with fewer than two Matsubara terms.
  bool allow_low_temperature = false;
  std::uint64_t memory_budget_bytes = std::uint64_t{2} << 30;
  /// Prepend an uncoupled ground state |g> at index 0 (for process tomography).
  bool with_ground_state = false;
};

/// One exponential of the bath correlation function c(t) = sum c_k exp(-nu_k t)
/// acting on site `site`.
struct BathMode {
  int site = 0;
  cplx c{0.0, 0.0};  // rad^2/fs^2
  double nu = 0.0;   // rad/fs
};

/// Drude term lambda gamma (cot(beta gamma / 2) - i) at rate gamma plus
/// `n_matsubara` Matsubara terms per site.
std::vector<BathMode> drude_modes(const ExcitonSystem& system, int n_matsubara);

/// Scaled hierarchy for a Drude-Lorentz bath on every site, hard-truncated at
/// tier L. ADO i occupies entries [i*d*d, (i+1)*d*d) of the state vector,
/// column-stacked. Trap and loss act identically on every ADO.
class HeomGenerator {
 public:
  HeomGenerator(const ExcitonSystem& system, const HeomOptions& options);

  int dim() const { return dim_; }
  std::size_t n_ados() const { return indices_.size(); }
  Index state_size() const { return static_cast<Index>(n_ados()) * dim_ * dim_; }
  const HierarchyIndexSet& indices() const { return indices_; }
  const std::vector<BathMode>& modes() const { return modes_; }
  const HeomOptions& options() const { return options_; }
  const CMatrix& hamiltonian() const { return h_; }
  int trap_index() const { return trap_index_; }
  double trap_rate() const { return trap_rate_; }
  double loss_rate() const { return loss_rate_; }
  int ground_offset() const { return ground_offset_; }

  /// y = M x, OpenMP-parallel over ADO blocks.
  void apply(const CVector& x, CVector& y) const;
  /// Same map written with plain dense matrix products, single-threaded.
  void apply_serial(const CVector& x, CVector& y) const;

  /// Factorized initial condition: rho in block 0, zero ADOs.
  CVector embed(const CMatrix& rho) const;
  CMatrix physical(const CVector& state) const { return ado(state, 0); }
  CMatrix ado(const CVector& state, std::size_t i) const;

  struct Parts {
    SparseC coherent;     // -i[H, .] on every ADO
    SparseC decoherence;  // damping and tier couplings
    SparseC trap;
    SparseC loss;
  };
  /// Sparse assembly of the same generator, split into components.
  Parts assemble() const;

  double plus_coefficient(std::size_t i, int mode) const { return plus_coef_[i * modes_.size() + mode]; }
  double minus_coefficient(std::size_t i, int mode) const { return minus_coef_[i * modes_.size() + mode]; }

 private:
  int state_index(int mode) const { return modes_[mode].site + ground_offset_; }

  HeomOptions options_;
  int dim_ = 0;
  int ground_offset_ = 0;
  int trap_index_ = 0;
  double trap_rate_ = 0.0;
  double loss_rate_ = 0.0;
  std::vector<BathMode> modes_;
  HierarchyIndexSet indices_;
  CMatrix h_;      // rad/fs
  CMatrix h_eff_;  // H - i (kappa P_trap + Gamma 1)
  std::vector<double> damping_;  // sum_k n_k nu_k per ADO
  std::vector<double> plus_coef_;
  std::vector<double> minus_coef_;
};

/// Called at every grid point with the full hierarchy state.
using HierarchyObserver = std::function<void(double t, const CVector& state)>;

/// Physical density matrix on `grid` (which must start at 0).
std::vector<DensityMatrix> propagate_heom(const HeomGenerator& generator, const DensityMatrix& rho0,
                                          std::span<const double> grid, const OdeOptions& options = {},
                                          const HierarchyObserver& observer = {});

}  // namespace exciton::heom
