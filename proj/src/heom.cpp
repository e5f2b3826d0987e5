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
#include "exciton/heom.hpp"

#include <cmath>
#include <sstream>

#include "exciton/hamiltonian.hpp"
#include "exciton/superoperator.hpp"
#include "exciton/units.hpp"

namespace exciton::heom {

std::vector<BathMode> drude_modes(const ExcitonSystem& system, int n_matsubara) {
  if (n_matsubara < 0) throw ConfigError("n_matsubara must be >= 0");
  const double lambda = wavenumber_to_angular(system.reorganization_cm);
  const double gamma = system.gamma();
  const double beta = 1.0 / wavenumber_to_angular(thermal_energy_cm(system.temperature_K));
  std::vector<BathMode> modes;
  for (int site = 0; site < system.n_sites(); ++site) {
    modes.push_back({site, lambda * gamma * cplx(1.0 / std::tan(beta * gamma / 2.0), -1.0), gamma});
    for (int k = 1; k <= n_matsubara; ++k) {
      const double nu = 2.0 * kPi * k / beta;
      if (std::abs(nu - gamma) < 1e-12 * gamma) throw ConfigError("Matsubara frequency coincides with gamma");
      modes.push_back({site, cplx(4.0 * lambda * gamma / beta * nu / (nu * nu - gamma * gamma), 0.0), nu});
    }
  }
  return modes;
}

namespace {

std::vector<BathMode> checked_modes(const ExcitonSystem& system, const HeomOptions& options) {
  system.validate();
  if (options.tiers < 0) throw ConfigError("tiers must be >= 0");
  if (options.tiers == 0 && system.reorganization_cm > 0.0) {
    throw ConfigError("HEOM needs at least one tier when lambda > 0");
  }
  const double beta_gamma = system.gamma() / wavenumber_to_angular(thermal_energy_cm(system.temperature_K));
  if (beta_gamma > 1.0 && options.n_matsubara < 2 && !options.allow_low_temperature) {
    std::ostringstream msg;
    msg << "beta*gamma = " << beta_gamma
        << " > 1: the high-temperature bath correlation is inaccurate; use at least 2 Matsubara terms"
           " or set the low-temperature override";
    throw ConfigError(msg.str());
  }
  const std::uint64_t n = hierarchy_size(system.n_sites() * (1 + options.n_matsubara), options.tiers);
  check_memory_budget(n, system.n_sites() + (options.with_ground_state ? 1 : 0), options.memory_budget_bytes);
  return drude_modes(system, options.n_matsubara);
}

}  // namespace

HeomGenerator::HeomGenerator(const ExcitonSystem& system, const HeomOptions& options)
    : options_(options),
      dim_(system.n_sites() + (options.with_ground_state ? 1 : 0)),
      ground_offset_(options.with_ground_state ? 1 : 0),
      trap_index_(system.trap_site + ground_offset_),
      trap_rate_(system.trap_rate_per_fs),
      loss_rate_(system.loss_rate_per_fs),
      modes_(checked_modes(system, options)),
      indices_(static_cast<int>(modes_.size()), options.tiers) {
  const int n = system.n_sites();
  h_ = CMatrix::Zero(dim_, dim_);
  h_.bottomRightCorner(n, n) = build_hamiltonian(system) * wavenumber_to_angular(1.0);
  h_eff_ = h_;
  h_eff_(trap_index_, trap_index_) -= kI * trap_rate_;
  for (int m = ground_offset_; m < dim_; ++m) h_eff_(m, m) -= kI * loss_rate_;

  const std::size_t b = modes_.size();
  damping_.assign(n_ados(), 0.0);
  plus_coef_.assign(n_ados() * b, 0.0);
  minus_coef_.assign(n_ados() * b, 0.0);
  for (std::size_t i = 0; i < n_ados(); ++i) {
    for (std::size_t k = 0; k < b; ++k) {
      const int nk = indices_.count(i, static_cast<int>(k));
      const double ck = std::abs(modes_[k].c);
      damping_[i] += nk * modes_[k].nu;
      if (ck == 0.0) continue;  // decoupled mode (lambda = 0)
      plus_coef_[i * b + k] = std::sqrt((nk + 1) * ck);
      minus_coef_[i * b + k] = std::sqrt(nk / ck);
    }
  }
}

CVector HeomGenerator::embed(const CMatrix& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) throw ConfigError("initial state has wrong dimension");
  CVector y = CVector::Zero(state_size());
  y.head(dim_ * dim_) = vectorize(rho);
  return y;
}

CMatrix HeomGenerator::ado(const CVector& state, std::size_t i) const {
  const Index d2 = static_cast<Index>(dim_) * dim_;
  return devectorize(state.segment(static_cast<Index>(i) * d2, d2), dim_);
}

HeomGenerator::Parts HeomGenerator::assemble() const {
  const int d = dim_;
  const Index d2 = static_cast<Index>(d) * d;
  const Index size = state_size();
  const CMatrix id = CMatrix::Identity(d, d);

  CMatrix p = CMatrix::Zero(d, d);
  p(trap_index_, trap_index_) = 1.0;
  CMatrix excited = id;
  if (ground_offset_ > 0) excited(0, 0) = 0.0;
  const CMatrix coh = commutator_superoperator(h_).matrix();
  const CMatrix trap = anticommutator_superoperator(p, trap_rate_).matrix();
  const CMatrix loss = anticommutator_superoperator(excited, loss_rate_).matrix();

  std::vector<CMatrix> left, right;
  for (const auto& m : modes_) {
    CMatrix v = CMatrix::Zero(d, d);
    v(m.site + ground_offset_, m.site + ground_offset_) = 1.0;
    left.push_back(left_right_superoperator(v, id).matrix());
    right.push_back(left_right_superoperator(id, v).matrix());
  }

  using Triplet = Eigen::Triplet<cplx>;
  auto add_block = [d2](std::vector<Triplet>& out, Index row, Index col, const CMatrix& block, cplx scale) {
    for (Index c = 0; c < d2; ++c) {
      for (Index r = 0; r < d2; ++r) {
        const cplx v = scale * block(r, c);
        if (v != cplx(0.0)) out.emplace_back(row * d2 + r, col * d2 + c, v);
      }
    }
  };

  std::vector<Triplet> t_coh, t_dec, t_trap, t_loss;
  const std::size_t b = modes_.size();
  for (std::size_t i = 0; i < n_ados(); ++i) {
    const auto ii = static_cast<Index>(i);
    add_block(t_coh, ii, ii, coh, 1.0);
    add_block(t_trap, ii, ii, trap, 1.0);
    add_block(t_loss, ii, ii, loss, 1.0);
    if (damping_[i] != 0.0) {
      for (Index r = 0; r < d2; ++r) t_dec.emplace_back(ii * d2 + r, ii * d2 + r, -damping_[i]);
    }
    for (std::size_t k = 0; k < b; ++k) {
      const auto up = indices_.plus(i, static_cast<int>(k));
      const double a = plus_coef_[i * b + k];
      if (up >= 0 && a != 0.0) {
        add_block(t_dec, ii, up, left[k], -kI * a);
        add_block(t_dec, ii, up, right[k], kI * a);
      }
      const auto down = indices_.minus(i, static_cast<int>(k));
      const double m = minus_coef_[i * b + k];
      if (down >= 0 && m != 0.0) {
        add_block(t_dec, ii, down, left[k], -kI * modes_[k].c * m);
        add_block(t_dec, ii, down, right[k], kI * std::conj(modes_[k].c) * m);
      }
    }
  }
  auto build = [size](std::vector<Triplet>& t) {
    SparseC s(size, size);
    s.setFromTriplets(t.begin(), t.end());
    s.makeCompressed();
    return s;
  };
  return {build(t_coh), build(t_dec), build(t_trap), build(t_loss)};
}

std::vector<DensityMatrix> propagate_heom(const HeomGenerator& generator, const DensityMatrix& rho0,
                                          std::span<const double> grid, const OdeOptions& options,
                                          const HierarchyObserver& observer) {
  if (grid.empty()) return {};
  if (grid.front() != 0.0) throw ConfigError("time grid must start at 0");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) throw ConfigError("time grid must be strictly ascending");
  }
  CVector y = generator.embed(rho0);
  DormandPrince dp([&generator](const CVector& x, CVector& dx) { generator.apply(x, dx); }, options);
  std::vector<DensityMatrix> out{generator.physical(y)};
  if (observer) observer(grid[0], y);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    dp.integrate(y, grid[k - 1], grid[k]);
    out.push_back(generator.physical(y));
    if (observer) observer(grid[k], y);
  }
  return out;
}

}  // namespace exciton::heom
