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
#include "exciton/redfield.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "exciton/units.hpp"

namespace exciton::redfield {

double DrudeBath::lambda() const { return wavenumber_to_angular(reorganization_cm); }
double DrudeBath::kT() const { return wavenumber_to_angular(thermal_energy_cm(temperature_K)); }

void DrudeBath::validate() const {
  if (!(reorganization_cm >= 0.0)) throw ConfigError("bath reorganization energy must be >= 0");
  if (!(gamma > 0.0)) throw ConfigError("bath correlation rate must be > 0");
  if (!(temperature_K > 0.0)) throw ConfigError("bath temperature must be > 0");
}

double drude_spectral_density(double omega, const DrudeBath& bath) {
  const double g = bath.gamma;
  return 2.0 * bath.lambda() * g * omega / (kPi * (omega * omega + g * g));
}

double bose_einstein(double omega, double kT) { return 1.0 / std::expm1(omega / kT); }

double LindbladModel::rate(int from, int to) const {
  for (const auto& ch : relaxation) {
    if (ch.from == from && ch.to == to) return ch.rate;
  }
  return 0.0;
}

std::pair<Superoperator, Superoperator> build_trap_loss(const ExcitonSystem& system, int ground_offset) {
  const int dim = system.n_sites() + ground_offset;
  CMatrix p = CMatrix::Zero(dim, dim);
  p(system.trap_site + ground_offset, system.trap_site + ground_offset) = 1.0;
  CMatrix excited = CMatrix::Identity(dim, dim);
  if (ground_offset > 0) excited(0, 0) = 0.0;
  return {anticommutator_superoperator(p, system.trap_rate_per_fs),
          anticommutator_superoperator(excited, system.loss_rate_per_fs)};
}

LindbladModel build_redfield_generator(const ExcitonSystem& system, const RedfieldOptions& options) {
  system.validate();
  const DrudeBath bath = DrudeBath::from_system(system);
  const int n = system.n_sites();
  const int off = options.with_ground_state ? 1 : 0;
  const int dim = n + off;

  LindbladModel model;
  model.basis = diagonalize(build_hamiltonian(system));
  model.dim = dim;
  model.ground_offset = off;
  model.trap_index = system.trap_site + off;
  model.trap_rate = system.trap_rate_per_fs;
  model.loss_rate = system.loss_rate_per_fs;

  if (bath.lambda() > 0.0 && model.basis.degenerate()) {
    const auto [a, b] = model.basis.degenerate_pairs.front();
    std::ostringstream msg;
    msg << "degenerate exciton pair (" << a << ", " << b << ") at E = " << model.basis.energies(a)
        << " cm^-1: secular approximation is ill-defined";
    throw NumericalError(msg.str());
  }

  model.hamiltonian = CMatrix::Zero(dim, dim);
  model.hamiltonian.bottomRightCorner(n, n) = build_hamiltonian(system) * wavenumber_to_angular(1.0);
  model.coherent = commutator_superoperator(model.hamiltonian);

  // Exciton eigenvectors embedded in the state space.
  CMatrix vecs = CMatrix::Zero(dim, n);
  vecs.bottomRows(n) = model.basis.vectors;
  const RVector energies = model.basis.energies.unaryExpr([](double e) { return wavenumber_to_angular(e); });
  const RMatrix weights = model.basis.vectors.cwiseAbs2();  // (site, exciton)

  model.decoherence = Superoperator::zero(dim);
  const double kT = bath.kT();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const double w = energies(a) - energies(b);
      const double overlap = weights.col(a).dot(weights.col(b));
      const double wabs = std::abs(w);
      const double occupation = w > 0.0 ? bose_einstein(wabs, kT) + 1.0 : bose_einstein(wabs, kT);
      const double rate = 2.0 * kPi * drude_spectral_density(wabs, bath) * occupation * overlap;
      model.relaxation.push_back({a, b, rate});
      if (rate > 0.0) {
        CMatrix l = vecs.col(b) * vecs.col(a).adjoint();
        model.decoherence += lindblad_dissipator(l, rate);
        model.jumps.push_back({std::move(l), rate});
      }
    }
  }
  // lim_{w->0} 2 pi J(w) (n(w) + 1) = 2 pi kT J'(0) = 4 lambda kT / gamma.
  const double zero_frequency = 4.0 * bath.lambda() * kT / bath.gamma;
  if (options.dephasing == DephasingModel::exciton) {
    for (int a = 0; a < n; ++a) {
      const double rate = zero_frequency * weights.col(a).array().square().sum();
      model.dephasing.push_back({a, rate});
      if (rate > 0.0) {
        CMatrix l = vecs.col(a) * vecs.col(a).adjoint();
        model.decoherence += lindblad_dissipator(l, rate);
        model.jumps.push_back({std::move(l), rate});
      }
    }
  } else {
    for (int m = 0; m < n; ++m) {
      model.dephasing.push_back({m, zero_frequency});
      if (zero_frequency > 0.0) {
        CMatrix l = vecs * weights.row(m).transpose().cast<cplx>().asDiagonal() * vecs.adjoint();
        model.decoherence += lindblad_dissipator(l, zero_frequency);
        model.jumps.push_back({std::move(l), zero_frequency});
      }
    }
  }

  auto [trap, loss] = build_trap_loss(system, off);
  model.trap = std::move(trap);
  model.loss = std::move(loss);
  return model;
}

std::vector<DensityMatrix> propagate(const Superoperator& generator, const DensityMatrix& rho0,
                                     std::span<const double> grid, const OdeOptions& options) {
  if (grid.empty()) return {};
  if (grid.front() != 0.0) throw ConfigError("time grid must start at 0");
  const int n = generator.dim();
  const CMatrix& m = generator.matrix();
  Rhs rhs = [&m](const CVector& y, CVector& dy) { dy.noalias() = m * y; };
  const auto states = integrate_to_grid(rhs, vectorize(rho0), grid, options);
  std::vector<DensityMatrix> out;
  out.reserve(states.size());
  for (const auto& v : states) out.push_back(devectorize(v, n));
  return out;
}

std::vector<DensityMatrix> propagate_expm(const Superoperator& generator, const DensityMatrix& rho0,
                                          std::span<const double> grid) {
  if (grid.empty()) return {};
  if (grid.front() != 0.0) throw ConfigError("time grid must start at 0");
  const int n = generator.dim();
  std::map<double, CMatrix> cache;
  std::vector<DensityMatrix> out{rho0};
  CVector v = vectorize(rho0);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double dt = grid[k] - grid[k - 1];
    if (!(dt > 0.0)) throw ConfigError("time grid must be strictly ascending");
    auto it = cache.find(dt);
    if (it == cache.end()) it = cache.emplace(dt, CMatrix((generator.matrix() * dt).exp())).first;
    v = it->second * v;
    out.push_back(devectorize(v, n));
  }
  return out;
}

}  // namespace exciton::redfield
