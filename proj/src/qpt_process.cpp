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
#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "exciton/hamiltonian.hpp"
#include "exciton/qpt.hpp"
#include "exciton/superoperator.hpp"

namespace exciton::qpt {

bool ProcessTensor::complete() const {
  return std::all_of(known.begin(), known.end(), [](bool k) { return k; });
}

ProcessTensor ProcessTensor::zero(double T) {
  ProcessTensor x;
  x.T = T;
  x.known.fill(true);
  return x;
}

ProcessTensor ProcessTensor::identity(double T) {
  ProcessTensor x = zero(T);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) x(a, b, a, b) = 1.0;
  }
  return x;
}

CMatrix ProcessTensor::apply(const CMatrix& rho) const {
  if (rho.rows() != 3 || rho.cols() != 3) throw ConfigError("process tensor acts on 3x3 states");
  CMatrix out = CMatrix::Zero(3, 3);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (int c = 0; c < 3; ++c) {
        for (int d = 0; d < 3; ++d) out(a, b) += (*this)(a, b, c, d) * rho(c, d);
      }
    }
  }
  return out;
}

CMatrix ProcessTensor::choi() const {
  CMatrix m(9, 9);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (int c = 0; c < 3; ++c) {
        for (int d = 0; d < 3; ++d) m(c * 3 + a, d * 3 + b) = (*this)(a, b, c, d);
      }
    }
  }
  return m;
}

ProcessTensor operator+(const ProcessTensor& x, const ProcessTensor& y) {
  ProcessTensor z = x;
  for (std::size_t i = 0; i < z.chi.size(); ++i) {
    z.chi[i] += y.chi[i];
    z.known[i] = x.known[i] && y.known[i];
  }
  return z;
}

ProcessTensor operator*(double s, const ProcessTensor& x) {
  ProcessTensor z = x;
  for (auto& v : z.chi) v *= s;
  return z;
}

std::vector<ProcessTensor> chi_from_map(const ChannelMap& map, const CMatrix& frame, std::span<const double> times) {
  if (frame.rows() != frame.cols() || frame.cols() != 3) throw ConfigError("exciton frame must be 3x3");
  // Hermitian spanning set of 3x3 matrices, in the {g, alpha, beta} basis.
  std::vector<CMatrix> probes;
  for (int a = 0; a < 3; ++a) {
    CMatrix p = CMatrix::Zero(3, 3);
    p(a, a) = 1.0;
    probes.push_back(p);
  }
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      CMatrix x = CMatrix::Zero(3, 3);
      x(a, b) = x(b, a) = 1.0;
      CMatrix y = CMatrix::Zero(3, 3);
      y(a, b) = -kI;
      y(b, a) = kI;
      probes.push_back(x);
      probes.push_back(y);
    }
  }
  CMatrix in(9, 9);
  for (int s = 0; s < 9; ++s) in.col(s) = vectorize(probes[s]);
  Eigen::PartialPivLU<CMatrix> lu(in);
  if (lu.rcond() < 1e-12) throw NumericalError("process tomography spanning set is ill-conditioned");

  std::vector<CMatrix> outputs(times.size(), CMatrix(9, 9));
  for (int s = 0; s < 9; ++s) {
    const auto traj = map(frame * probes[s] * frame.adjoint());
    if (traj.size() != times.size()) throw NumericalError("channel map returned the wrong number of samples");
    for (std::size_t k = 0; k < times.size(); ++k) outputs[k].col(s) = vectorize(frame.adjoint() * traj[k] * frame);
  }
  std::vector<ProcessTensor> out;
  const CMatrix in_inv = lu.inverse();
  for (std::size_t k = 0; k < times.size(); ++k) {
    const CMatrix x = outputs[k] * in_inv;  // x((a,b), (c,d)) = chi_abcd
    ProcessTensor chi = ProcessTensor::zero(times[k]);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        for (int c = 0; c < 3; ++c) {
          for (int d = 0; d < 3; ++d) chi(a, b, c, d) = x(a + 3 * b, c + 3 * d);
        }
      }
    }
    out.push_back(chi);
  }
  return out;
}

CMatrix exciton_frame(const ExcitonSystem& system) {
  if (system.n_sites() != 2) throw ConfigError("process tomography needs a two-site system");
  const ExcitonBasis basis = diagonalize(build_hamiltonian(system));
  CMatrix f = CMatrix::Zero(3, 3);
  f(0, G) = 1.0;
  f.block(1, A, 2, 1) = basis.vectors.col(1);
  f.block(1, B, 2, 1) = basis.vectors.col(0);
  return f;
}

namespace {

ExcitonSystem closed_system(const ExcitonSystem& system) {
  ExcitonSystem s = system;
  s.trap_rate_per_fs = 0.0;
  s.loss_rate_per_fs = 0.0;
  return s;
}

// Propagation grids must start at 0; returns the grid and where the requested times sit.
std::pair<std::vector<double>, std::size_t> grid_from_origin(std::span<const double> times) {
  std::vector<double> grid(times.begin(), times.end());
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) throw ConfigError("waiting times must be strictly ascending");
  }
  if (grid.empty()) return {grid, 0};
  if (grid.front() < 0.0) throw ConfigError("waiting times must be >= 0");
  if (grid.front() > 0.0) {
    grid.insert(grid.begin(), 0.0);
    return {grid, 1};
  }
  return {grid, 0};
}

}  // namespace

std::vector<ProcessTensor> chi_redfield(const ExcitonSystem& system, std::span<const double> times) {
  const auto model = redfield::build_redfield_generator(closed_system(system), {.with_ground_state = true});
  const Superoperator m = model.full();
  const auto [grid, skip] = grid_from_origin(times);
  ChannelMap map = [&m, &grid, skip](const CMatrix& rho0) {
    auto traj = redfield::propagate_expm(m, rho0, grid);
    traj.erase(traj.begin(), traj.begin() + static_cast<std::ptrdiff_t>(skip));
    return traj;
  };
  return chi_from_map(map, exciton_frame(system), times);
}

std::vector<ProcessTensor> chi_heom(const ExcitonSystem& system, const heom::HeomOptions& options,
                                    std::span<const double> times, const OdeOptions& ode) {
  heom::HeomOptions opts = options;
  opts.with_ground_state = true;
  const heom::HeomGenerator gen(closed_system(system), opts);
  const auto [grid, skip] = grid_from_origin(times);
  ChannelMap map = [&gen, &grid, skip, &ode](const CMatrix& rho0) {
    auto traj = heom::propagate_heom(gen, rho0, grid, ode);
    traj.erase(traj.begin(), traj.begin() + static_cast<std::ptrdiff_t>(skip));
    return traj;
  };
  return chi_from_map(map, exciton_frame(system), times);
}

bool ProcessValidation::ok(double tol) const {
  return hermiticity_residual <= tol && trace_residual <= tol && choi_min_eigenvalue >= -tol &&
         identity_residual <= tol;
}

ProcessValidation validate_process(const ProcessTensor& chi) {
  ProcessValidation v;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (int c = 0; c < 3; ++c) {
        for (int d = 0; d < 3; ++d) {
          if (chi.is_known(a, b, c, d) && chi.is_known(b, a, d, c)) {
            v.hermiticity_residual =
                std::max(v.hermiticity_residual, std::abs(chi(a, b, c, d) - std::conj(chi(b, a, d, c))));
          }
        }
      }
    }
  }
  for (int c = 0; c < 3; ++c) {
    for (int d = 0; d < 3; ++d) {
      if (!(chi.is_known(G, G, c, d) && chi.is_known(A, A, c, d) && chi.is_known(B, B, c, d))) continue;
      const cplx tr = chi(G, G, c, d) + chi(A, A, c, d) + chi(B, B, c, d) - (c == d ? 1.0 : 0.0);
      v.trace_residual = std::max(v.trace_residual, std::abs(tr));
      if (c == A && d == A) v.trace_residual_alpha = std::abs(tr);
      if (c == B && d == B) v.trace_residual_beta = std::abs(tr);
    }
  }
  v.identity_residual = 0.0;
  if (chi.T == 0.0) {
    const ProcessTensor id = ProcessTensor::identity();
    for (std::size_t i = 0; i < chi.chi.size(); ++i) {
      if (chi.known[i]) v.identity_residual = std::max(v.identity_residual, std::abs(chi.chi[i] - id.chi[i]));
    }
  }
  ProcessTensor filled = chi;
  for (std::size_t i = 0; i < filled.chi.size(); ++i) {
    if (!filled.known[i]) filled.chi[i] = 0.0;
  }
  CMatrix choi = filled.choi();
  choi = 0.5 * (choi + choi.adjoint()).eval();
  if (!chi.complete()) {
    v.choi_restricted = true;
    choi = choi.bottomRightCorner(6, 6).eval();  // inputs c in {alpha, beta}
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(choi, Eigen::EigenvaluesOnly);
  v.choi_min_eigenvalue = es.eigenvalues().minCoeff();
  return v;
}

}  // namespace exciton::qpt
