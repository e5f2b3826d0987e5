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
#include "exciton/efficiency.hpp"

#include <cmath>
#include <memory>
#include <sstream>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "exciton/superoperator.hpp"

namespace exciton {

SparseC GeneratorParts::full() const {
  SparseC m = coherent + decoherence;
  m += trap;
  m += loss;
  m.makeCompressed();
  return m;
}

CVector GeneratorParts::embed(const CMatrix& rho) const {
  if (rho.rows() != dim || rho.cols() != dim) throw ConfigError("initial state has wrong dimension");
  CVector y = CVector::Zero(state_size);
  y.head(static_cast<Index>(dim) * dim) = vectorize(rho);
  return y;
}

CMatrix GeneratorParts::physical(const CVector& state) const {
  return devectorize(state.head(static_cast<Index>(dim) * dim), dim);
}

GeneratorParts redfield_parts(const redfield::LindbladModel& model) {
  GeneratorParts p;
  p.dim = model.dim;
  p.state_size = static_cast<Index>(model.dim) * model.dim;
  p.coherent = model.coherent.sparse();
  p.decoherence = model.decoherence.sparse();
  p.trap = model.trap.sparse();
  p.loss = model.loss.sparse();
  p.trap_index = model.trap_index;
  p.trap_rate = model.trap_rate;
  p.loss_rate = model.loss_rate;
  auto m = std::make_shared<const CMatrix>(model.full().matrix());
  p.apply = [m](const CVector& x, CVector& y) { y.noalias() = *m * x; };
  return p;
}

GeneratorParts heom_parts(const heom::HeomGenerator& generator) {
  auto parts = generator.assemble();
  GeneratorParts p;
  p.dim = generator.dim();
  p.state_size = generator.state_size();
  p.coherent = std::move(parts.coherent);
  p.decoherence = std::move(parts.decoherence);
  p.trap = std::move(parts.trap);
  p.loss = std::move(parts.loss);
  p.trap_index = generator.trap_index();
  p.trap_rate = generator.trap_rate();
  p.loss_rate = generator.loss_rate();
  auto g = std::make_shared<const heom::HeomGenerator>(generator);
  p.apply = [g](const CVector& x, CVector& y) { g->apply(x, y); };
  return p;
}

namespace {

Index diag_index(int i, int dim) { return static_cast<Index>(i) + static_cast<Index>(i) * dim; }

// Solves shared by the efficiency and its partition.
class Partition {
 public:
  Partition(const GeneratorParts& parts, const SolveOptions& options) : parts_(parts), full_(parts.full(), options) {}

  /// x = int_0^inf state dt = -M^-1 state0.
  CVector time_integral(const CMatrix& rho0) const { return -full_.solve(parts_.embed(rho0)); }

  double eta(const CVector& x) const {
    return 2.0 * parts_.trap_rate * x[diag_index(parts_.trap_index, parts_.dim)].real();
  }

  /// Tr{M_trap (M_trap + M_loss)^-1 y}. Trap and loss act blockwise, so only
  /// the physical block of y contributes.
  double trap_term(const CVector& y) {
    const Index d2 = static_cast<Index>(parts_.dim) * parts_.dim;
    if (!sink_) {
      if (!(parts_.trap_rate > 0.0) || !(parts_.loss_rate > 0.0)) {
        throw NumericalError("M_trap + M_loss is singular: efficiency contributions need kappa > 0 and Gamma > 0");
      }
      SparseC sink = (parts_.trap + parts_.loss).topLeftCorner(d2, d2);
      sink_ = std::make_unique<GeneratorSolver>(sink);
      trap_block_ = parts_.trap.topLeftCorner(d2, d2);
    }
    const CVector z = sink_->solve(y.head(d2));
    const CVector w = trap_block_ * z;
    cplx tr = 0.0;
    for (int m = 0; m < parts_.dim; ++m) tr += w[diag_index(m, parts_.dim)];
    return tr.real();
  }

  double condition() const { return full_.condition_estimate(); }

 private:
  const GeneratorParts& parts_;
  GeneratorSolver full_;
  std::unique_ptr<GeneratorSolver> sink_;
  SparseC trap_block_;
};

struct TimeDomain {
  double flux = 0.0;
  double coherence = 0.0;
  double cutoff_time = 0.0;
};

double trace_of(const CVector& y, int dim) {
  double tr = 0.0;
  for (int m = 0; m < dim; ++m) tr += y[diag_index(m, dim)].real();
  return tr;
}

// Integrates the state together with two accumulators: trapped flux and
// off-diagonal magnitude. Stops when the trace falls below the floor.
TimeDomain integrate_time_domain(const GeneratorParts& parts, const CMatrix& rho0, const EfficiencyOptions& options,
                                 double stop_trace) {
  const Index n = parts.state_size;
  const int dim = parts.dim;
  const Index d2 = static_cast<Index>(dim) * dim;
  const Index t_idx = diag_index(parts.trap_index, dim);
  const bool rotate = options.coherence_basis.size() > 0;
  if (rotate && (options.coherence_basis.rows() != dim || options.coherence_basis.cols() != dim)) {
    throw ConfigError("coherence basis has wrong dimension");
  }
  const CMatrix basis = options.coherence_basis;

  auto offdiag = [&](const CVector& y) {
    CMatrix rho = devectorize(y.head(d2), dim);
    if (rotate) rho = basis.adjoint() * rho * basis;
    double s = 0.0;
    for (int c = 0; c < dim; ++c) {
      for (int r = 0; r < dim; ++r) {
        if (r != c) s += std::abs(rho(r, c));
      }
    }
    return s;
  };

  CVector in(n), out(n);
  Rhs rhs = [&](const CVector& y, CVector& dy) {
    in = y.head(n);
    parts.apply(in, out);
    dy.resize(n + 2);
    dy.head(n) = out;
    dy[n] = 2.0 * parts.trap_rate * y[t_idx].real();
    dy[n + 1] = offdiag(y);
  };

  CVector y = CVector::Zero(n + 2);
  y.head(n) = parts.embed(rho0);

  TimeDomain result;
  const double cut = options.coherence_trace_cutoff;
  double t_prev = 0.0;
  double tr_prev = trace_of(y, dim);
  double coh_prev = 0.0;
  bool cut_found = tr_prev <= cut;
  bool done = false;
  auto observer = [&](double t, const CVector& s) {
    const double tr = trace_of(s, dim);
    const double coh = s[n + 1].real();
    if (!cut_found && tr <= cut) {
      // Trace decays exponentially between samples; interpolate in log(trace).
      double f = 1.0;
      if (tr > 0.0 && tr_prev > tr) f = std::log(tr_prev / cut) / std::log(tr_prev / tr);
      result.cutoff_time = t_prev + f * (t - t_prev);
      result.coherence = coh_prev + f * (coh - coh_prev);
      cut_found = true;
    }
    t_prev = t;
    tr_prev = tr;
    coh_prev = coh;
    if (tr <= stop_trace) {
      done = true;
      return false;
    }
    return true;
  };
  DormandPrince dp(rhs, options.ode);
  dp.integrate(y, 0.0, options.horizon_fs, observer);
  if (!done) {
    std::ostringstream msg;
    msg << "trace did not fall below " << stop_trace << " within " << options.horizon_fs
        << " fs (current trace " << trace_of(y, dim) << ")";
    throw NumericalError(msg.str());
  }
  result.flux = y[n].real();
  return result;
}

}  // namespace

double efficiency(const GeneratorParts& parts, const CMatrix& rho0, const SolveOptions& options) {
  if (parts.trap_rate == 0.0) return 0.0;
  Partition p(parts, options);
  return p.eta(p.time_integral(rho0));
}

double efficiency_quadrature(const GeneratorParts& parts, const CMatrix& rho0, const EfficiencyOptions& options) {
  if (parts.trap_rate == 0.0) return 0.0;
  return integrate_time_domain(parts, rho0, options, options.trace_floor).flux;
}

double contribution(const SparseC& part, const GeneratorParts& parts, const CMatrix& rho0,
                    const SolveOptions& options) {
  Partition p(parts, options);
  const CVector x = p.time_integral(rho0);
  return p.trap_term(part * x);
}

EfficiencyReport efficiency_report(const GeneratorParts& parts, const CMatrix& rho0,
                                   const EfficiencyOptions& options) {
  EfficiencyReport r;
  Partition p(parts, options.solve);
  const CVector x = p.time_integral(rho0);
  r.eta = p.eta(x);
  r.condition = p.condition();
  r.eta_quadrature = efficiency_quadrature(parts, rho0, options);
  r.eta_H = p.trap_term(parts.coherent * x);
  r.eta_decoherence = p.trap_term(parts.decoherence * x);
  r.residual = r.eta - (r.eta_H + r.eta_decoherence);
  r.eta_dyn = r.eta_H - r.eta_init;
  return r;
}

CMatrix no_jump_hamiltonian(const redfield::LindbladModel& model) {
  CMatrix h = model.hamiltonian;
  for (const auto& j : model.jumps) h -= 0.5 * kI * j.rate * (j.op.adjoint() * j.op);
  h(model.trap_index, model.trap_index) -= kI * model.trap_rate;
  for (int m = model.ground_offset; m < model.dim; ++m) h(m, m) -= kI * model.loss_rate;
  return h;
}

double initial_state_contribution(const redfield::LindbladModel& model, const CVector& psi,
                                  const EfficiencyOptions& options) {
  const Index n = model.dim;
  if (psi.size() != n) throw ConfigError("initial state has wrong dimension");
  if (model.trap_rate == 0.0) return 0.0;
  const CMatrix a = -kI * no_jump_hamiltonian(model);
  const int t = model.trap_index;
  const double kappa = model.trap_rate;
  Rhs rhs = [&](const CVector& y, CVector& dy) {
    dy.resize(n + 1);
    dy.head(n).noalias() = a * y.head(n);
    dy[n] = 2.0 * kappa * std::norm(y[t]);
  };
  CVector y = CVector::Zero(n + 1);
  y.head(n) = psi;
  bool done = false;
  auto observer = [&](double, const CVector& s) {
    done = s.head(n).squaredNorm() <= options.trace_floor;
    return !done;
  };
  DormandPrince dp(rhs, options.ode);
  dp.integrate(y, 0.0, options.horizon_fs, observer);
  if (!done) throw NumericalError("no-jump norm did not decay within the horizon");
  return y[n].real();
}

double initial_state_contribution(const redfield::LindbladModel& model, const CMatrix& rho0,
                                  const EfficiencyOptions& options) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho0 + rho0.adjoint()));
  const double top = es.eigenvalues().maxCoeff();
  const double rest = es.eigenvalues().sum() - top;
  if (std::abs(rest) > 1e-10 || std::abs(top - rho0.trace().real()) > 1e-10) {
    throw ConfigError("no-jump contribution needs a pure initial state; pass mixtures as weighted pure components");
  }
  const CVector psi = es.eigenvectors().col(es.eigenvalues().size() - 1) * std::sqrt(top);
  return initial_state_contribution(model, psi, options);
}

double initial_state_contribution(const redfield::LindbladModel& model,
                                  const std::vector<std::pair<double, CVector>>& mixture,
                                  const EfficiencyOptions& options) {
  double total = 0.0;
  for (const auto& [w, psi] : mixture) {
    if (w < 0.0) throw ConfigError("mixture weights must be >= 0");
    total += w * initial_state_contribution(model, psi, options);
  }
  return total;
}

std::pair<double, double> coherence_integral(const GeneratorParts& parts, const CMatrix& rho0,
                                             const EfficiencyOptions& options) {
  const auto td = integrate_time_domain(parts, rho0, options, options.coherence_trace_cutoff);
  return {td.coherence, td.cutoff_time};
}

CoherenceReport integrated_coherence(const GeneratorParts& parts, const CMatrix& rho0, const ExcitonSystem& system,
                                     const EfficiencyOptions& options) {
  CoherenceReport r;
  std::tie(r.C, r.cutoff_time) = coherence_integral(parts, rho0, options);
  if (system.reorganization_cm == 0.0) {
    r.C_zero = r.C;
    r.C_normalized = 1.0;
    return r;
  }
  ExcitonSystem reference = system;
  reference.reorganization_cm = 0.0;
  const auto model = redfield::build_redfield_generator(reference);
  r.C_zero = coherence_integral(redfield_parts(model), rho0, options).first;
  if (!(r.C_zero > 0.0)) throw NumericalError("coherent reference has no coherence; C/C(0) undefined");
  r.C_normalized = r.C / r.C_zero;
  return r;
}

double concurrence(const CMatrix& rho) {
  if (rho.rows() < 2 || rho.cols() < 2) throw ConfigError("concurrence needs a dimer state");
  return 2.0 * std::abs(rho(0, 1));
}

}  // namespace exciton
