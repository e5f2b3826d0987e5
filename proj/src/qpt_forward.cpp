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
#include <cmath>

#include "exciton/hamiltonian.hpp"
#include "exciton/qpt.hpp"
#include "exciton/units.hpp"

namespace exciton::qpt {

const char* level_name(int level) {
  switch (level) {
    case G:
      return "g";
    case A:
      return "a";
    case B:
      return "b";
  }
  return "?";
}

DimerLevelSystem dimer_level_system(const ExcitonSystem& system, double optical_dephasing_fs) {
  if (system.n_sites() != 2) throw ConfigError("process tomography needs a two-site system");
  if (system.dipoles.size() != 2) throw ConfigError("process tomography needs both site dipoles");
  if (!(optical_dephasing_fs > 0.0)) throw ConfigError("optical dephasing time must be > 0");
  const ExcitonBasis basis = diagonalize(build_hamiltonian(system));
  if (basis.degenerate()) throw NumericalError("degenerate dimer excitons: alpha and beta are not defined");
  // Ascending energies: beta is the lower exciton.
  const RVector cb = basis.vectors.col(0).real();
  const RVector ca = basis.vectors.col(1).real();
  const auto& mu = system.dipoles;
  DimerLevelSystem d;
  d.omega_beta = basis.energies(0);
  d.omega_alpha = basis.energies(1);
  d.mu_ag = ca(0) * mu[0] + ca(1) * mu[1];
  d.mu_bg = cb(0) * mu[0] + cb(1) * mu[1];
  d.mu_fa = ca(0) * mu[1] + ca(1) * mu[0];
  d.mu_fb = cb(0) * mu[1] + cb(1) * mu[0];
  const double g = 1.0 / optical_dephasing_fs;
  d.gamma_ga = d.gamma_gb = d.gamma_ag = d.gamma_bg = d.gamma_fa = d.gamma_fb = g;
  return d;
}

cplx pulse_coefficient(const Pulse& pulse, double omega_pg_cm) {
  if (!(pulse.sigma_fs > 0.0)) throw ConfigError("pulse width must be > 0");
  const double s = pulse.sigma_fs;
  const double delta = wavenumber_to_angular(omega_pg_cm - pulse.carrier_cm);
  return -(pulse.strength / kI) * std::sqrt(2.0 * kPi * s * s) * std::exp(-0.5 * s * s * delta * delta);
}

double isotropic_average(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
                         const Eigen::Vector3d& d, const Eigen::Vector3d& e1, const Eigen::Vector3d& e2,
                         const Eigen::Vector3d& e3, const Eigen::Vector3d& e4) {
  const double ab_cd = a.dot(b) * c.dot(d);
  const double ac_bd = a.dot(c) * b.dot(d);
  const double ad_bc = a.dot(d) * b.dot(c);
  const double f12 = e1.dot(e2) * e3.dot(e4);
  const double f13 = e1.dot(e3) * e2.dot(e4);
  const double f14 = e1.dot(e4) * e2.dot(e3);
  return (f12 * (4.0 * ab_cd - ac_bd - ad_bc) + f13 * (-ab_cd + 4.0 * ac_bd - ad_bc) +
          f14 * (-ab_cd - ac_bd + 4.0 * ad_bc)) /
         30.0;
}

double isotropic_average_xxxx(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
                              const Eigen::Vector3d& d) {
  return (a.dot(b) * c.dot(d) + a.dot(c) * b.dot(d) + a.dot(d) * b.dot(c)) / 15.0;
}

namespace {

int other(int p) { return p == A ? B : A; }

struct PeakContext {
  const DimerLevelSystem& sys;
  const std::array<Pulse, 4>& pulses;
  std::array<std::array<cplx, 3>, 3> coef{};  // coef[pulse][level]

  PeakContext(const DimerLevelSystem& s, const std::array<Pulse, 4>& p) : sys(s), pulses(p) {
    for (int i = 0; i < 3; ++i) {
      coef[i][A] = pulse_coefficient(p[i], s.omega_alpha);
      coef[i][B] = pulse_coefficient(p[i], s.omega_beta);
    }
  }

  double avg(const Eigen::Vector3d& m1, const Eigen::Vector3d& m2, const Eigen::Vector3d& m3,
             const Eigen::Vector3d& m4) const {
    return isotropic_average(m1, m2, m3, m4, pulses[0].polarization, pulses[1].polarization, pulses[2].polarization,
                             pulses[3].polarization);
  }

  // One prefactor block: preparation (p1 = P at pulse 1, p2 at pulse 2) acting on
  // input (c, d) = (p2, P), detected at Q.
  cplx block(const ProcessTensor& chi, int P, int p2, int Q) const {
    const int Qb = other(Q);
    const int c = p2;
    const int d = P;
    const auto& m1 = sys.mu_g(P);
    const auto& m2 = sys.mu_g(p2);
    const double bleach = (c == d) ? 1.0 : 0.0;
    const cplx same = coef[2][Q] * (avg(m1, m2, sys.mu_g(Q), sys.mu_g(Q)) * (chi(G, G, c, d) - bleach - chi(Q, Q, c, d)) +
                                    avg(m1, m2, sys.mu_f(Qb), sys.mu_f(Qb)) * chi(Qb, Qb, c, d));
    const cplx cross = coef[2][Qb] * ((avg(m1, m2, sys.mu_f(Q), sys.mu_f(Qb)) - avg(m1, m2, sys.mu_g(Qb), sys.mu_g(Q))) *
                                      chi(Q, Qb, c, d));
    return -coef[0][P] * coef[1][p2] * (same + cross);
  }

  cplx peak(const ProcessTensor& chi, int P, int Q) const { return block(chi, P, P, Q) + block(chi, P, other(P), Q); }
};

}  // namespace

PeakAmplitudeSet synthesize_peaks(const ProcessTensor& chi, const DimerLevelSystem& system,
                                  const std::array<Pulse, 4>& pulses) {
  PeakContext ctx(system, pulses);
  PeakAmplitudeSet out;
  out.pulses = pulses;
  for (std::size_t k = 0; k < kPeakOrder.size(); ++k) out.peaks[k] = ctx.peak(chi, kPeakOrder[k].first, kPeakOrder[k].second);
  return out;
}

cplx reduced_alpha_alpha_peak(const ProcessTensor& chi, const DimerLevelSystem& system,
                              const std::array<Pulse, 4>& pulses) {
  PeakContext ctx(system, pulses);
  const auto& s = system;
  const double dip = ctx.avg(s.mu_ag, s.mu_ag, s.mu_fa, s.mu_fb) - ctx.avg(s.mu_ag, s.mu_ag, s.mu_bg, s.mu_ag);
  return -ctx.coef[0][A] * ctx.coef[1][A] * ctx.coef[2][B] * dip * chi(A, B, A, A);
}

cplx unscaled_peak(const DimerLevelSystem& system, int p, int q, cplx rescaled) {
  const double gp = p == A ? system.gamma_ga : system.gamma_gb;
  const double gq = q == A ? system.gamma_ag : system.gamma_bg;
  return rescaled / (gp * gq);
}

std::vector<std::array<Pulse, 4>> waveform_experiments(const DimerLevelSystem& system, double sigma_fs) {
  std::vector<std::array<Pulse, 4>> out;
  const double mid = 0.5 * (system.omega_alpha + system.omega_beta);
  for (int k = 0; k < 8; ++k) {
    std::array<Pulse, 4> p;
    for (int i = 0; i < 3; ++i) {
      const bool beta = (k >> (2 - i)) & 1;
      p[i].carrier_cm = beta ? system.omega_beta : system.omega_alpha;
      p[i].sigma_fs = sigma_fs;
    }
    p[3].carrier_cm = mid;
    p[3].sigma_fs = sigma_fs;
    out.push_back(p);
  }
  return out;
}

std::array<Pulse, 4> narrowband_experiment(const DimerLevelSystem& system, double sigma_fs) {
  std::array<Pulse, 4> p;
  p[0].carrier_cm = system.omega_alpha;
  p[1].carrier_cm = system.omega_alpha;
  p[2].carrier_cm = system.omega_beta;
  p[3].carrier_cm = 0.5 * (system.omega_alpha + system.omega_beta);
  for (auto& x : p) x.sigma_fs = sigma_fs;
  return p;
}

}  // namespace exciton::qpt
