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

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Geometry>

#include "exciton/heom.hpp"
#include "exciton/redfield.hpp"
#include "exciton/system.hpp"
#include "exciton/types.hpp"

namespace exciton::qpt {

/// Level labels of the single-exciton dimer manifold: ground, upper exciton
/// alpha and lower exciton beta.
enum Level : int { G = 0, A = 1, B = 2 };
const char* level_name(int level);

struct DimerLevelSystem {
  double omega_alpha = 0.0;  // cm^-1, relative to the ground state
  double omega_beta = 0.0;
  Eigen::Vector3d mu_ag, mu_bg, mu_fa, mu_fb;
  /// Optical dephasing rates (fs^-1) for the rescaling S~ = Gamma_gp Gamma_qg S.
  double gamma_ga = 0.01, gamma_gb = 0.01, gamma_ag = 0.01, gamma_bg = 0.01, gamma_fa = 0.01, gamma_fb = 0.01;

  double omega_f() const { return omega_alpha + omega_beta; }
  const Eigen::Vector3d& mu_g(int p) const { return p == A ? mu_ag : mu_bg; }
  const Eigen::Vector3d& mu_f(int p) const { return p == A ? mu_fa : mu_fb; }
  double omega(int p) const { return p == A ? omega_alpha : omega_beta; }
};

/// Exciton energies and transition dipoles of a two-site system. mu_pg =
/// sum_m c_m^p mu_m; the biexciton |f> = |1>|2> gives mu_fp = c_1^p mu_2 + c_2^p mu_1.
DimerLevelSystem dimer_level_system(const ExcitonSystem& system, double optical_dephasing_fs = 100.0);

struct Pulse {
  double carrier_cm = 0.0;
  double sigma_fs = 100.0;
  double strength = 1.0;
  Eigen::Vector3d polarization = Eigen::Vector3d::UnitX();
};

/// C = -(Lambda / i) sqrt(2 pi sigma^2) exp(-sigma^2 (w_pg - w_i)^2 / 2), detuning in rad/fs.
cplx pulse_coefficient(const Pulse& pulse, double omega_pg_cm);

/// Rotational average of (a.e1)(b.e2)(c.e3)(d.e4) over an isotropic ensemble.
double isotropic_average(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
                         const Eigen::Vector3d& d, const Eigen::Vector3d& e1, const Eigen::Vector3d& e2,
                         const Eigen::Vector3d& e3, const Eigen::Vector3d& e4);

/// All polarizations parallel: (1/15)[(a.b)(c.d) + (a.c)(b.d) + (a.d)(b.c)].
double isotropic_average_xxxx(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
                              const Eigen::Vector3d& d);

/// chi_abcd(T) with rho_ab(T) = sum_cd chi_abcd rho_cd(0), a..d in {g, alpha, beta}.
/// `known` marks entries that carry information (all of them for generated
/// tensors; the inverted subset after tomography).
struct ProcessTensor {
  double T = 0.0;
  std::array<cplx, 81> chi{};
  std::array<bool, 81> known{};

  static int flat(int a, int b, int c, int d) { return ((a * 3 + b) * 3 + c) * 3 + d; }
  cplx& operator()(int a, int b, int c, int d) { return chi[flat(a, b, c, d)]; }
  cplx operator()(int a, int b, int c, int d) const { return chi[flat(a, b, c, d)]; }
  bool is_known(int a, int b, int c, int d) const { return known[flat(a, b, c, d)]; }
  bool complete() const;

  static ProcessTensor identity(double T = 0.0);
  static ProcessTensor zero(double T = 0.0);
  /// Applies the map to a 3x3 density matrix in the {g, alpha, beta} basis.
  CMatrix apply(const CMatrix& rho) const;
  /// Choi matrix, entry ((c,a),(d,b)) = chi_abcd.
  CMatrix choi() const;
};

ProcessTensor operator+(const ProcessTensor& x, const ProcessTensor& y);
ProcessTensor operator*(double s, const ProcessTensor& x);

/// Propagates a 3x3 state (generator basis) to one or more times.
using ChannelMap = std::function<std::vector<CMatrix>(const CMatrix& rho0)>;

/// chi(T) on `times` from a linear map, probed with the Hermitian spanning set
/// {|a><a|, |a><b| + |b><a|, i(|b><a| - |a><b|)}. `frame` holds the {g, alpha,
/// beta} states (columns) in the generator basis.
std::vector<ProcessTensor> chi_from_map(const ChannelMap& map, const CMatrix& frame, std::span<const double> times);

/// Columns: |g>, |alpha>, |beta> in the site basis with the ground state prepended.
CMatrix exciton_frame(const ExcitonSystem& system);

/// Secular Redfield with ground state, no trap or loss; matrix exponential propagation.
std::vector<ProcessTensor> chi_redfield(const ExcitonSystem& system, std::span<const double> times);

/// HEOM with ground state, no trap or loss.
std::vector<ProcessTensor> chi_heom(const ExcitonSystem& system, const heom::HeomOptions& options,
                                    std::span<const double> times, const OdeOptions& ode = {});

struct ProcessValidation {
  double hermiticity_residual = 0.0;
  double trace_residual = 0.0;        // max over known inputs of |sum_a chi_aacd - delta_cd|
  double trace_residual_alpha = 0.0;  // chi_gg_aa + chi_aa_aa + chi_bb_aa - 1
  double trace_residual_beta = 0.0;
  double choi_min_eigenvalue = 0.0;
  double identity_residual = -1.0;  // only when T == 0
  bool choi_restricted = false;     // exciton-input block only (incomplete tensor)
  bool ok(double tol = 1e-8) const;
};

/// Report-only checks. Unknown entries of an incomplete tensor are treated as
/// zero and the Choi test is restricted to the exciton-input block.
ProcessValidation validate_process(const ProcessTensor& chi);

/// The four rescaled peaks (w_tau, w_t) = (a,a), (a,b), (b,a), (b,b).
struct PeakAmplitudeSet {
  std::array<Pulse, 4> pulses;
  std::array<cplx, 4> peaks{};
};

inline constexpr std::array<std::pair<int, int>, 4> kPeakOrder{{{A, A}, {A, B}, {B, A}, {B, B}}};

/// The four peak equations, each dipole four-product replaced by its
/// isotropic average for the pulse polarizations. Affine in chi.
PeakAmplitudeSet synthesize_peaks(const ProcessTensor& chi, const DimerLevelSystem& system,
                                  const std::array<Pulse, 4>& pulses);

/// Narrowband limit of the (a,a) peak: only the chi_{alpha beta alpha alpha} term.
cplx reduced_alpha_alpha_peak(const ProcessTensor& chi, const DimerLevelSystem& system,
                              const std::array<Pulse, 4>& pulses);

/// Raw peak height S from S~: divides by Gamma_gp Gamma_qg.
cplx unscaled_peak(const DimerLevelSystem& system, int p, int q, cplx rescaled);

/// Pulse sets for every carrier choice (alpha|beta) of pulses 1-3, in the order
/// (a,a,a), (a,a,b), ..., (b,b,b); pulse 4 is centred between the excitons.
std::vector<std::array<Pulse, 4>> waveform_experiments(const DimerLevelSystem& system, double sigma_fs = 100.0);

/// Carriers (alpha, alpha, beta) with narrow pulses.
std::array<Pulse, 4> narrowband_experiment(const DimerLevelSystem& system, double sigma_fs = 470.0);

struct InversionDiagnostics {
  double residual_norm = 0.0;
  double condition_number = 0.0;
  /// 1 / smallest singular value: worst-case parameter error per unit data noise.
  double noise_gain = 0.0;
  bool ill_conditioned = false;
  std::string warning;
  int n_rows = 0;
  int n_parameters = 0;
  int n_constraints = 0;
};

struct InversionResult {
  ProcessTensor chi;
  InversionDiagnostics diagnostics;
};

struct InversionOptions {
  double rank_tolerance = 1e-10;  // relative singular value
  double condition_warning = 1e8;
};

/// Names of the 20 real parameters (Hermiticity-reduced chi over exciton inputs).
const std::vector<std::string>& parameter_names();

/// Constrained linear least squares for the exciton-input block of chi: real
/// and imaginary parts of every peak are rows; trace preservation for the
/// alpha and beta populations and for the beta-alpha coherence are equality
/// constraints, eliminated through their nullspace. Throws NumericalError on
/// rank deficiency naming the undetermined directions.
InversionResult qpt_invert(const std::vector<PeakAmplitudeSet>& measurements, const DimerLevelSystem& system,
                           double T, const InversionOptions& options = {});

}  // namespace exciton::qpt
