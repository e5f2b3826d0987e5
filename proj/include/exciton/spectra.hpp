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

#include <string>

#include "exciton/trajectory.hpp"

namespace exciton::bathtraj {

/// Unbiased estimate C(k dt) = 1/(N-k) sum_i de(i) de(i+k) of the mean-subtracted
/// site-energy autocorrelation (cm^-2), k = 0..max_lag. Requires N >= 10 (max_lag + 1).
RVector site_autocorrelation(const SiteEnergyTrajectory& traj, int site, Index max_lag);

/// Classical-to-quantum correction applied to the classical correlation spectrum.
enum class QuantumCorrection {
  None,      // F = 1
  Standard,  // F = tanh(beta w / 2)
  Harmonic,  // F = beta w / 2
};
QuantumCorrection parse_correction(const std::string& name);

struct SpectralDensityOptions {
  QuantumCorrection correction = QuantumCorrection::Harmonic;
  /// Taper C(t) with a half-Hann window over the available lags.
  bool hann_window = false;
};

/// J(w) = (1/pi) F(w) 2 int_0^T C(t) cos(w t) dt (trapezoid rule), so that with
/// the harmonic factor an exponential C(t) = 2 lambda kT e^{-gamma t} maps onto the
/// Drude form 2 lambda gamma w / pi (w^2 + gamma^2). All energies in cm^-1.
RVector spectral_density_from_autocorrelation(const RVector& c_cm2, double dt_fs, double temperature_K,
                                              const RVector& omega_cm, const SpectralDensityOptions& options = {});

struct AbsorptionOptions {
  std::uint64_t n_instances = 1000;
  /// Gaussian window exp(-t^2 / 2 T^2) on the response; 0 disables it.
  double window_fs = 0.0;
};

/// A(w) proportional to Re int dt e^{i (w - w0) t} < exp(-i int_0^t de(t') dt') >
/// over instances of `source` for one site, with de measured from the source's
/// reference energy. Normalized to unit peak height.
RVector absorption_spectrum(const TrajectorySource& source, int site, const RVector& omega_cm, double omega0_cm,
                            const AbsorptionOptions& options = {});

}  // namespace exciton::bathtraj
