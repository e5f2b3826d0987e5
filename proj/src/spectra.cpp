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
#include "exciton/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "exciton/units.hpp"

namespace exciton::bathtraj {

RVector site_autocorrelation(const SiteEnergyTrajectory& traj, int site, Index max_lag) {
  if (site < 0 || site >= traj.n_sites()) throw ConfigError("site index out of range");
  if (max_lag < 0) throw ConfigError("max lag must be >= 0");
  const Index n = traj.n_steps();
  if (n < 10 * (max_lag + 1)) {
    std::ostringstream msg;
    msg << "trajectory of " << n << " steps is too short for lag " << max_lag << " (need " << 10 * (max_lag + 1)
        << ")";
    throw ConfigError(msg.str());
  }
  const RVector x = traj.series.col(site).array() - traj.series.col(site).mean();
  RVector c(max_lag + 1);
  for (Index k = 0; k <= max_lag; ++k) {
    c[k] = x.head(n - k).dot(x.tail(n - k)) / static_cast<double>(n - k);
  }
  return c;
}

QuantumCorrection parse_correction(const std::string& name) {
  if (name == "none") return QuantumCorrection::None;
  if (name == "standard") return QuantumCorrection::Standard;
  if (name == "harmonic") return QuantumCorrection::Harmonic;
  throw ConfigError("unknown quantum correction '" + name + "' (none, standard, harmonic)");
}

RVector spectral_density_from_autocorrelation(const RVector& c_cm2, double dt_fs, double temperature_K,
                                              const RVector& omega_cm, const SpectralDensityOptions& options) {
  if (!(dt_fs > 0.0) || !(temperature_K > 0.0)) throw ConfigError("dt and temperature must be > 0");
  const Index n = c_cm2.size();
  const double kt = thermal_energy_cm(temperature_K);
  // Work in rad/fs: C -> C (2 pi c)^2, w -> w (2 pi c), result back to cm^-1.
  const double scale = wavenumber_to_angular(1.0);
  RVector taper = RVector::Ones(n);
  if (options.hann_window && n > 1) {
    for (Index k = 0; k < n; ++k) {
      const double c = std::cos(0.5 * kPi * static_cast<double>(k) / static_cast<double>(n - 1));
      taper[k] = c * c;
    }
  }
  RVector out(omega_cm.size());
  for (Index i = 0; i < omega_cm.size(); ++i) {
    const double w = omega_cm[i] * scale;
    double integral = 0.0;
    for (Index k = 0; k < n; ++k) {
      const double weight = (k == 0 || k == n - 1) ? 0.5 : 1.0;
      integral += weight * taper[k] * c_cm2[k] * std::cos(w * dt_fs * static_cast<double>(k));
    }
    integral *= dt_fs * scale * scale;  // rad^2/fs
    const double x = omega_cm[i] / kt;
    double f = 1.0;
    switch (options.correction) {
      case QuantumCorrection::None:
        break;
      case QuantumCorrection::Standard:
        f = std::tanh(0.5 * x);
        break;
      case QuantumCorrection::Harmonic:
        f = 0.5 * x;
        break;
    }
    out[i] = f * 2.0 * integral / kPi / scale;
  }
  return out;
}

RVector absorption_spectrum(const TrajectorySource& source, int site, const RVector& omega_cm, double omega0_cm,
                            const AbsorptionOptions& options) {
  if (site < 0 || site >= source.n_sites()) throw ConfigError("site index out of range");
  if (options.n_instances < 100) throw ConfigError("absorption spectrum needs an ensemble of at least 100 instances");
  const Index steps = source.n_steps();
  const double dt = source.dt();
  const double ref = source.reference_energies()[site];
  const double scale = wavenumber_to_angular(1.0);

  // Ensemble-averaged response R(t_k) = <exp(-i phi(t_k))>, fixed chunk partition.
  const std::uint64_t n = options.n_instances;
  constexpr std::uint64_t kChunks = 64;
  const std::uint64_t chunks = std::min<std::uint64_t>(kChunks, n);
  std::vector<CVector> partial(chunks, CVector::Zero(steps));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
    const std::uint64_t begin = n * static_cast<std::uint64_t>(c) / chunks;
    const std::uint64_t end = n * static_cast<std::uint64_t>(c + 1) / chunks;
    auto& acc = partial[static_cast<std::size_t>(c)];
    for (std::uint64_t k = begin; k < end; ++k) {
      const RMatrix e = source.instance(k);
      double phase = 0.0;
      acc[0] += 1.0;
      for (Index j = 1; j < steps; ++j) {
        phase += 0.5 * dt * scale * ((e(j - 1, site) - ref) + (e(j, site) - ref));
        acc[j] += std::exp(-kI * phase);
      }
    }
  }
  CVector response = CVector::Zero(steps);
  for (const auto& p : partial) response += p;
  response /= static_cast<double>(n);

  RVector out(omega_cm.size());
  for (Index i = 0; i < omega_cm.size(); ++i) {
    const double w = (omega_cm[i] - omega0_cm) * scale;
    cplx sum = 0.0;
    for (Index j = 0; j < steps; ++j) {
      const double t = dt * static_cast<double>(j);
      double weight = (j == 0 || j == steps - 1) ? 0.5 : 1.0;
      if (options.window_fs > 0.0) weight *= std::exp(-0.5 * t * t / (options.window_fs * options.window_fs));
      sum += weight * std::exp(kI * w * t) * response[j];
    }
    out[i] = sum.real() * dt;
  }
  const double peak = out.maxCoeff();
  if (peak > 0.0) out /= peak;
  return out;
}

}  // namespace exciton::bathtraj
