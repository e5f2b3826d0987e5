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
#include <iosfwd>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "exciton/redfield.hpp"
#include "exciton/types.hpp"

namespace exciton::bathtraj {

/// Per-site site-energy time series on a uniform grid.
struct SiteEnergyTrajectory {
  double dt_fs = 1.0;
  RMatrix series;  // n_steps x n_sites, cm^-1
  /// Optional coupling columns (validated, otherwise unused).
  std::vector<std::string> coupling_names;
  RMatrix couplings;
  std::string temperature_label;
  std::string source = "ingested";  // or "synthetic"
  std::uint64_t seed = 0;

  int n_sites() const { return static_cast<int>(series.cols()); }
  Index n_steps() const { return series.rows(); }
  /// Time-averaged site energies (the reference energies of the system Hamiltonian).
  RVector mean_energies() const { return series.colwise().mean().transpose(); }
  void validate() const;
};

// CSV layout: optional "# key=value" comment lines (dt_fs, source, seed,
// temperature), then a header "t_fs,site1_cm1,site2_cm1,...[,J_1_2_cm1,...]"
// and one row per time step. Values are written with 17 significant digits so
// a write/ingest round trip is exact.
SiteEnergyTrajectory ingest_trajectory(std::istream& in);
SiteEnergyTrajectory ingest_trajectory(const std::string& path);
void write_trajectory(std::ostream& out, const SiteEnergyTrajectory& traj);
void write_trajectory(const std::string& path, const SiteEnergyTrajectory& traj);

/// Generator for stream `stream` of instance `instance` under master seed `seed`:
/// mt19937_64 seeded by seed_seq{seed lo, seed hi, instance lo, instance hi, stream}.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t instance, std::uint32_t stream = 0);

/// Stationary-variance 2 lambda kT (cm^-2) in cm^-1 units for the OU mapping.
double ou_variance(const redfield::DrudeBath& bath);

/// Independent Ornstein-Uhlenbeck site-energy fluctuations, exact discretization
/// x' = x e^{-gamma dt} + sigma sqrt(1 - e^{-2 gamma dt}) xi, started from the
/// stationary distribution and added to `means` (zero when empty).
/// Requires dt <= 0.1 / gamma.
SiteEnergyTrajectory generate_ou_trajectory(const redfield::DrudeBath& bath, double dt_fs, Index n_steps, int n_sites,
                                            std::uint64_t seed, const RVector& means = {});

/// Source of independent site-energy histories for Monte-Carlo ensembles.
/// Instance k must depend only on (configuration, k).
class TrajectorySource {
 public:
  virtual ~TrajectorySource() = default;
  virtual int n_sites() const = 0;
  virtual double dt() const = 0;
  virtual Index n_steps() const = 0;
  /// Reference energies eps-bar_m (cm^-1).
  virtual RVector reference_energies() const = 0;
  /// n_steps x n_sites absolute site energies (cm^-1).
  virtual RMatrix instance(std::uint64_t k) const = 0;
};

class OuSource : public TrajectorySource {
 public:
  OuSource(redfield::DrudeBath bath, double dt_fs, Index n_steps, RVector means, std::uint64_t seed);
  int n_sites() const override { return static_cast<int>(means_.size()); }
  double dt() const override { return dt_; }
  Index n_steps() const override { return n_steps_; }
  RVector reference_energies() const override { return means_; }
  RMatrix instance(std::uint64_t k) const override;

 private:
  redfield::DrudeBath bath_;
  double dt_;
  Index n_steps_;
  RVector means_;
  std::uint64_t seed_;
};

/// Time-independent Gaussian offsets per instance (the gamma -> 0 limit).
class StaticDisorderSource : public TrajectorySource {
 public:
  StaticDisorderSource(RVector means, RVector sigma_cm, double dt_fs, Index n_steps, std::uint64_t seed);
  int n_sites() const override { return static_cast<int>(means_.size()); }
  double dt() const override { return dt_; }
  Index n_steps() const override { return n_steps_; }
  RVector reference_energies() const override { return means_; }
  RMatrix instance(std::uint64_t k) const override;

 private:
  RVector means_;
  RVector sigma_;
  double dt_;
  Index n_steps_;
  std::uint64_t seed_;
};

/// Windows of an ingested trajectory: instance k starts at row
/// (k * stride) mod (n_steps - window + 1).
class WindowedTrajectorySource : public TrajectorySource {
 public:
  WindowedTrajectorySource(std::shared_ptr<const SiteEnergyTrajectory> traj, Index window, Index stride);
  int n_sites() const override { return traj_->n_sites(); }
  double dt() const override { return traj_->dt_fs; }
  Index n_steps() const override { return window_; }
  RVector reference_energies() const override { return mean_; }
  RMatrix instance(std::uint64_t k) const override;

 private:
  std::shared_ptr<const SiteEnergyTrajectory> traj_;
  Index window_;
  Index stride_;
  RVector mean_;
};

}  // namespace exciton::bathtraj
