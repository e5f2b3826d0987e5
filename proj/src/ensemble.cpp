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
#include "exciton/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "exciton/system.hpp"
#include "exciton/units.hpp"

namespace exciton::bathtraj {

CMatrix step_propagator(const CMatrix& h, double dt) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const CVector phases = (-kI * dt * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

namespace {

struct Setup {
  int n = 0;
  Index steps = 0;
  std::vector<Index> sample_steps;
  RVector reference;
  RVector source_reference;
  CMatrix couplings;  // rad/fs
  double shift = 0.0;
  double dt = 0.0;
};

Setup prepare(const TrajectorySource& source, const RMatrix& couplings_cm, const CMatrix& rho0,
              const EnsembleOptions& options) {
  Setup s;
  s.n = source.n_sites();
  s.steps = source.n_steps();
  s.dt = source.dt();
  if (options.n_instances < 2) throw ConfigError("ensemble needs at least 2 instances");
  if (options.sample_stride < 1) throw ConfigError("sample stride must be >= 1");
  if (couplings_cm.rows() != s.n || couplings_cm.cols() != s.n) throw ConfigError("coupling matrix size mismatch");
  if (!couplings_cm.isApprox(couplings_cm.transpose(), 1e-12) || couplings_cm.diagonal().cwiseAbs().maxCoeff() > 0.0) {
    throw ConfigError("couplings must be symmetric with zero diagonal");
  }
  check_density_matrix(rho0);
  if (rho0.rows() != s.n) throw ConfigError("initial state dimension does not match the trajectory sites");
  s.source_reference = source.reference_energies();
  s.reference = options.reference_override.size() ? options.reference_override : s.source_reference;
  if (s.reference.size() != s.n) throw ConfigError("reference energies do not match the site count");
  // A common energy offset only adds a global phase.
  s.shift = s.reference.mean();
  s.couplings = couplings_cm.cast<cplx>() * wavenumber_to_angular(1.0);
  for (Index k = 0; k <= s.steps; k += options.sample_stride) s.sample_steps.push_back(k);
  if (s.sample_steps.back() != s.steps) s.sample_steps.push_back(s.steps);
  return s;
}

// Propagates one instance; calls sink(sample, rho) at every stored step.
template <typename Sink>
void run_instance(const TrajectorySource& source, const Setup& s, const CMatrix& rho0, std::uint64_t k, Sink&& sink) {
  const RMatrix energies = source.instance(k);
  CMatrix rho = rho0;
  CMatrix h = s.couplings;
  std::size_t next = 0;
  if (s.sample_steps[next] == 0) sink(next++, rho);
  for (Index step = 0; step < s.steps; ++step) {
    for (int m = 0; m < s.n; ++m) {
      const double e = s.reference[m] + (energies(step, m) - s.source_reference[m]) - s.shift;
      h(m, m) = wavenumber_to_angular(e);
    }
    const CMatrix u = step_propagator(h, s.dt);
    rho = u * rho * u.adjoint();
    if (next < s.sample_steps.size() && s.sample_steps[next] == step + 1) sink(next++, rho);
  }
}

EnsembleResult finish(const Setup& s, std::vector<CMatrix> sum, const RVector& sum_sq, std::uint64_t n) {
  EnsembleResult r;
  r.n_instances = n;
  const double inv = 1.0 / static_cast<double>(n);
  r.rho.reserve(sum.size());
  r.rho11_stderr.resize(static_cast<Index>(sum.size()));
  for (std::size_t i = 0; i < sum.size(); ++i) {
    r.times.push_back(static_cast<double>(s.sample_steps[i]) * s.dt);
    CMatrix mean = sum[i] * inv;
    const double p = mean(0, 0).real();
    const double var = std::max(0.0, (sum_sq[static_cast<Index>(i)] - n * p * p) / static_cast<double>(n - 1));
    r.rho11_stderr[static_cast<Index>(i)] = std::sqrt(var * inv);
    r.rho.push_back(std::move(mean));
  }
  return r;
}

}  // namespace

EnsembleResult mc_unitary_ensemble(const TrajectorySource& source, const RMatrix& couplings_cm, const CMatrix& rho0,
                                   const EnsembleOptions& options) {
  const Setup s = prepare(source, couplings_cm, rho0, options);
  const std::uint64_t n = options.n_instances;
  const std::size_t samples = s.sample_steps.size();
  constexpr std::uint64_t kChunks = 64;
  const std::uint64_t chunks = std::min<std::uint64_t>(kChunks, n);

  std::vector<std::vector<CMatrix>> chunk_sum(chunks, std::vector<CMatrix>(samples, CMatrix::Zero(s.n, s.n)));
  std::vector<RVector> chunk_sq(chunks, RVector::Zero(static_cast<Index>(samples)));
  std::vector<std::vector<CMatrix>> kept(options.keep_instances ? n : 0);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
    const std::uint64_t begin = n * static_cast<std::uint64_t>(c) / chunks;
    const std::uint64_t end = n * static_cast<std::uint64_t>(c + 1) / chunks;
    auto& sum = chunk_sum[static_cast<std::size_t>(c)];
    auto& sq = chunk_sq[static_cast<std::size_t>(c)];
    for (std::uint64_t k = begin; k < end; ++k) {
      if (options.keep_instances) kept[k].reserve(samples);
      run_instance(source, s, rho0, k, [&](std::size_t i, const CMatrix& rho) {
        sum[i] += rho;
        const double p = rho(0, 0).real();
        sq[static_cast<Index>(i)] += p * p;
        if (options.keep_instances) kept[k].push_back(rho);
      });
    }
  }

  std::vector<CMatrix> total(samples, CMatrix::Zero(s.n, s.n));
  RVector total_sq = RVector::Zero(static_cast<Index>(samples));
  for (std::uint64_t c = 0; c < chunks; ++c) {
    for (std::size_t i = 0; i < samples; ++i) total[i] += chunk_sum[c][i];
    total_sq += chunk_sq[c];
  }
  auto r = finish(s, std::move(total), total_sq, n);
  r.instances = std::move(kept);
  return r;
}

EnsembleResult mc_unitary_ensemble_serial(const TrajectorySource& source, const RMatrix& couplings_cm,
                                          const CMatrix& rho0, const EnsembleOptions& options) {
  const Setup s = prepare(source, couplings_cm, rho0, options);
  const std::size_t samples = s.sample_steps.size();
  std::vector<CMatrix> total(samples, CMatrix::Zero(s.n, s.n));
  RVector total_sq = RVector::Zero(static_cast<Index>(samples));
  std::vector<std::vector<CMatrix>> kept;
  for (std::uint64_t k = 0; k < options.n_instances; ++k) {
    if (options.keep_instances) kept.emplace_back();
    run_instance(source, s, rho0, k, [&](std::size_t i, const CMatrix& rho) {
      total[i] += rho;
      total_sq[static_cast<Index>(i)] += rho(0, 0).real() * rho(0, 0).real();
      if (options.keep_instances) kept.back().push_back(rho);
    });
  }
  auto r = finish(s, std::move(total), total_sq, options.n_instances);
  r.instances = std::move(kept);
  return r;
}

}  // namespace exciton::bathtraj
