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
#include "exciton/system.hpp"

#include <cmath>
#include <fstream>

namespace exciton {

using nlohmann::json;

void ExcitonSystem::validate() const {
  const int n = n_sites();
  if (n <= 0) throw ConfigError("system needs at least one site");
  if (couplings_cm.rows() != n || couplings_cm.cols() != n) {
    throw ConfigError("coupling matrix must be n_sites x n_sites");
  }
  for (int m = 0; m < n; ++m) {
    if (couplings_cm(m, m) != 0.0) throw ConfigError("coupling matrix must have zero diagonal");
    for (int k = m + 1; k < n; ++k) {
      if (couplings_cm(m, k) != couplings_cm(k, m)) throw ConfigError("coupling matrix must be symmetric");
    }
  }
  if (!(reorganization_cm >= 0.0)) throw ConfigError("reorganization energy must be >= 0");
  if (!(bath_correlation_fs > 0.0)) throw ConfigError("bath correlation time must be > 0");
  if (!(temperature_K > 0.0)) throw ConfigError("temperature must be > 0");
  if (!(trap_rate_per_fs >= 0.0) || !(loss_rate_per_fs >= 0.0)) throw ConfigError("rates must be >= 0");
  if (trap_site < 0 || trap_site >= n) throw ConfigError("trap site out of range");
  if (!dipoles.empty() && static_cast<int>(dipoles.size()) != n) {
    throw ConfigError("need one dipole per site");
  }
}

ExcitonSystem system_from_json(const json& j) {
  ExcitonSystem s;
  const auto eps = j.at("site_energies_cm1").get<std::vector<double>>();
  const int n = static_cast<int>(eps.size());
  s.site_energies_cm = Eigen::Map<const RVector>(eps.data(), n);
  const auto cpl = j.at("couplings_cm1").get<std::vector<std::vector<double>>>();
  if (static_cast<int>(cpl.size()) != n) throw ConfigError("couplings_cm1 must have n_sites rows");
  s.couplings_cm.resize(n, n);
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(cpl[r].size()) != n) throw ConfigError("couplings_cm1 rows must have n_sites entries");
    for (int c = 0; c < n; ++c) s.couplings_cm(r, c) = cpl[r][c];
  }
  s.reorganization_cm = j.value("reorganization_cm1", 0.0);
  s.bath_correlation_fs = j.value("bath_correlation_fs", 50.0);
  s.temperature_K = j.value("temperature_K", 300.0);
  if (j.contains("trap")) {
    s.trap_site = j["trap"].at("site").get<int>();
    s.trap_rate_per_fs = j["trap"].value("rate_per_ps", 0.0) * 1e-3;
  }
  s.loss_rate_per_fs = j.value("loss_rate_per_ns", 0.0) * 1e-6;
  if (j.contains("dipoles")) {
    for (const auto& d : j["dipoles"]) {
      const auto v = d.get<std::vector<double>>();
      if (v.size() != 3) throw ConfigError("dipoles must be 3-vectors");
      s.dipoles.emplace_back(v[0], v[1], v[2]);
    }
  }
  s.validate();
  return s;
}

json system_to_json(const ExcitonSystem& s) {
  json j;
  j["site_energies_cm1"] = std::vector<double>(s.site_energies_cm.data(), s.site_energies_cm.data() + s.n_sites());
  std::vector<std::vector<double>> cpl(s.n_sites(), std::vector<double>(s.n_sites()));
  for (int r = 0; r < s.n_sites(); ++r)
    for (int c = 0; c < s.n_sites(); ++c) cpl[r][c] = s.couplings_cm(r, c);
  j["couplings_cm1"] = cpl;
  j["reorganization_cm1"] = s.reorganization_cm;
  j["bath_correlation_fs"] = s.bath_correlation_fs;
  j["temperature_K"] = s.temperature_K;
  j["trap"] = {{"site", s.trap_site}, {"rate_per_ps", s.trap_rate_per_fs * 1e3}};
  j["loss_rate_per_ns"] = s.loss_rate_per_fs * 1e6;
  json dip = json::array();
  for (const auto& d : s.dipoles) dip.push_back({d.x(), d.y(), d.z()});
  j["dipoles"] = dip;
  return j;
}

ExcitonSystem load_system(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open system file: " + path.string());
  json j;
  try {
    in >> j;
    return system_from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError("malformed system file " + path.string() + ": " + e.what());
  }
}

ExcitonSystem dimer_system(double reorganization_cm) {
  ExcitonSystem s;
  s.site_energies_cm = RVector{{0.0, 120.0}};
  s.couplings_cm = RMatrix{{0.0, -87.7}, {-87.7, 0.0}};
  s.reorganization_cm = reorganization_cm;
  s.bath_correlation_fs = 50.0;
  s.temperature_K = 300.0;
  s.trap_site = 1;
  s.trap_rate_per_fs = 1e-3;
  s.loss_rate_per_fs = 1e-6;
  s.dipoles = {Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0)};
  return s;
}

ExcitonSystem fmo_system(double reorganization_cm) {
  ExcitonSystem s;
  s.site_energies_cm = RVector{{12410, 12530, 12210, 12320, 12480, 12630, 12440}};
  s.site_energies_cm.array() -= 12410.0;
  s.couplings_cm = RMatrix{{0, -87.7, 5.5, -5.9, 6.7, -13.7, -9.9},
                           {-87.7, 0, 30.8, 8.2, 0.7, 11.8, 4.3},
                           {5.5, 30.8, 0, -53.5, -2.2, -9.6, 6.0},
                           {-5.9, 8.2, -53.5, 0, -70.7, -17.0, -63.3},
                           {6.7, 0.7, -2.2, -70.7, 0, 81.1, -1.3},
                           {-13.7, 11.8, -9.6, -17.0, 81.1, 0, 39.7},
                           {-9.9, 4.3, 6.0, -63.3, -1.3, 39.7, 0}};
  s.reorganization_cm = reorganization_cm;
  s.bath_correlation_fs = 50.0;
  s.temperature_K = 300.0;
  s.trap_site = 2;
  s.trap_rate_per_fs = 1e-3;
  s.loss_rate_per_fs = 1e-6;
  return s;
}

DensityMatrix site_state(int n, int site) {
  DensityMatrix rho = DensityMatrix::Zero(n, n);
  rho(site, site) = 1.0;
  return rho;
}

void check_density_matrix(const DensityMatrix& rho) {
  if (rho.rows() != rho.cols()) throw ConfigError("density matrix must be square");
  const double scale = std::max(1.0, rho.norm());
  if ((rho - rho.adjoint()).norm() > 1e-12 * scale) throw ConfigError("density matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-12) throw ConfigError("density matrix is not positive semidefinite");
}

}  // namespace exciton
