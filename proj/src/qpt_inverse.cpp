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
#include <sstream>

#include <Eigen/SVD>

#include "exciton/qpt.hpp"

namespace exciton::qpt {

namespace {

// One real parameter: its name and the entries it drives, chi(entry) += weight * p.
struct Slot {
  std::string name;
  std::vector<std::pair<std::array<int, 4>, cplx>> entries;
};

std::string entry_name(const char* part, int a, int b, int c, int d) {
  return std::string(part) + " chi_" + level_name(a) + level_name(b) + "," + level_name(c) + level_name(d);
}

std::vector<Slot> make_slots() {
  std::vector<Slot> slots;
  // Population inputs: diagonal outputs are real, the exciton coherence is complex.
  for (int c : {A, B}) {
    for (int a : {G, A, B}) slots.push_back({entry_name("Re", a, a, c, c), {{{a, a, c, c}, 1.0}}});
    slots.push_back({entry_name("Re", A, B, c, c), {{{A, B, c, c}, 1.0}, {{B, A, c, c}, 1.0}}});
    slots.push_back({entry_name("Im", A, B, c, c), {{{A, B, c, c}, kI}, {{B, A, c, c}, -kI}}});
  }
  // Coherence input beta-alpha; the alpha-beta input is its conjugate.
  const std::array<std::pair<int, int>, 5> outputs{{{G, G}, {A, A}, {B, B}, {A, B}, {B, A}}};
  for (auto [a, b] : outputs) {
    slots.push_back({entry_name("Re", a, b, B, A), {{{a, b, B, A}, 1.0}, {{b, a, A, B}, 1.0}}});
    slots.push_back({entry_name("Im", a, b, B, A), {{{a, b, B, A}, kI}, {{b, a, A, B}, -kI}}});
  }
  return slots;
}

const std::vector<Slot>& slots() {
  static const std::vector<Slot> s = make_slots();
  return s;
}

ProcessTensor tensor_from(const Eigen::VectorXd& p, double T) {
  ProcessTensor chi;
  chi.T = T;
  for (int j = 0; j < static_cast<int>(slots().size()); ++j) {
    for (const auto& [idx, w] : slots()[j].entries) {
      chi(idx[0], idx[1], idx[2], idx[3]) += w * p(j);
      chi.known[ProcessTensor::flat(idx[0], idx[1], idx[2], idx[3])] = true;
    }
  }
  return chi;
}

Eigen::VectorXd peak_rows(const std::vector<PeakAmplitudeSet>& sets) {
  Eigen::VectorXd y(8 * sets.size());
  for (std::size_t m = 0; m < sets.size(); ++m) {
    for (int k = 0; k < 4; ++k) {
      y(8 * m + 2 * k) = sets[m].peaks[k].real();
      y(8 * m + 2 * k + 1) = sets[m].peaks[k].imag();
    }
  }
  return y;
}

Eigen::VectorXd forward_rows(const ProcessTensor& chi, const std::vector<PeakAmplitudeSet>& sets,
                             const DimerLevelSystem& system) {
  std::vector<PeakAmplitudeSet> out;
  for (const auto& s : sets) out.push_back(synthesize_peaks(chi, system, s.pulses));
  return peak_rows(out);
}

std::string describe_direction(const Eigen::VectorXd& v) {
  std::vector<int> order(v.size());
  for (int i = 0; i < v.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&v](int i, int j) { return std::abs(v(i)) > std::abs(v(j)); });
  std::ostringstream os;
  bool first = true;
  for (int i : order) {
    if (std::abs(v(i)) < 0.1 * std::abs(v(order[0]))) break;
    os << (first ? "" : " + ") << v(i) << "*[" << parameter_names()[i] << "]";
    first = false;
  }
  return os.str();
}

}  // namespace

const std::vector<std::string>& parameter_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& s : slots()) n.push_back(s.name);
    return n;
  }();
  return names;
}

InversionResult qpt_invert(const std::vector<PeakAmplitudeSet>& measurements, const DimerLevelSystem& system,
                           double T, const InversionOptions& options) {
  if (measurements.empty()) throw ConfigError("process tomography needs at least one measurement");
  const int n = static_cast<int>(slots().size());

  // The peaks are affine in chi: S(chi) = S(0) + D p.
  const Eigen::VectorXd s0 = forward_rows(tensor_from(Eigen::VectorXd::Zero(n), T), measurements, system);
  Eigen::MatrixXd D(s0.size(), n);
  for (int j = 0; j < n; ++j) {
    D.col(j) = forward_rows(tensor_from(Eigen::VectorXd::Unit(n, j), T), measurements, system) - s0;
  }
  const Eigen::VectorXd y = peak_rows(measurements) - s0;

  // Trace preservation: alpha and beta populations sum to one, the beta-alpha coherence to zero.
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(4, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(4);
  C.row(0).segment(0, 3).setOnes();
  C.row(1).segment(5, 3).setOnes();
  e(0) = e(1) = 1.0;
  for (int k = 0; k < 3; ++k) {
    C(2, 10 + 2 * k) = 1.0;
    C(3, 11 + 2 * k) = 1.0;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> csvd(C, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd p0 = csvd.solve(e);
  const Eigen::MatrixXd N = csvd.matrixV().rightCols(n - C.rows());

  const Eigen::MatrixXd AN = D * N;
  const Eigen::VectorXd b = y - D * p0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(AN, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double smax = sv(0);
  std::vector<std::string> lost;
  for (int i = 0; i < sv.size(); ++i) {
    if (!(sv(i) > options.rank_tolerance * smax)) lost.push_back(describe_direction(N * svd.matrixV().col(i)));
  }
  if (!lost.empty()) {
    std::ostringstream os;
    os << "process tomography is rank deficient (" << lost.size() << " undetermined direction"
       << (lost.size() > 1 ? "s" : "") << "):";
    for (const auto& d : lost) os << "\n  " << d;
    throw NumericalError(os.str());
  }
  const Eigen::VectorXd z = svd.solve(b);
  const Eigen::VectorXd p = p0 + N * z;

  InversionResult r;
  r.chi = tensor_from(p, T);
  auto& dg = r.diagnostics;
  dg.residual_norm = (AN * z - b).norm();
  dg.condition_number = smax / sv(sv.size() - 1);
  dg.noise_gain = 1.0 / sv(sv.size() - 1);
  dg.n_rows = static_cast<int>(D.rows());
  dg.n_parameters = n;
  dg.n_constraints = static_cast<int>(C.rows());
  if (dg.condition_number > options.condition_warning) {
    dg.ill_conditioned = true;
    dg.warning = "ill-conditioned inversion, condition number " + std::to_string(dg.condition_number) +
                 "; weakest direction " + describe_direction(N * svd.matrixV().col(sv.size() - 1));
  }
  return r;
}

}  // namespace exciton::qpt
