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
#include "exciton/heom.hpp"

namespace exciton::heom {

// V_j sigma keeps row j of sigma and sigma V_j keeps column j, so every tier
// coupling is a rank-one row or column update on the output block.
void HeomGenerator::apply(const CVector& x, CVector& y) const {
  const int d = dim_;
  const Index d2 = static_cast<Index>(d) * d;
  if (x.size() != state_size()) throw ConfigError("hierarchy state has wrong size");
  y.resize(x.size());
  const auto n = static_cast<std::int64_t>(n_ados());
  const std::size_t b = modes_.size();
  const cplx* xs = x.data();
  cplx* ys = y.data();
  const CMatrix h_eff_adj = h_eff_.adjoint();

#pragma omp parallel for schedule(static)
  for (std::int64_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    using MapC = Eigen::Map<const CMatrix>;
    using Map = Eigen::Map<CMatrix>;
    MapC s(xs + ii * d2, d, d);
    Map out(ys + ii * d2, d, d);
    out.noalias() = h_eff_ * s;
    out.noalias() -= s * h_eff_adj;
    out *= -kI;
    if (damping_[i] != 0.0) out -= damping_[i] * s;

    for (std::size_t k = 0; k < b; ++k) {
      const int j = state_index(static_cast<int>(k));
      const auto up = indices_.plus(i, static_cast<int>(k));
      if (up >= 0) {
        const double a = plus_coef_[i * b + k];
        if (a != 0.0) {
          MapC su(xs + up * d2, d, d);
          const cplx f = -kI * a;
          out.row(j) += f * su.row(j);
          out.col(j) -= f * su.col(j);
        }
      }
      const auto down = indices_.minus(i, static_cast<int>(k));
      if (down >= 0) {
        const double m = minus_coef_[i * b + k];
        if (m != 0.0) {
          MapC sd(xs + down * d2, d, d);
          const cplx c = modes_[k].c;
          out.row(j) += (-kI * c * m) * sd.row(j);
          out.col(j) += (kI * std::conj(c) * m) * sd.col(j);
        }
      }
    }
  }
}

}  // namespace exciton::heom
