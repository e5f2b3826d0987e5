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
#include "exciton/superoperator.hpp"

namespace exciton::heom {

// Reference implementation: every term is a full dense matrix product with the
// site projector V_j = |j><j|. Kept deliberately plain for cross-checking the
// parallel kernel.
void HeomGenerator::apply_serial(const CVector& x, CVector& y) const {
  const int d = dim_;
  const Index d2 = static_cast<Index>(d) * d;
  if (x.size() != state_size()) throw ConfigError("hierarchy state has wrong size");
  y.resize(x.size());

  std::vector<CMatrix> v(modes_.size(), CMatrix::Zero(d, d));
  for (std::size_t k = 0; k < modes_.size(); ++k) {
    const int j = state_index(static_cast<int>(k));
    v[k](j, j) = 1.0;
  }
  const std::size_t b = modes_.size();

  for (std::size_t i = 0; i < n_ados(); ++i) {
    const CMatrix s = ado(x, i);
    CMatrix out = -kI * (h_eff_ * s - s * h_eff_.adjoint()) - damping_[i] * s;
    for (std::size_t k = 0; k < b; ++k) {
      const auto up = indices_.plus(i, static_cast<int>(k));
      if (up >= 0) {
        const CMatrix su = ado(x, static_cast<std::size_t>(up));
        out += -kI * plus_coef_[i * b + k] * (v[k] * su - su * v[k]);
      }
      const auto down = indices_.minus(i, static_cast<int>(k));
      if (down >= 0) {
        const CMatrix sd = ado(x, static_cast<std::size_t>(down));
        const cplx c = modes_[k].c;
        out += -kI * minus_coef_[i * b + k] * (c * (v[k] * sd) - std::conj(c) * (sd * v[k]));
      }
    }
    y.segment(static_cast<Index>(i) * d2, d2) = vectorize(out);
  }
}

}  // namespace exciton::heom
