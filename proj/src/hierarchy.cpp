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
#include "exciton/hierarchy.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

#include "exciton/types.hpp"

namespace exciton::heom {

std::uint64_t hierarchy_size(int n_modes, int tiers) {
  if (n_modes < 0 || tiers < 0) throw ConfigError("hierarchy dimensions must be >= 0");
  // C(B + L, L) built as a running product; each partial value is itself a binomial.
  unsigned __int128 c = 1;
  for (int k = 1; k <= tiers; ++k) {
    c = c * static_cast<unsigned>(n_modes + k) / static_cast<unsigned>(k);
    if (c > std::numeric_limits<std::uint64_t>::max()) throw ConfigError("hierarchy size overflows 64 bits");
  }
  return static_cast<std::uint64_t>(c);
}

std::uint64_t hierarchy_size(int n_sites, int modes_per_site, int tiers) {
  if (n_sites < 0 || modes_per_site < 0) throw ConfigError("hierarchy dimensions must be >= 0");
  return hierarchy_size(n_sites * modes_per_site, tiers);
}

std::uint64_t hierarchy_memory_bytes(std::uint64_t n_ados, int dim) {
  // State, eight Runge-Kutta stages and the error estimate.
  constexpr std::uint64_t kVectors = 11;
  const unsigned __int128 bytes = static_cast<unsigned __int128>(n_ados) * dim * dim * sizeof(cplx) * kVectors;
  if (bytes > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(bytes);
}

void check_memory_budget(std::uint64_t n_ados, int dim, std::uint64_t budget_bytes) {
  const std::uint64_t need = hierarchy_memory_bytes(n_ados, dim);
  if (need > budget_bytes) {
    std::ostringstream msg;
    msg << "hierarchy of " << n_ados << " ADOs (" << dim << "x" << dim << ") needs " << need
        << " bytes, over the memory budget of " << budget_bytes << " bytes";
    throw ConfigError(msg.str());
  }
}

HierarchyIndexSet::HierarchyIndexSet(int n_modes, int tiers) : n_modes_(n_modes), tiers_(tiers) {
  const std::uint64_t total = hierarchy_size(n_modes, tiers);
  if (total > (std::uint64_t{1} << 31)) throw ConfigError("hierarchy index set too large");
  const auto n = static_cast<std::size_t>(total);
  indices_.reserve(n * n_modes);
  tier_.reserve(n);

  // Enumerate tier by tier; within a tier, descending lexicographic order of the
  // multi-index (first mode varies slowest), which is stable and easy to reproduce.
  std::vector<int> cur(n_modes, 0);
  tier_offsets_.push_back(0);
  if (n_modes == 0) {
    tier_.push_back(0);
  } else {
    for (int t = 0; t <= tiers; ++t) {
      // Compositions of t into n_modes parts.
      std::fill(cur.begin(), cur.end(), 0);
      cur[0] = t;
      while (true) {
        indices_.insert(indices_.end(), cur.begin(), cur.end());
        tier_.push_back(t);
        // Next composition: move one unit from the last nonzero entry before the tail.
        int j = n_modes - 2;
        while (j >= 0 && cur[j] == 0) --j;
        if (j < 0) break;
        const int tail = cur[n_modes - 1];
        cur[n_modes - 1] = 0;
        --cur[j];
        cur[j + 1] = tail + 1;
      }
      tier_offsets_.push_back(tier_.size());
    }
  }
  if (n_modes == 0) {
    for (int t = 1; t <= tiers + 1; ++t) tier_offsets_.push_back(1);
  }

  std::map<std::vector<int>, std::int64_t> lookup;
  for (std::size_t i = 0; i < size(); ++i) {
    lookup.emplace(std::vector<int>(index(i), index(i) + n_modes_), static_cast<std::int64_t>(i));
  }
  plus_.assign(size() * n_modes_, -1);
  minus_.assign(size() * n_modes_, -1);
  std::vector<int> probe(n_modes_);
  for (std::size_t i = 0; i < size(); ++i) {
    for (int k = 0; k < n_modes_; ++k) {
      std::copy(index(i), index(i) + n_modes_, probe.begin());
      if (tier_[i] < tiers_) {
        ++probe[k];
        plus_[i * n_modes_ + k] = lookup.at(probe);
        --probe[k];
      }
      if (probe[k] > 0) {
        --probe[k];
        minus_[i * n_modes_ + k] = lookup.at(probe);
      }
    }
  }
}

std::int64_t HierarchyIndexSet::find(const std::vector<int>& n) const {
  if (static_cast<int>(n.size()) != n_modes_) return -1;
  int t = 0;
  for (int v : n) {
    if (v < 0) return -1;
    t += v;
  }
  if (t > tiers_) return -1;
  for (std::size_t i = tier_offsets_[t]; i < tier_offsets_[t + 1]; ++i) {
    if (std::equal(n.begin(), n.end(), index(i))) return static_cast<std::int64_t>(i);
  }
  return -1;
}

}  // namespace exciton::heom
