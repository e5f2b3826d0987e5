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

#include <cstddef>
#include <cstdint>
#include <vector>

namespace exciton::heom {

/// Number of multi-indices over `n_modes` modes with total tier <= `tiers`,
/// i.e. C(n_modes + tiers, tiers). Throws ConfigError on integer overflow.
std::uint64_t hierarchy_size(int n_modes, int tiers);

/// Convenience form with B = n_sites * modes_per_site.
std::uint64_t hierarchy_size(int n_sites, int modes_per_site, int tiers);

/// Bytes needed to integrate a hierarchy of `n_ados` blocks of dim x dim complex
/// matrices (state plus integrator workspace).
std::uint64_t hierarchy_memory_bytes(std::uint64_t n_ados, int dim);

/// Throws ConfigError quoting the required bytes when the budget is exceeded.
void check_memory_budget(std::uint64_t n_ados, int dim, std::uint64_t budget_bytes);

/// All multi-indices with tier <= L, ordered by tier and then lexicographically,
/// with neighbour tables. Index 0 is the physical density matrix.
class HierarchyIndexSet {
 public:
  HierarchyIndexSet(int n_modes, int tiers);

  int n_modes() const { return n_modes_; }
  int tiers() const { return tiers_; }
  std::size_t size() const { return tier_.size(); }

  const int* index(std::size_t i) const { return &indices_[i * n_modes_]; }
  int count(std::size_t i, int mode) const { return indices_[i * n_modes_ + mode]; }
  int tier(std::size_t i) const { return tier_[i]; }

  /// Position of the index with mode k raised / lowered by one, or -1.
  std::int64_t plus(std::size_t i, int mode) const { return plus_[i * n_modes_ + mode]; }
  std::int64_t minus(std::size_t i, int mode) const { return minus_[i * n_modes_ + mode]; }

  /// Position of an explicit multi-index, or -1 when outside the set.
  std::int64_t find(const std::vector<int>& n) const;

  /// First position of each tier; entry tiers() + 1 is size().
  const std::vector<std::size_t>& tier_offsets() const { return tier_offsets_; }

 private:
  int n_modes_;
  int tiers_;
  std::vector<int> indices_;
  std::vector<int> tier_;
  std::vector<std::int64_t> plus_;
  std::vector<std::int64_t> minus_;
  std::vector<std::size_t> tier_offsets_;
};

}  // namespace exciton::heom
