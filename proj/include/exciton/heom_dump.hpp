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
#include <string>
#include <vector>

#include "exciton/heom.hpp"

namespace exciton::heom {

// Binary hierarchy dump, all fields little-endian:
//
//   char[8]   magic "EXHEOM01"
//   uint32    format version (1)
//   uint32    dim d
//   uint32    number of bath modes B
//   uint32    truncation tier L
//   uint64    number of ADOs N
//   float64   time t (fs)
//   int32     N x B multi-indices (tier map), ADO-major
//   float64   N x d x d complex entries as (re, im), row-major within each ADO
struct HierarchyDump {
  int dim = 0;
  int n_modes = 0;
  int tiers = 0;
  double time_fs = 0.0;
  std::vector<std::vector<int>> indices;
  std::vector<CMatrix> ados;
};

void write_hierarchy_dump(std::ostream& out, const HeomGenerator& generator, double t, const CVector& state);
void write_hierarchy_dump(const std::string& path, const HeomGenerator& generator, double t, const CVector& state);

HierarchyDump read_hierarchy_dump(std::istream& in);
HierarchyDump read_hierarchy_dump(const std::string& path);

}  // namespace exciton::heom
