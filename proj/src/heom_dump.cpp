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
#include "exciton/heom_dump.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace exciton::heom {

namespace {

constexpr std::array<char, 8> kMagic{'E', 'X', 'H', 'E', 'O', 'M', '0', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(bytes.data(), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  std::array<char, sizeof(T)> bytes;
  if (!in.read(bytes.data(), sizeof(T))) throw ConfigError("hierarchy dump is truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

void write_hierarchy_dump(std::ostream& out, const HeomGenerator& generator, double t, const CVector& state) {
  if (state.size() != generator.state_size()) throw ConfigError("hierarchy state has wrong size");
  const auto& idx = generator.indices();
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(generator.dim()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(idx.n_modes()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(idx.tiers()));
  put<std::uint64_t>(out, idx.size());
  put<double>(out, t);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (int k = 0; k < idx.n_modes(); ++k) put<std::int32_t>(out, idx.count(i, k));
  }
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const CMatrix a = generator.ado(state, i);
    for (Index r = 0; r < a.rows(); ++r) {
      for (Index c = 0; c < a.cols(); ++c) {
        put<double>(out, a(r, c).real());
        put<double>(out, a(r, c).imag());
      }
    }
  }
  if (!out) throw ConfigError("failed writing hierarchy dump");
}

void write_hierarchy_dump(const std::string& path, const HeomGenerator& generator, double t, const CVector& state) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  write_hierarchy_dump(out, generator, t, state);
}

HierarchyDump read_hierarchy_dump(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw ConfigError("not a hierarchy dump");
  if (get<std::uint32_t>(in) != kVersion) throw ConfigError("unsupported hierarchy dump version");
  HierarchyDump dump;
  dump.dim = static_cast<int>(get<std::uint32_t>(in));
  dump.n_modes = static_cast<int>(get<std::uint32_t>(in));
  dump.tiers = static_cast<int>(get<std::uint32_t>(in));
  const auto n = get<std::uint64_t>(in);
  dump.time_fs = get<double>(in);
  dump.indices.assign(n, std::vector<int>(dump.n_modes));
  for (auto& v : dump.indices) {
    for (auto& x : v) x = get<std::int32_t>(in);
  }
  dump.ados.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    CMatrix a(dump.dim, dump.dim);
    for (Index r = 0; r < a.rows(); ++r) {
      for (Index c = 0; c < a.cols(); ++c) {
        const double re = get<double>(in);
        const double im = get<double>(in);
        a(r, c) = cplx(re, im);
      }
    }
    dump.ados.push_back(std::move(a));
  }
  return dump;
}

HierarchyDump read_hierarchy_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  return read_hierarchy_dump(in);
}

}  // namespace exciton::heom
