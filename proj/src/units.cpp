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
#include "exciton/units.hpp"

#include <string>

#include "exciton/types.hpp"

namespace exciton {

namespace {

bool is_energy(Unit u) { return u == Unit::Wavenumber || u == Unit::RadPerFs || u == Unit::Kelvin; }

double to_wavenumber(double v, Unit u) {
  switch (u) {
    case Unit::Wavenumber: return v;
    case Unit::RadPerFs: return angular_to_wavenumber(v);
    case Unit::Kelvin: return thermal_energy_cm(v);
    default: break;
  }
  throw ConfigError("not an energy unit");
}

double from_wavenumber(double v, Unit u) {
  switch (u) {
    case Unit::Wavenumber: return v;
    case Unit::RadPerFs: return wavenumber_to_angular(v);
    case Unit::Kelvin: return v / kBoltzmannCmPerK;
    default: break;
  }
  throw ConfigError("not an energy unit");
}

double fs_per(Unit u) {
  switch (u) {
    case Unit::Femtosecond: return 1.0;
    case Unit::Picosecond: return 1e3;
    case Unit::Nanosecond: return 1e6;
    default: break;
  }
  throw ConfigError("not a time unit");
}

}  // namespace

Unit parse_unit(std::string_view name) {
  if (name == "cm-1" || name == "cm^-1" || name == "cm1") return Unit::Wavenumber;
  if (name == "rad/fs") return Unit::RadPerFs;
  if (name == "K") return Unit::Kelvin;
  if (name == "fs") return Unit::Femtosecond;
  if (name == "ps") return Unit::Picosecond;
  if (name == "ns") return Unit::Nanosecond;
  throw ConfigError("unknown unit '" + std::string(name) + "'");
}

double unit_convert(double value, Unit from, Unit to) {
  if (is_energy(from) != is_energy(to)) {
    throw ConfigError("incompatible unit pair (energy vs time)");
  }
  if (is_energy(from)) return from_wavenumber(to_wavenumber(value, from), to);
  return value * fs_per(from) / fs_per(to);
}

}  // namespace exciton
