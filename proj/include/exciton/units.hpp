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

#include <string_view>

namespace exciton {

// Internal working units: rad/fs for generators, fs for time. cm^-1 appears
// only at I/O boundaries.
inline constexpr double kSpeedOfLightCmPerFs = 2.99792458e-5;
inline constexpr double kBoltzmannCmPerK = 0.695034800;
inline constexpr double kPi = 3.14159265358979323846;

enum class Unit { Wavenumber, RadPerFs, Kelvin, Femtosecond, Picosecond, Nanosecond };

Unit parse_unit(std::string_view name);

/// Converts between energy-like units (cm^-1, rad/fs, K via k_B) or between
/// time units (fs, ps, ns). Throws ConfigError for a mixed pair.
double unit_convert(double value, Unit from, Unit to);

constexpr double wavenumber_to_angular(double cm1) { return 2.0 * kPi * kSpeedOfLightCmPerFs * cm1; }
constexpr double angular_to_wavenumber(double w) { return w / (2.0 * kPi * kSpeedOfLightCmPerFs); }
constexpr double thermal_energy_cm(double kelvin) { return kBoltzmannCmPerK * kelvin; }

}  // namespace exciton
