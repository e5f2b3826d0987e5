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
#include "exciton/trajectory.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "exciton/units.hpp"

namespace exciton::bathtraj {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t row, std::size_t col) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    std::ostringstream msg;
    msg << "trajectory row " << row << ", column " << col + 1 << ": cannot parse '" << s << "'";
    throw ConfigError(msg.str());
  }
  if (std::isnan(v)) {
    std::ostringstream msg;
    msg << "trajectory row " << row << ", column " << col + 1 << ": NaN entry";
    throw ConfigError(msg.str());
  }
  return v;
}

std::string format17(double v) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return out.str();
}

}  // namespace

void SiteEnergyTrajectory::validate() const {
  if (!(dt_fs > 0.0)) throw ConfigError("trajectory dt must be > 0");
  if (series.cols() < 1) throw ConfigError("trajectory has no site columns");
  if (couplings.size() > 0 && couplings.rows() != series.rows()) {
    throw ConfigError("trajectory coupling columns do not match the site columns in length");
  }
  if (!series.allFinite()) throw ConfigError("trajectory contains non-finite energies");
}

SiteEnergyTrajectory ingest_trajectory(std::istream& in) {
  SiteEnergyTrajectory traj;
  std::string line;
  std::vector<std::string> header;
  double dt_meta = 0.0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const auto eq = t.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = trim(t.substr(1, eq - 1));
      const std::string value = trim(t.substr(eq + 1));
      if (key == "dt_fs") dt_meta = std::stod(value);
      if (key == "source") traj.source = value;
      if (key == "seed") traj.seed = std::stoull(value);
      if (key == "temperature") traj.temperature_label = value;
      continue;
    }
    header = split(t);
    break;
  }
  if (header.empty() || header[0] != "t_fs") throw ConfigError("trajectory header must start with t_fs");
  std::size_t n_sites = 0;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c].rfind("site", 0) == 0) {
      if (!traj.coupling_names.empty()) throw ConfigError("site columns must precede coupling columns");
      ++n_sites;
    } else if (header[c].rfind("J_", 0) == 0) {
      traj.coupling_names.push_back(header[c]);
    } else {
      throw ConfigError("unknown trajectory column '" + header[c] + "'");
    }
  }
  if (n_sites == 0) throw ConfigError("trajectory has no site columns");

  std::vector<double> times, values;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    ++row;
    const auto fields = split(t);
    if (fields.size() != header.size()) {
      std::ostringstream msg;
      msg << "trajectory row " << row << " (line " << line_no << ") has " << fields.size() << " fields, expected "
          << header.size();
      throw ConfigError(msg.str());
    }
    const double time = parse_double(fields[0], row, 0);
    if (!times.empty() && !(time > times.back())) {
      std::ostringstream msg;
      msg << "trajectory row " << row << " (line " << line_no << "): time column is not increasing";
      throw ConfigError(msg.str());
    }
    times.push_back(time);
    for (std::size_t c = 1; c < fields.size(); ++c) values.push_back(parse_double(fields[c], row, c));
  }
  if (times.empty()) throw ConfigError("trajectory has no rows");

  const auto n = static_cast<Index>(times.size());
  const auto width = static_cast<Index>(header.size() - 1);
  const auto ns = static_cast<Index>(n_sites);
  traj.series.resize(n, ns);
  traj.couplings.resize(n, width - ns);
  for (Index r = 0; r < n; ++r) {
    for (Index c = 0; c < width; ++c) {
      const double v = values[static_cast<std::size_t>(r * width + c)];
      if (c < ns) {
        traj.series(r, c) = v;
      } else {
        traj.couplings(r, c - ns) = v;
      }
    }
  }
  if (dt_meta > 0.0) {
    traj.dt_fs = dt_meta;
  } else if (n >= 2) {
    traj.dt_fs = (times.back() - times.front()) / static_cast<double>(n - 1);
  } else {
    throw ConfigError("single-row trajectory needs a '# dt_fs=' line");
  }
  for (Index r = 0; r < n; ++r) {
    const double expect = times.front() + static_cast<double>(r) * traj.dt_fs;
    if (std::abs(times[static_cast<std::size_t>(r)] - expect) > 1e-6 * traj.dt_fs * std::max<double>(1.0, r)) {
      std::ostringstream msg;
      msg << "trajectory row " << r + 1 << ": time grid is not uniform";
      throw ConfigError(msg.str());
    }
  }
  traj.validate();
  return traj;
}

SiteEnergyTrajectory ingest_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trajectory file " + path);
  return ingest_trajectory(in);
}

void write_trajectory(std::ostream& out, const SiteEnergyTrajectory& traj) {
  traj.validate();
  out << "# dt_fs=" << format17(traj.dt_fs) << "\n";
  out << "# source=" << traj.source << "\n";
  out << "# seed=" << traj.seed << "\n";
  if (!traj.temperature_label.empty()) out << "# temperature=" << traj.temperature_label << "\n";
  out << "t_fs";
  for (int m = 0; m < traj.n_sites(); ++m) out << ",site" << m + 1 << "_cm1";
  for (const auto& name : traj.coupling_names) out << "," << name;
  out << "\n";
  const bool with_j = !traj.coupling_names.empty();
  for (Index r = 0; r < traj.n_steps(); ++r) {
    out << format17(static_cast<double>(r) * traj.dt_fs);
    for (Index c = 0; c < traj.series.cols(); ++c) out << "," << format17(traj.series(r, c));
    if (with_j) {
      for (Index c = 0; c < traj.couplings.cols(); ++c) out << "," << format17(traj.couplings(r, c));
    }
    out << "\n";
  }
  if (!out) throw ConfigError("failed writing trajectory");
}

void write_trajectory(const std::string& path, const SiteEnergyTrajectory& traj) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  write_trajectory(out, traj);
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t instance, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(instance), static_cast<std::uint32_t>(instance >> 32), stream};
  return std::mt19937_64(seq);
}

double ou_variance(const redfield::DrudeBath& bath) {
  return 2.0 * bath.reorganization_cm * thermal_energy_cm(bath.temperature_K);
}

namespace {

void fill_ou(Eigen::Ref<RVector> out, const redfield::DrudeBath& bath, double dt, std::mt19937_64& rng) {
  const double sigma = std::sqrt(ou_variance(bath));
  const double decay = std::exp(-bath.gamma * dt);
  const double kick = sigma * std::sqrt(-std::expm1(-2.0 * bath.gamma * dt));
  std::normal_distribution<double> normal(0.0, 1.0);
  double x = sigma * normal(rng);
  for (Index k = 0; k < out.size(); ++k) {
    out[k] = x;
    x = x * decay + kick * normal(rng);
  }
}

void check_ou_step(const redfield::DrudeBath& bath, double dt) {
  bath.validate();
  if (!(dt > 0.0)) throw ConfigError("time step must be > 0");
  if (dt > 0.1 / bath.gamma * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "OU time step " << dt << " fs is too coarse: need dt <= 0.1/gamma = " << 0.1 / bath.gamma << " fs";
    throw ConfigError(msg.str());
  }
}

}  // namespace

SiteEnergyTrajectory generate_ou_trajectory(const redfield::DrudeBath& bath, double dt_fs, Index n_steps, int n_sites,
                                            std::uint64_t seed, const RVector& means) {
  check_ou_step(bath, dt_fs);
  if (n_steps < 1 || n_sites < 1) throw ConfigError("trajectory needs at least one step and one site");
  if (means.size() != 0 && means.size() != n_sites) throw ConfigError("mean energies do not match the site count");
  SiteEnergyTrajectory traj;
  traj.dt_fs = dt_fs;
  traj.source = "synthetic";
  traj.seed = seed;
  std::ostringstream label;
  label << bath.temperature_K << " K";
  traj.temperature_label = label.str();
  traj.series.resize(n_steps, n_sites);
  RVector col(n_steps);
  for (int m = 0; m < n_sites; ++m) {
    auto rng = make_rng(seed, 0, static_cast<std::uint32_t>(m));
    fill_ou(col, bath, dt_fs, rng);
    traj.series.col(m) = col.array() + (means.size() ? means[m] : 0.0);
  }
  return traj;
}

OuSource::OuSource(redfield::DrudeBath bath, double dt_fs, Index n_steps, RVector means, std::uint64_t seed)
    : bath_(bath), dt_(dt_fs), n_steps_(n_steps), means_(std::move(means)), seed_(seed) {
  check_ou_step(bath_, dt_);
  if (n_steps_ < 1 || means_.size() < 1) throw ConfigError("OU source needs at least one step and one site");
}

RMatrix OuSource::instance(std::uint64_t k) const {
  RMatrix out(n_steps_, means_.size());
  RVector col(n_steps_);
  for (Index m = 0; m < means_.size(); ++m) {
    auto rng = make_rng(seed_, k, static_cast<std::uint32_t>(m));
    fill_ou(col, bath_, dt_, rng);
    out.col(m) = col.array() + means_[m];
  }
  return out;
}

StaticDisorderSource::StaticDisorderSource(RVector means, RVector sigma_cm, double dt_fs, Index n_steps,
                                           std::uint64_t seed)
    : means_(std::move(means)), sigma_(std::move(sigma_cm)), dt_(dt_fs), n_steps_(n_steps), seed_(seed) {
  if (means_.size() != sigma_.size() || means_.size() < 1) throw ConfigError("disorder widths do not match sites");
  if ((sigma_.array() < 0.0).any()) throw ConfigError("disorder widths must be >= 0");
  if (!(dt_ > 0.0) || n_steps_ < 1) throw ConfigError("disorder source needs dt > 0 and at least one step");
}

RMatrix StaticDisorderSource::instance(std::uint64_t k) const {
  auto rng = make_rng(seed_, k, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  RMatrix out(n_steps_, means_.size());
  for (Index m = 0; m < means_.size(); ++m) out.col(m).setConstant(means_[m] + sigma_[m] * normal(rng));
  return out;
}

WindowedTrajectorySource::WindowedTrajectorySource(std::shared_ptr<const SiteEnergyTrajectory> traj, Index window,
                                                   Index stride)
    : traj_(std::move(traj)), window_(window), stride_(stride) {
  if (!traj_) throw ConfigError("no trajectory given");
  traj_->validate();
  if (window_ < 1 || window_ > traj_->n_steps()) throw ConfigError("window longer than the trajectory");
  if (stride_ < 1) throw ConfigError("window stride must be >= 1");
  mean_ = traj_->mean_energies();
}

RMatrix WindowedTrajectorySource::instance(std::uint64_t k) const {
  const auto starts = static_cast<std::uint64_t>(traj_->n_steps() - window_ + 1);
  const auto start = static_cast<Index>((k * static_cast<std::uint64_t>(stride_)) % starts);
  return traj_->series.middleRows(start, window_);
}

}  // namespace exciton::bathtraj
