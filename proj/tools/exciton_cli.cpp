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
// Command-line front end. Every command reads a JSON config (optional) and
// flags, flags winning, and writes plot-ready CSV (or JSON for qpt) with a
// metadata block. Exit codes: 0 ok, 1 numerical failure, 2 usage/config error.

#include <omp.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "exciton/efficiency.hpp"
#include "exciton/ensemble.hpp"
#include "exciton/heom.hpp"
#include "exciton/qpt.hpp"
#include "exciton/redfield.hpp"
#include "exciton/spectra.hpp"
#include "exciton/trajectory.hpp"

using json = nlohmann::json;
using namespace exciton;

namespace {

constexpr const char* kVersion = EXCITON_VERSION;

// Keys that never change results; left out of the config hash.
const std::vector<std::string> kUnhashed{"workers", "out", "config"};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct Binding {
  std::string key;
  CLI::Option* option;
  std::function<json()> value;
};

// One subcommand: its flags, the JSON keys they map to, and the defaults.
class Command {
 public:
  Command(CLI::App& app, const std::string& name, const std::string& help, json defaults)
      : app_(app.add_subcommand(name, help)), defaults_(std::move(defaults)) {
    app_->add_option("--config", config_path_, "JSON config file (flags override it)");
  }

  template <class T>
  Command& flag(const std::string& names, const std::string& key, const std::string& help) {
    auto holder = std::make_shared<T>();
    CLI::Option* opt = app_->add_option(names, *holder, help);
    bindings_.push_back({key, opt, [holder] { return json(*holder); }});
    return *this;
  }

  Command& toggle(const std::string& names, const std::string& key, const std::string& help) {
    CLI::Option* opt = app_->add_flag(names, help);
    bindings_.push_back({key, opt, [] { return json(true); }});
    return *this;
  }

  bool parsed() const { return app_->parsed(); }
  const std::string& name() const { return app_->get_name(); }

  json resolve() const {
    json cfg = defaults_;
    if (!config_path_.empty()) {
      std::ifstream in(config_path_);
      if (!in) throw ConfigError("cannot open config file " + config_path_);
      json file;
      try {
        file = json::parse(in);
      } catch (const json::exception& e) {
        throw ConfigError("malformed config file " + config_path_ + ": " + e.what());
      }
      if (!file.is_object()) throw ConfigError("config file " + config_path_ + " must hold a JSON object");
      // Paths in a config file are relative to the file.
      const auto base = std::filesystem::path(config_path_).parent_path();
      for (const char* key : {"system", "trajectory"}) {
        if (file.contains(key) && file[key].is_string() && !base.empty()) {
          const std::filesystem::path p = file[key].get<std::string>();
          if (p.is_relative()) file[key] = (base / p).string();
        }
      }
      cfg.update(file);
    }
    for (const auto& b : bindings_) {
      if (b.option->count() > 0) cfg[b.key] = b.value();
    }
    return cfg;
  }

 private:
  CLI::App* app_;
  json defaults_;
  std::string config_path_;
  std::vector<Binding> bindings_;
};

template <class T>
T get(const json& cfg, const std::string& key) {
  if (!cfg.contains(key) || cfg[key].is_null()) throw ConfigError("missing setting '" + key + "'");
  try {
    return cfg[key].get<T>();
  } catch (const json::exception&) {
    throw ConfigError("setting '" + key + "' has the wrong type");
  }
}

bool has(const json& cfg, const std::string& key) { return cfg.contains(key) && !cfg[key].is_null(); }

// "start:stop:count", inclusive of both ends.
std::vector<double> parse_grid(const std::string& text, const std::string& what) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw ConfigError(what + " must be start:stop:count, got '" + text + "'");
  double start = 0.0, stop = 0.0;
  long count = 0;
  try {
    std::size_t used = 0;
    start = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
    stop = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
    count = std::stol(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument(parts[2]);
  } catch (const std::logic_error&) {
    throw ConfigError(what + " must be start:stop:count, got '" + text + "'");
  }
  if (count < 1) throw ConfigError(what + " is empty ('" + text + "')");
  if (count == 1) return {start};
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) grid[i] = start + (stop - start) * static_cast<double>(i) / (count - 1);
  return grid;
}

std::vector<int> parse_sites(const std::string& text, int n) {
  std::vector<int> sites;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) {
    try {
      sites.push_back(std::stoi(p));
    } catch (const std::logic_error&) {
      throw ConfigError("initial sites must be comma-separated integers, got '" + text + "'");
    }
    if (sites.back() < 0 || sites.back() >= n) throw ConfigError("initial site " + p + " out of range (0-based)");
  }
  if (sites.empty()) throw ConfigError("no initial site given");
  return sites;
}

ExcitonSystem configured_system(const json& cfg) {
  if (!has(cfg, "system")) throw ConfigError("--system is required");
  ExcitonSystem s = load_system(get<std::string>(cfg, "system"));
  if (has(cfg, "lambda_cm1")) s.reorganization_cm = get<double>(cfg, "lambda_cm1");
  if (has(cfg, "temperature_K")) s.temperature_K = get<double>(cfg, "temperature_K");
  if (has(cfg, "gamma_fs")) s.bath_correlation_fs = get<double>(cfg, "gamma_fs");
  if (has(cfg, "trap_ps")) {
    const double t = get<double>(cfg, "trap_ps");
    if (!(t > 0.0)) throw ConfigError("--trap-ps must be > 0");
    s.trap_rate_per_fs = 1.0 / (t * 1e3);
  }
  if (has(cfg, "loss_ns")) {
    const double t = get<double>(cfg, "loss_ns");
    if (!(t > 0.0)) throw ConfigError("--loss-ns must be > 0");
    s.loss_rate_per_fs = 1.0 / (t * 1e6);
  }
  if (has(cfg, "trap_site")) s.trap_site = get<int>(cfg, "trap_site");
  s.validate();
  return s;
}

int worker_count(const json& cfg) {
  const int w = has(cfg, "workers") ? get<int>(cfg, "workers") : 0;
  if (w < 0) throw ConfigError("--workers must be >= 0");
  return w == 0 ? omp_get_max_threads() : w;
}

std::uint64_t seed_of(const json& cfg) { return has(cfg, "seed") ? get<std::uint64_t>(cfg, "seed") : 0; }

std::string config_hash(const std::string& command, json cfg, const std::optional<ExcitonSystem>& system) {
  for (const auto& k : kUnhashed) cfg.erase(k);
  cfg["command"] = command;
  if (system) cfg["resolved_system"] = system_to_json(*system);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(cfg.dump())));
  return buf;
}

// Output stream: a file, or stdout for "" / "-".
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw ConfigError("cannot write output file " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void metadata(std::ostream& os, const std::string& command, const std::string& hash, std::uint64_t seed) {
  os << "# exciton " << kVersion << "\n";
  os << "# command=" << command << "\n";
  os << "# config_hash=fnv1a64:" << hash << "\n";
  os << "# seed=" << seed << "\n";
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

redfield::DephasingModel dephasing_of(const json& cfg) {
  const auto name = has(cfg, "dephasing") ? get<std::string>(cfg, "dephasing") : "exciton";
  if (name == "exciton") return redfield::DephasingModel::exciton;
  if (name == "site") return redfield::DephasingModel::site;
  throw ConfigError("--dephasing must be exciton or site, got '" + name + "'");
}

heom::HeomOptions heom_options(const json& cfg) {
  heom::HeomOptions opt;
  opt.tiers = get<int>(cfg, "tiers");
  opt.n_matsubara = get<int>(cfg, "matsubara");
  opt.allow_low_temperature = has(cfg, "allow_low_temperature") && get<bool>(cfg, "allow_low_temperature");
  return opt;
}

std::string model_of(const json& cfg) {
  const auto m = get<std::string>(cfg, "model");
  if (m != "redfield" && m != "heom") throw ConfigError("--model must be redfield or heom, got '" + m + "'");
  return m;
}

// --- efficiency-sweep ---------------------------------------------------------

int cmd_efficiency_sweep(const json& cfg) {
  const ExcitonSystem base = configured_system(cfg);
  const std::string model = model_of(cfg);
  const auto grid = parse_grid(get<std::string>(cfg, "lambda_sweep"), "lambda sweep");
  const auto sites = parse_sites(get<std::string>(cfg, "initial"), base.n_sites());
  const int workers = worker_count(cfg);
  const auto ro_dephasing = dephasing_of(cfg);
  const auto hopt = heom_options(cfg);

  const int n = base.n_sites();
  CMatrix rho0 = CMatrix::Zero(n, n);
  std::vector<std::pair<double, CVector>> mixture;
  std::string label;
  for (int s : sites) {
    rho0 += site_state(n, s) / static_cast<double>(sites.size());
    mixture.emplace_back(1.0 / static_cast<double>(sites.size()), CVector::Unit(n, s));
    label += (label.empty() ? "" : "+") + std::to_string(s);
  }

  std::vector<std::string> rows(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());
#pragma omp parallel for num_threads(workers) schedule(dynamic, 1) if (workers > 1)
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      ExcitonSystem s = base;
      s.reorganization_cm = grid[i];
      EfficiencyReport r;
      CoherenceReport c;
      double eta_init = std::nan("");
      if (model == "redfield") {
        redfield::RedfieldOptions ro;
        ro.dephasing = ro_dephasing;
        const auto m = redfield::build_redfield_generator(s, ro);
        const auto parts = redfield_parts(m);
        r = efficiency_report(parts, rho0);
        eta_init = initial_state_contribution(m, mixture);
        c = integrated_coherence(parts, rho0, s);
      } else {
        const heom::HeomGenerator g(s, hopt);
        const auto parts = heom_parts(g);
        r = efficiency_report(parts, rho0);
        c = integrated_coherence(parts, rho0, s);
      }
      rows[i] = num(grid[i]) + "," + num(r.eta) + "," + num(r.eta_H) + "," + num(r.eta_decoherence) + "," +
                num(eta_init) + "," + num(r.eta_H - eta_init) + "," + num(c.C) + "," + num(c.C_normalized) + "," +
                model + "," + label;
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  Sink out(has(cfg, "out") ? get<std::string>(cfg, "out") : "");
  metadata(out.os(), "efficiency-sweep", config_hash("efficiency-sweep", cfg, base), seed_of(cfg));
  out.os() << "lambda_cm1,eta,eta_H,eta_decoherence,eta_init,eta_dyn,C,C_normalized,model,initial_state\n";
  for (const auto& r : rows) out.os() << r << "\n";
  return 0;
}

// --- trajectory sources -------------------------------------------------------

redfield::DrudeBath bath_of(const ExcitonSystem& s) { return redfield::DrudeBath::from_system(s); }

std::shared_ptr<const bathtraj::SiteEnergyTrajectory> ingested(const json& cfg) {
  return std::make_shared<const bathtraj::SiteEnergyTrajectory>(
      bathtraj::ingest_trajectory(get<std::string>(cfg, "trajectory")));
}

std::uint64_t distinct_windows(Index steps, Index window, Index stride) {
  return static_cast<std::uint64_t>((steps - window) / stride + 1);
}

// --- mc-ensemble --------------------------------------------------------------

int cmd_mc_ensemble(const json& cfg) {
  const ExcitonSystem sys = configured_system(cfg);
  const int workers = worker_count(cfg);
  const std::uint64_t seed = seed_of(cfg);
  const int initial = get<int>(cfg, "initial_site");
  if (initial < 0 || initial >= sys.n_sites()) throw ConfigError("--initial-site out of range (0-based)");

  bathtraj::EnsembleOptions opt;
  opt.sample_stride = get<Index>(cfg, "sample_stride");
  std::unique_ptr<bathtraj::TrajectorySource> source;
  if (has(cfg, "trajectory")) {
    const auto traj = ingested(cfg);
    const Index window = get<Index>(cfg, "window_steps");
    const Index stride = get<Index>(cfg, "window_stride");
    if (window > traj->n_steps()) throw ConfigError("--window-steps exceeds the trajectory length");
    source = std::make_unique<bathtraj::WindowedTrajectorySource>(traj, window, stride);
    opt.n_instances = has(cfg, "instances") ? get<std::uint64_t>(cfg, "instances")
                                            : distinct_windows(traj->n_steps(), window, stride);
  } else {
    source = std::make_unique<bathtraj::OuSource>(bath_of(sys), get<double>(cfg, "dt_fs"), get<Index>(cfg, "steps"),
                                                  sys.site_energies_cm, seed);
    opt.n_instances = has(cfg, "instances") ? get<std::uint64_t>(cfg, "instances") : 4000;
  }
  if (source->n_sites() != sys.n_sites()) throw ConfigError("trajectory and system have different site counts");

  omp_set_num_threads(workers);
  const auto r = bathtraj::mc_unitary_ensemble(*source, sys.couplings_cm, site_state(sys.n_sites(), initial), opt);

  Sink out(has(cfg, "out") ? get<std::string>(cfg, "out") : "");
  metadata(out.os(), "mc-ensemble", config_hash("mc-ensemble", cfg, sys), seed);
  out.os() << "# instances=" << r.n_instances << "\n";
  const int n = sys.n_sites();
  out.os() << "t_fs";
  for (int m = 0; m < n; ++m) out.os() << ",rho" << m << m;
  out.os() << ",rho00_stderr," << (n == 2 ? "concurrence" : "coherence_l1") << "\n";
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    const CMatrix& rho = r.rho[k];
    out.os() << num(r.times[k]);
    for (int m = 0; m < n; ++m) out.os() << "," << num(rho(m, m).real());
    double coh = 0.0;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) coh += a == b ? 0.0 : std::abs(rho(a, b));
    }
    out.os() << "," << num(r.rho11_stderr[static_cast<Index>(k)]) << "," << num(coh) << "\n";
  }
  return 0;
}

// --- spectra ------------------------------------------------------------------

int cmd_spectra(const json& cfg) {
  if (!has(cfg, "out")) throw ConfigError("--out (file prefix) is required");
  const std::string prefix = get<std::string>(cfg, "out");
  const std::uint64_t seed = seed_of(cfg);
  omp_set_num_threads(worker_count(cfg));

  std::shared_ptr<const bathtraj::SiteEnergyTrajectory> traj;
  std::optional<ExcitonSystem> sys;
  double temperature = 0.0;
  if (has(cfg, "trajectory")) {
    traj = ingested(cfg);
    if (!has(cfg, "temperature_K")) throw ConfigError("--temperature-K is required with an ingested trajectory");
    temperature = get<double>(cfg, "temperature_K");
  } else {
    sys = configured_system(cfg);
    temperature = sys->temperature_K;
    traj = std::make_shared<const bathtraj::SiteEnergyTrajectory>(bathtraj::generate_ou_trajectory(
        bath_of(*sys), get<double>(cfg, "dt_fs"), get<Index>(cfg, "steps"), sys->n_sites(), seed,
        sys->site_energies_cm));
  }
  const int site = get<int>(cfg, "site");
  if (site < 0 || site >= traj->n_sites()) throw ConfigError("--site out of range (0-based)");

  bathtraj::SpectralDensityOptions sopt;
  sopt.correction = bathtraj::parse_correction(get<std::string>(cfg, "correction"));
  const auto w = parse_grid(get<std::string>(cfg, "omega"), "omega grid");
  const RVector omega = Eigen::Map<const RVector>(w.data(), static_cast<Index>(w.size()));
  const RVector c = bathtraj::site_autocorrelation(*traj, site, get<Index>(cfg, "max_lag"));
  const RVector j = bathtraj::spectral_density_from_autocorrelation(c, traj->dt_fs, temperature, omega, sopt);

  const Index window = get<Index>(cfg, "window_steps");
  const Index stride = get<Index>(cfg, "window_stride");
  if (window > traj->n_steps()) throw ConfigError("--window-steps exceeds the trajectory length");
  const bathtraj::WindowedTrajectorySource windows(traj, window, stride);
  bathtraj::AbsorptionOptions aopt;
  aopt.n_instances = distinct_windows(traj->n_steps(), window, stride);
  aopt.window_fs = get<double>(cfg, "absorption_window_fs");
  const double centre = windows.reference_energies()[site];
  const auto d = parse_grid(get<std::string>(cfg, "detuning"), "detuning grid");
  RVector absolute(static_cast<Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) absolute[static_cast<Index>(i)] = centre + d[i];
  const RVector a = bathtraj::absorption_spectrum(windows, site, absolute, centre, aopt);

  const std::string hash = config_hash("spectra", cfg, sys);
  auto write = [&](const std::string& path, const RVector& x, const RVector& y, const char* extra) {
    Sink out(path);
    metadata(out.os(), "spectra", hash, seed);
    out.os() << extra << "omega_cm1,value\n";
    for (Index i = 0; i < x.size(); ++i) out.os() << num(x[i]) << "," << num(y[i]) << "\n";
  };
  write(prefix + "_J.csv", omega, j, "# quantity=spectral density J(w) in cm^-1\n");
  write(prefix + "_A.csv", absolute, a, "# quantity=absorption, unit peak height\n");
  return 0;
}

// --- generate-trajectory ------------------------------------------------------

int cmd_generate_trajectory(const json& cfg) {
  const ExcitonSystem sys = configured_system(cfg);
  const std::uint64_t seed = seed_of(cfg);
  auto traj = bathtraj::generate_ou_trajectory(bath_of(sys), get<double>(cfg, "dt_fs"), get<Index>(cfg, "steps"),
                                               sys.n_sites(), seed, sys.site_energies_cm);
  traj.temperature_label = num(sys.temperature_K) + " K";
  Sink out(has(cfg, "out") ? get<std::string>(cfg, "out") : "");
  out.os() << "# exciton " << kVersion << "\n";
  out.os() << "# config_hash=fnv1a64:" << config_hash("generate-trajectory", cfg, sys) << "\n";
  bathtraj::write_trajectory(out.os(), traj);
  return 0;
}

// --- qpt ----------------------------------------------------------------------

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json tensor_json(const qpt::ProcessTensor& chi) {
  json elements = json::object();
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (int c = 0; c < 3; ++c) {
        for (int d = 0; d < 3; ++d) {
          if (!chi.is_known(a, b, c, d)) continue;
          const std::string key = std::string("chi_") + qpt::level_name(a) + qpt::level_name(b) + "," +
                                  qpt::level_name(c) + qpt::level_name(d);
          elements[key] = complex_json(chi(a, b, c, d));
        }
      }
    }
  }
  return elements;
}

int cmd_qpt(const json& cfg) {
  const ExcitonSystem sys = configured_system(cfg);
  if (sys.n_sites() != 2) throw ConfigError("qpt needs a two-site system");
  const std::string model = model_of(cfg);
  const auto times = parse_grid(get<std::string>(cfg, "times"), "waiting-time grid");
  const std::uint64_t seed = seed_of(cfg);
  const double noise = get<double>(cfg, "noise");
  if (!(noise >= 0.0)) throw ConfigError("--noise must be >= 0");
  omp_set_num_threads(worker_count(cfg));

  const auto chis = model == "redfield" ? qpt::chi_redfield(sys, times) : qpt::chi_heom(sys, heom_options(cfg), times);
  const auto levels = qpt::dimer_level_system(sys, get<double>(cfg, "optical_dephasing_fs"));
  const auto experiments = qpt::waveform_experiments(levels);
  const bool round_trip = has(cfg, "round_trip") && get<bool>(cfg, "round_trip");

  json doc;
  doc["metadata"] = {{"tool", "exciton"},
                     {"version", kVersion},
                     {"command", "qpt"},
                     {"config_hash", "fnv1a64:" + config_hash("qpt", cfg, sys)},
                     {"seed", seed},
                     {"model", model},
                     {"levels", {"g", "a (upper exciton)", "b (lower exciton)"}}};
  doc["points"] = json::array();
  double worst = 0.0;
  for (std::size_t k = 0; k < chis.size(); ++k) {
    const auto& chi = chis[k];
    json point{{"T_fs", chi.T}, {"chi", tensor_json(chi)}};
    std::vector<qpt::PeakAmplitudeSet> data;
    auto rng = bathtraj::make_rng(seed, k, 7);
    std::normal_distribution<double> gauss(0.0, noise);
    json peaks = json::array();
    for (const auto& pulses : experiments) {
      auto set = qpt::synthesize_peaks(chi, levels, pulses);
      if (noise > 0.0) {
        for (auto& p : set.peaks) p += cplx(gauss(rng), gauss(rng));
      }
      json row = json::array();
      for (const auto& p : set.peaks) row.push_back(complex_json(p));
      peaks.push_back(row);
      data.push_back(set);
    }
    point["peaks"] = peaks;
    if (round_trip) {
      const auto inv = qpt::qpt_invert(data, levels, chi.T);
      double err = 0.0;
      for (std::size_t i = 0; i < chi.chi.size(); ++i) {
        if (inv.chi.known[i]) err = std::max(err, std::abs(inv.chi.chi[i] - chi.chi[i]));
      }
      worst = std::max(worst, err);
      const auto v = qpt::validate_process(inv.chi);
      point["inversion"] = {{"chi", tensor_json(inv.chi)},
                            {"max_abs_error", err},
                            {"residual_norm", inv.diagnostics.residual_norm},
                            {"condition_number", inv.diagnostics.condition_number},
                            {"noise_gain", inv.diagnostics.noise_gain},
                            {"warning", inv.diagnostics.warning},
                            {"choi_min_eigenvalue", v.choi_min_eigenvalue},
                            {"trace_residual", std::max(v.trace_residual_alpha, v.trace_residual_beta)}};
    }
    doc["points"].push_back(point);
  }
  if (round_trip) doc["round_trip_max_abs_error"] = worst;

  Sink out(has(cfg, "out") ? get<std::string>(cfg, "out") : "");
  out.os() << doc.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exciton transfer: efficiency, coherence, trajectories and process tomography"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  const json system_defaults{{"model", "redfield"}, {"tiers", 4}, {"matsubara", 0}, {"seed", 0}, {"workers", 0}};
  auto with = [&](json extra) {
    json j = system_defaults;
    j.update(extra);
    return j;
  };
  auto system_flags = [](Command& c) {
    c.flag<std::string>("--system", "system", "system JSON file")
        .flag<double>("--temperature-K", "temperature_K", "bath temperature (K)")
        .flag<double>("--trap-ps", "trap_ps", "trapping time 1/kappa (ps)")
        .flag<double>("--loss-ns", "loss_ns", "loss time 1/Gamma (ns)")
        .flag<double>("--gamma-fs", "gamma_fs", "bath correlation time 1/gamma (fs)")
        .flag<int>("--trap-site", "trap_site", "trap site (0-based)")
        .flag<std::uint64_t>("--seed", "seed", "random seed")
        .flag<int>("--workers", "workers", "worker threads (0: all available)")
        .flag<std::string>("--out", "out", "output path ('-' or empty: stdout)");
  };
  auto model_flags = [](Command& c) {
    c.flag<std::string>("--model", "model", "redfield | heom")
        .flag<int>("--tiers", "tiers", "HEOM hierarchy depth L")
        .flag<int>("--matsubara", "matsubara", "HEOM Matsubara terms per site")
        .toggle("--allow-low-temperature", "allow_low_temperature", "permit beta*gamma > 1 with < 2 Matsubara terms")
        .flag<std::string>("--dephasing", "dephasing", "Redfield pure dephasing: exciton | site");
  };

  std::vector<std::pair<std::unique_ptr<Command>, std::function<int(const json&)>>> commands;

  auto sweep = std::make_unique<Command>(app, "efficiency-sweep", "efficiency and coherence over a lambda grid",
                                         with({{"initial", "0"}}));
  system_flags(*sweep);
  model_flags(*sweep);
  sweep->flag<std::string>("--lambda-sweep", "lambda_sweep", "reorganization energies start:stop:count (cm^-1)")
      .flag<std::string>("--initial", "initial", "initial site, or comma-separated sites for an equal mixture (0-based)");
  commands.emplace_back(std::move(sweep), cmd_efficiency_sweep);

  auto mc = std::make_unique<Command>(
      app, "mc-ensemble", "Monte-Carlo unitary ensemble under fluctuating site energies",
      with({{"initial_site", 0}, {"dt_fs", 2.0}, {"steps", 500}, {"sample_stride", 1}, {"window_steps", 500},
            {"window_stride", 50}}));
  system_flags(*mc);
  mc->flag<double>("--lambda", "lambda_cm1", "reorganization energy (cm^-1) of the synthetic bath")
      .flag<std::string>("--trajectory", "trajectory", "site-energy trajectory CSV (otherwise synthetic OU)")
      .flag<int>("--initial-site", "initial_site", "initial site (0-based)")
      .flag<double>("--dt-fs", "dt_fs", "synthetic time step (fs)")
      .flag<Index>("--steps", "steps", "synthetic steps per instance")
      .flag<std::uint64_t>("--instances", "instances", "ensemble size")
      .flag<Index>("--sample-stride", "sample_stride", "output every n-th step")
      .flag<Index>("--window-steps", "window_steps", "window length for an ingested trajectory")
      .flag<Index>("--window-stride", "window_stride", "window start spacing for an ingested trajectory");
  commands.emplace_back(std::move(mc), cmd_mc_ensemble);

  auto spectra = std::make_unique<Command>(
      app, "spectra", "spectral density and absorption from a site-energy trajectory",
      with({{"site", 0}, {"dt_fs", 5.0}, {"steps", 400000}, {"max_lag", 200}, {"correction", "harmonic"},
            {"omega", "0:600:121"}, {"detuning", "-400:400:401"}, {"window_steps", 200}, {"window_stride", 100},
            {"absorption_window_fs", 0.0}}));
  system_flags(*spectra);
  spectra->flag<double>("--lambda", "lambda_cm1", "reorganization energy (cm^-1) of the synthetic bath")
      .flag<std::string>("--trajectory", "trajectory", "site-energy trajectory CSV (otherwise synthetic OU)")
      .flag<int>("--site", "site", "site (0-based)")
      .flag<double>("--dt-fs", "dt_fs", "synthetic time step (fs)")
      .flag<Index>("--steps", "steps", "synthetic trajectory length")
      .flag<Index>("--max-lag", "max_lag", "autocorrelation lags")
      .flag<std::string>("--correction", "correction", "quantum correction: none | standard | harmonic")
      .flag<std::string>("--omega", "omega", "J(w) grid start:stop:count (cm^-1)")
      .flag<std::string>("--detuning", "detuning", "absorption grid around the mean site energy (cm^-1)")
      .flag<Index>("--window-steps", "window_steps", "absorption response length (steps)")
      .flag<Index>("--window-stride", "window_stride", "absorption window start spacing (steps)")
      .flag<double>("--absorption-window-fs", "absorption_window_fs", "Gaussian window on the response (fs)");
  commands.emplace_back(std::move(spectra), cmd_spectra);

  auto qpt = std::make_unique<Command>(
      app, "qpt", "process tensor, synthetic 2D peaks and tomographic inversion for a dimer",
      with({{"times", "0:1000:21"}, {"optical_dephasing_fs", 100.0}, {"noise", 0.0}, {"tiers", 8}}));
  system_flags(*qpt);
  model_flags(*qpt);
  qpt->flag<double>("--lambda", "lambda_cm1", "reorganization energy (cm^-1)")
      .flag<std::string>("--times", "times", "waiting times start:stop:count (fs)")
      .flag<double>("--optical-dephasing-fs", "optical_dephasing_fs", "optical coherence lifetime (fs)")
      .flag<double>("--noise", "noise", "std of complex Gaussian noise added to each peak")
      .toggle("--round-trip", "round_trip", "invert the synthetic peaks and report the error");
  commands.emplace_back(std::move(qpt), cmd_qpt);

  auto gen = std::make_unique<Command>(app, "generate-trajectory", "synthetic Ornstein-Uhlenbeck site energies",
                                       with({{"dt_fs", 2.0}, {"steps", 10000}}));
  system_flags(*gen);
  gen->flag<double>("--lambda", "lambda_cm1", "reorganization energy (cm^-1)")
      .flag<double>("--dt-fs", "dt_fs", "time step (fs)")
      .flag<Index>("--steps", "steps", "number of steps");
  commands.emplace_back(std::move(gen), cmd_generate_trajectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  for (const auto& [command, run] : commands) {
    if (!command->parsed()) continue;
    try {
      return run(command->resolve());
    } catch (const ConfigError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    } catch (const NumericalError& e) {
      std::cerr << "numerical failure: " << e.what() << "\n";
      return 1;
    } catch (const std::exception& e) {
      std::cerr << "numerical failure: " << e.what() << "\n";
      return 1;
    }
  }
  return 2;
}
