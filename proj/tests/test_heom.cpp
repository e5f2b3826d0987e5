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
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include <doctest.h>

#include "exciton/heom.hpp"
#include "exciton/heom_dump.hpp"
#include "exciton/redfield.hpp"
#include "exciton/units.hpp"

using namespace exciton;
using namespace exciton::heom;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

ExcitonSystem closed(ExcitonSystem s) {
  s.trap_rate_per_fs = 0.0;
  s.loss_rate_per_fs = 0.0;
  return s;
}

// Brute-force enumeration of multi-indices with total <= L.
std::uint64_t enumerate(int modes, int tiers) {
  std::uint64_t count = 0;
  std::function<void(int, int)> rec = [&](int mode, int left) {
    if (mode == modes) {
      ++count;
      return;
    }
    for (int n = 0; n <= left; ++n) rec(mode + 1, left - n);
  };
  rec(0, tiers);
  return count;
}

}  // namespace

TEST_CASE("hierarchy size") {
  CHECK(hierarchy_size(2, 1, 15) == 136);
  CHECK(hierarchy_size(7, 1, 4) == 330);
  CHECK(hierarchy_size(7, 0) == 1);
  for (int b = 1; b <= 5; ++b)
    for (int l = 0; l <= 6; ++l) CHECK(hierarchy_size(b, l) == enumerate(b, l));
  CHECK_THROWS_AS(hierarchy_size(400, 400), ConfigError);
}

TEST_CASE("memory budget") {
  CHECK_NOTHROW(check_memory_budget(330, 7, std::uint64_t{1} << 30));
  try {
    check_memory_budget(hierarchy_size(21, 10), 7, std::uint64_t{1} << 20);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(std::to_string(hierarchy_memory_bytes(hierarchy_size(21, 10), 7))) !=
          std::string::npos);
  }
  HeomOptions opt;
  opt.tiers = 12;
  opt.memory_budget_bytes = 1 << 20;
  CHECK_THROWS_AS(HeomGenerator(fmo_system(), opt), ConfigError);
}

TEST_CASE("hierarchy index set") {
  const HierarchyIndexSet set(3, 4);
  REQUIRE(set.size() == hierarchy_size(3, 4));
  std::set<std::vector<int>> seen;
  int prev_tier = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    std::vector<int> n(set.index(i), set.index(i) + 3);
    CHECK(seen.insert(n).second);
    CHECK(set.tier(i) == n[0] + n[1] + n[2]);
    CHECK(set.tier(i) >= prev_tier);
    prev_tier = set.tier(i);
    CHECK(set.find(n) == static_cast<std::int64_t>(i));
    for (int k = 0; k < 3; ++k) {
      const auto up = set.plus(i, k);
      if (set.tier(i) == 4) {
        CHECK(up == -1);
      } else {
        REQUIRE(up >= 0);
        CHECK(set.count(up, k) == n[k] + 1);
        CHECK(set.minus(up, k) == static_cast<std::int64_t>(i));
      }
      if (n[k] == 0) CHECK(set.minus(i, k) == -1);
    }
  }
  CHECK(set.tier(0) == 0);
  CHECK(set.find({5, 0, 0}) == -1);
  const auto& off = set.tier_offsets();
  REQUIRE(off.size() == 6);
  CHECK(off.back() == set.size());
  for (int t = 0; t <= 4; ++t) CHECK(set.tier(off[t]) == t);
}

TEST_CASE("Drude correlation modes") {
  const ExcitonSystem s = dimer_system(35.0);
  const double lambda = wavenumber_to_angular(35.0);
  const double kT = wavenumber_to_angular(thermal_energy_cm(300.0));
  const auto modes = drude_modes(s, 2);
  REQUIRE(modes.size() == 6);
  // Site-major: site * (1 + K) + m.
  CHECK(modes[0].site == 0);
  CHECK(modes[3].site == 1);
  CHECK(modes[0].nu == doctest::Approx(s.gamma()));
  CHECK(modes[0].c.imag() == doctest::Approx(-lambda * s.gamma()));
  CHECK(modes[0].c.real() == doctest::Approx(lambda * s.gamma() / std::tan(s.gamma() / (2.0 * kT))));
  // High-temperature limit of the cotangent term: 2 lambda kT.
  CHECK(modes[0].c.real() == doctest::Approx(2.0 * lambda * kT).epsilon(0.03));
  CHECK(modes[1].nu == doctest::Approx(2.0 * kPi * kT));
  const double nu1 = 2.0 * kPi * kT, g = s.gamma();
  CHECK(modes[1].c.real() == doctest::Approx(4.0 * lambda * g * kT * nu1 / (nu1 * nu1 - g * g)));
  CHECK(modes[1].c.imag() == 0.0);
}

TEST_CASE("low temperature needs Matsubara terms") {
  ExcitonSystem cold = dimer_system(35.0);
  cold.temperature_K = 77.0;
  HeomOptions opt;
  opt.tiers = 2;
  CHECK_THROWS_AS(HeomGenerator(cold, opt), ConfigError);
  opt.n_matsubara = 1;
  CHECK_THROWS_AS(HeomGenerator(cold, opt), ConfigError);
  opt.n_matsubara = 2;
  CHECK_NOTHROW(HeomGenerator(cold, opt));
  opt.n_matsubara = 0;
  opt.allow_low_temperature = true;
  CHECK_NOTHROW(HeomGenerator(cold, opt));
  opt.allow_low_temperature = false;
  CHECK_NOTHROW(HeomGenerator(dimer_system(35.0), opt));
}

TEST_CASE("parallel, serial and assembled generators agree") {
  for (bool ground : {false, true}) {
    HeomOptions opt;
    opt.tiers = 3;
    opt.n_matsubara = 1;
    opt.with_ground_state = ground;
    const HeomGenerator g(fmo_system(35.0), opt);
    std::srand(11);
    const CVector x = CVector::Random(g.state_size());
    CVector y1, y2;
    g.apply(x, y1);
    g.apply_serial(x, y2);
    const auto parts = g.assemble();
    const CVector y3 = (parts.coherent + parts.decoherence + parts.trap + parts.loss) * x;
    CHECK((y1 - y2).norm() < 1e-12 * y1.norm());
    CHECK((y1 - y3).norm() < 1e-12 * y1.norm());
  }
}

TEST_CASE("tier couplings only reach neighbouring tiers") {
  HeomOptions opt;
  opt.tiers = 4;
  const HeomGenerator g(fmo_system(35.0), opt);
  const SparseC m = g.assemble().decoherence;
  const Index d2 = 49;
  for (Index col = 0; col < m.outerSize(); ++col) {
    for (SparseC::InnerIterator it(m, col); it; ++it) {
      const int tr = g.indices().tier(static_cast<std::size_t>(it.row() / d2));
      const int tc = g.indices().tier(static_cast<std::size_t>(it.col() / d2));
      CHECK(std::abs(tr - tc) <= 1);
    }
  }
}

TEST_CASE("lambda = 0 reduces to coherent dynamics with trap and loss") {
  HeomOptions opt;
  opt.tiers = 3;
  const ExcitonSystem s = dimer_system(0.0);
  const HeomGenerator g(s, opt);
  for (std::size_t i = 0; i < g.n_ados(); ++i)
    for (std::size_t k = 0; k < g.modes().size(); ++k) {
      CHECK(g.plus_coefficient(i, static_cast<int>(k)) == 0.0);
      CHECK(g.minus_coefficient(i, static_cast<int>(k)) == 0.0);
    }
  const auto grid = linspace(0.0, 1000.0, 21);
  OdeOptions tight;
  tight.rtol = 1e-11;
  tight.atol = 1e-13;
  const auto h = propagate_heom(g, site_state(2, 0), grid, tight);
  const auto model = redfield::build_redfield_generator(s);
  const auto r = redfield::propagate_expm(model.full(), site_state(2, 0), grid);
  for (std::size_t k = 0; k < grid.size(); ++k) CHECK((h[k] - r[k]).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("zero generator keeps the state") {
  ExcitonSystem s = closed(dimer_system(0.0));
  s.couplings_cm.setZero();
  s.site_energies_cm.setZero();
  HeomOptions opt;
  opt.tiers = 1;
  CMatrix rho = site_state(2, 0);
  rho(0, 1) = rho(1, 0) = 0.3;
  const auto traj = propagate_heom(HeomGenerator(s, opt), rho, linspace(0.0, 500.0, 6));
  for (const auto& r : traj) CHECK((r - rho).norm() < 1e-14);
}

TEST_CASE("dimer L=15: trace, Hermiticity, positivity, tier convergence") {
  HeomOptions opt;
  opt.tiers = 15;
  const HeomGenerator g(closed(dimer_system(35.0)), opt);
  const auto grid = linspace(0.0, 1000.0, 51);
  OdeOptions tight;
  tight.rtol = 1e-10;
  tight.atol = 1e-12;
  double max_ado_asym = 0.0;
  const auto traj = propagate_heom(g, site_state(2, 0), grid, tight, [&](double, const CVector& y) {
    for (std::size_t i = 0; i < g.n_ados(); ++i) {
      const CMatrix a = g.ado(y, i);
      max_ado_asym = std::max(max_ado_asym, (a - a.adjoint()).cwiseAbs().maxCoeff());
    }
  });
  for (const auto& r : traj) {
    CHECK(std::abs(r.trace() - 1.0) < 1e-9);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(r, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= -1e-6);
  }
  CHECK(max_ado_asym < 1e-10);

  opt.tiers = 20;
  const auto deep = propagate_heom(HeomGenerator(closed(dimer_system(35.0)), opt), site_state(2, 0), grid, tight);
  double diff = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) diff = std::max(diff, (deep[k] - traj[k]).cwiseAbs().maxCoeff());
  CHECK(diff < 1e-6);
}

TEST_CASE("weak coupling agrees with secular Redfield") {
  // The site dephasing form is the weak-coupling limit. What is left is the
  // bath-induced frequency shift secular Redfield drops, growing like lambda * t.
  const auto grid = linspace(0.0, 1000.0, 51);
  auto worst_gap = [&](double lambda) {
    const ExcitonSystem s = dimer_system(lambda);
    HeomOptions opt;
    opt.tiers = 4;
    const auto h = propagate_heom(HeomGenerator(s, opt), site_state(2, 0), grid);
    redfield::RedfieldOptions ro;
    ro.dephasing = redfield::DephasingModel::site;
    const auto r = redfield::propagate_expm(redfield::build_redfield_generator(s, ro).full(), site_state(2, 0), grid);
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      for (int m = 0; m < 2; ++m) worst = std::max(worst, std::abs(h[k](m, m).real() - r[k](m, m).real()));
    }
    return worst;
  };
  CHECK(worst_gap(0.1) < 0.005);
  CHECK(worst_gap(1.0) < 0.02);
}

TEST_CASE("FMO L=4 populations beat during the first 400 fs") {
  HeomOptions opt;
  opt.tiers = 4;
  const HeomGenerator g(fmo_system(35.0), opt);
  const auto grid = linspace(0.0, 400.0, 81);
  const auto traj = propagate_heom(g, site_state(7, 0), grid);
  // Site 1 population falls, then recovers at least once (coherent beating).
  int turns = 0;
  for (std::size_t k = 1; k + 1 < traj.size(); ++k) {
    const double a = traj[k - 1](0, 0).real(), b = traj[k](0, 0).real(), c = traj[k + 1](0, 0).real();
    if (b < a && b < c) ++turns;
  }
  CHECK(turns >= 1);
  CHECK(traj.back()(1, 1).real() > 0.1);
  double prev = 1.0;
  for (const auto& r : traj) {
    CHECK(r.trace().real() <= prev + 1e-10);
    prev = r.trace().real();
  }
}

TEST_CASE("hierarchy dump round trip") {
  HeomOptions opt;
  opt.tiers = 3;
  const HeomGenerator g(dimer_system(35.0), opt);
  CVector y;
  propagate_heom(g, site_state(2, 0), std::vector<double>{0.0, 100.0}, {}, [&y](double, const CVector& s) { y = s; });
  std::stringstream buf;
  write_hierarchy_dump(buf, g, 100.0, y);
  const std::string bytes = buf.str();
  CHECK(bytes.substr(0, 8) == "EXHEOM01");
  CHECK(bytes.size() == 8 + 4 * 4 + 8 + 8 + g.n_ados() * 2 * 4 + g.n_ados() * 4 * 16);
  const HierarchyDump d = read_hierarchy_dump(buf);
  CHECK(d.dim == 2);
  CHECK(d.n_modes == 2);
  CHECK(d.tiers == 3);
  CHECK(d.time_fs == 100.0);
  REQUIRE(d.ados.size() == g.n_ados());
  for (std::size_t i = 0; i < g.n_ados(); ++i) {
    CHECK((d.ados[i] - g.ado(y, i)).norm() == 0.0);
    CHECK(d.indices[i] == std::vector<int>(g.indices().index(i), g.indices().index(i) + 2));
  }
  std::stringstream junk("NOTADUMP________________________________");
  CHECK_THROWS_AS(read_hierarchy_dump(junk), ConfigError);
}
