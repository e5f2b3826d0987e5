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
// OpenMP kernels against their serial references: HEOM generator application
// and the Monte-Carlo ensemble. Usage: bench_kernels [repeats]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "exciton/ensemble.hpp"
#include "exciton/heom.hpp"

using namespace exciton;
using Clock = std::chrono::steady_clock;

namespace {

template <class F>
double best_of(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = Clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(Clock::now() - t0).count());
  }
  return best;
}

void heom_case(const char* name, const ExcitonSystem& s, int tiers, int repeats) {
  heom::HeomOptions opt;
  opt.tiers = tiers;
  const heom::HeomGenerator g(s, opt);
  CVector x = CVector::Random(g.state_size());
  CVector y_par(g.state_size()), y_ser(g.state_size());
  const double t_par = best_of(repeats, [&] { g.apply(x, y_par); });
  const double t_ser = best_of(repeats, [&] { g.apply_serial(x, y_ser); });
  std::printf("heom apply  %-10s ADOs %6zu  serial %9.3f ms  omp %9.3f ms  speedup %5.2f  max|diff| %.1e\n", name,
              g.n_ados(), 1e3 * t_ser, 1e3 * t_par, t_ser / t_par, (y_par - y_ser).cwiseAbs().maxCoeff());
}

void ensemble_case(int repeats) {
  const redfield::DrudeBath bath{35.0, 1.0 / 50.0, 300.0};
  const bathtraj::OuSource src(bath, 2.0, 500, RVector{{0.0, 120.0}}, 1);
  const RMatrix j{{0.0, -87.7}, {-87.7, 0.0}};
  bathtraj::EnsembleOptions opt;
  opt.n_instances = 2000;
  bathtraj::EnsembleResult par, ser;
  const double t_par = best_of(repeats, [&] { par = bathtraj::mc_unitary_ensemble(src, j, site_state(2, 0), opt); });
  const double t_ser =
      best_of(repeats, [&] { ser = bathtraj::mc_unitary_ensemble_serial(src, j, site_state(2, 0), opt); });
  double diff = 0.0;
  for (std::size_t k = 0; k < par.rho.size(); ++k) diff = std::max(diff, (par.rho[k] - ser.rho[k]).cwiseAbs().maxCoeff());
  std::printf("mc ensemble dimer      instances %5llu  serial %9.3f ms  omp %9.3f ms  speedup %5.2f  max|diff| %.1e\n",
              static_cast<unsigned long long>(opt.n_instances), 1e3 * t_ser, 1e3 * t_par, t_ser / t_par, diff);
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 5;
  std::printf("threads %d, best of %d\n", omp_get_max_threads(), repeats);
  heom_case("dimer L=15", dimer_system(35.0), 15, repeats);
  heom_case("fmo L=4", fmo_system(35.0), 4, repeats);
  heom_case("fmo L=6", fmo_system(35.0), 6, repeats);
  ensemble_case(repeats);
}
