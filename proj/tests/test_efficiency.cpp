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

#include <doctest.h>
#include <unsupported/Eigen/KroneckerProduct>

#include "exciton/efficiency.hpp"
#include "exciton/linear_solve.hpp"

using namespace exciton;

namespace {

// Independent oracle: dense solve of M x = -rho0 without the library solver.
double dense_efficiency(const redfield::LindbladModel& m, const CMatrix& rho0) {
  const CVector x = m.full().matrix().partialPivLu().solve(-vectorize(rho0));
  return 2.0 * m.trap_rate * x(m.trap_index + m.dim * m.trap_index).real();
}

// int_0^inf psi(t)^dag P psi(t) dt via the Lyapunov equation
// (i H^dag) X + X (-i H) = -P, solved in Kronecker form.
double no_jump_oracle(const CMatrix& h, int trap, double kappa, const CVector& psi) {
  const int n = static_cast<int>(h.rows());
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix a = kI * h.adjoint();
  const CMatrix b = -kI * h;
  const CMatrix k = Eigen::kroneckerProduct(id, a).eval() + Eigen::kroneckerProduct(b.transpose(), id).eval();
  CMatrix p = CMatrix::Zero(n, n);
  p(trap, trap) = 1.0;
  const CMatrix x = devectorize(k.partialPivLu().solve(-vectorize(p)), n);
  return 2.0 * kappa * (psi.adjoint() * x * psi)(0, 0).real();
}

CVector site_vector(int n, int m) { return CVector::Unit(n, m); }

}  // namespace

TEST_CASE("linear solver: dense and sparse paths, conditioning, dissipativity") {
  std::srand(3);
  const int n = 40;
  CMatrix a = CMatrix::Random(n, n) - 8.0 * CMatrix::Identity(n, n);
  const SparseC s = a.sparseView();
  const CVector b = CVector::Random(n);
  const GeneratorSolver dense(s);
  CHECK(dense.dense());
  CHECK((a * dense.solve(b) - b).norm() < 1e-12 * b.norm());
  SolveOptions sparse_opt;
  sparse_opt.dense_threshold = 0;
  const GeneratorSolver sparse(s, sparse_opt);
  CHECK_FALSE(sparse.dense());
  CHECK((sparse.solve(b) - dense.solve(b)).norm() < 1e-12 * dense.solve(b).norm());
  // Condition estimate brackets the exact 1-norm condition number within a factor of 3.
  const CMatrix inv = a.inverse();
  const auto norm1 = [](const CMatrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); };
  const double exact = norm1(a) * norm1(inv);
  CHECK(dense.condition_estimate() <= exact * 1.0000001);
  CHECK(dense.condition_estimate() >= exact / 3.0);

  CMatrix singular = a;
  singular.col(3).setZero();
  CHECK_THROWS_AS(GeneratorSolver(SparseC(singular.sparseView())), NumericalError);
  CHECK_THROWS_AS(GeneratorSolver(SparseC(singular.sparseView()), sparse_opt), NumericalError);

  CMatrix growing = CMatrix::Identity(3, 3);
  growing(0, 0) = -1.0;
  growing(1, 1) = -2.0;
  CHECK_THROWS_AS(GeneratorSolver(SparseC(growing.sparseView())), NumericalError);
}

TEST_CASE("efficiency limits") {
  ExcitonSystem s = dimer_system(35.0);
  s.trap_rate_per_fs = 0.0;
  auto m = redfield::build_redfield_generator(s);
  CHECK(efficiency(redfield_parts(m), site_state(2, 0)) == 0.0);
  CHECK(efficiency_quadrature(redfield_parts(m), site_state(2, 0)) == 0.0);

  s = dimer_system(35.0);
  s.loss_rate_per_fs = 0.0;
  m = redfield::build_redfield_generator(s);
  CHECK(efficiency(redfield_parts(m), site_state(2, 0)) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(efficiency_quadrature(redfield_parts(m), site_state(2, 0)) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(contribution(redfield_parts(m).coherent, redfield_parts(m), site_state(2, 0)), NumericalError);
}

TEST_CASE("efficiency against a dense oracle, algebraic vs quadrature") {
  for (double lambda : {0.0, 5.0, 35.0, 150.0}) {
    const auto m = redfield::build_redfield_generator(dimer_system(lambda));
    const auto parts = redfield_parts(m);
    for (int site : {0, 1}) {
      const double eta = efficiency(parts, site_state(2, site));
      CHECK(eta == doctest::Approx(dense_efficiency(m, site_state(2, site))).epsilon(1e-10));
      CHECK(std::abs(eta - efficiency_quadrature(parts, site_state(2, site))) <= 1e-6);
      CHECK(eta >= 0.0);
      CHECK(eta <= 1.0 + 1e-6);
    }
  }
}

TEST_CASE("partition identity") {
  for (double lambda : {0.1, 10.0, 35.0, 300.0}) {
    for (const ExcitonSystem& s : {dimer_system(lambda), fmo_system(lambda)}) {
      const auto m = redfield::build_redfield_generator(s);
      const auto parts = redfield_parts(m);
      const CMatrix rho0 = site_state(s.n_sites(), 0);
      EfficiencyOptions opt;
      const auto r = efficiency_report(parts, rho0, opt);
      CHECK(std::abs(r.residual) <= 1e-6);
      CHECK(std::abs(r.eta - r.eta_quadrature) <= 1e-6);
      CHECK(contribution(parts.coherent, parts, rho0) == doctest::Approx(r.eta_H).epsilon(1e-12));
    }
  }
}

TEST_CASE("whole-generator contribution and a trap-site start") {
  const auto m = redfield::build_redfield_generator(dimer_system(35.0));
  const auto parts = redfield_parts(m);
  const double kappa = m.trap_rate, gamma = m.loss_rate;
  // Starting on the trap site: residual = Tr{M_trap (M_trap + M_loss)^-1 rho0} = kappa / (kappa + Gamma).
  const CMatrix at_trap = site_state(2, m.trap_index);
  const auto r = efficiency_report(parts, at_trap);
  CHECK(r.residual == doctest::Approx(kappa / (kappa + gamma)).epsilon(1e-9));
  CHECK(contribution(parts.full(), parts, at_trap) == doctest::Approx(-r.residual).epsilon(1e-9));
  CHECK(std::abs(contribution(parts.full(), parts, site_state(2, 0))) < 1e-12);
}

TEST_CASE("no decoherence means eta = eta_H") {
  const auto m = redfield::build_redfield_generator(fmo_system(0.0));
  const auto r = efficiency_report(redfield_parts(m), site_state(7, 0));
  CHECK(std::abs(r.eta_decoherence) < 1e-8);
  CHECK(std::abs(r.eta - r.eta_H) < 1e-8);
}

TEST_CASE("initial-state contribution") {
  // lambda = 0 and Gamma = 0: the no-jump trajectory is the whole dynamics.
  ExcitonSystem s = dimer_system(0.0);
  s.loss_rate_per_fs = 0.0;
  auto m = redfield::build_redfield_generator(s);
  CHECK(initial_state_contribution(m, site_state(2, 0)) == doctest::Approx(1.0).epsilon(1e-7));

  for (const ExcitonSystem& sys : {dimer_system(35.0), fmo_system(35.0)}) {
    m = redfield::build_redfield_generator(sys);
    const int n = sys.n_sites();
    const CMatrix h = no_jump_hamiltonian(m);
    for (int site : {0, n - 1}) {
      const double got = initial_state_contribution(m, site_vector(n, site));
      CHECK(got == doctest::Approx(no_jump_oracle(h, m.trap_index, m.trap_rate, site_vector(n, site))).epsilon(1e-6));
      const auto r = efficiency_report(redfield_parts(m), site_state(n, site));
      CHECK(got <= r.eta_H + 1e-6);
    }
    // Mixture = weighted sum of pure components.
    const double a = initial_state_contribution(m, site_vector(n, 0));
    const double b = initial_state_contribution(m, site_vector(n, 1));
    const double mix = initial_state_contribution(m, std::vector<std::pair<double, CVector>>{
                                                         {0.25, site_vector(n, 0)}, {0.75, site_vector(n, 1)}});
    CHECK(mix == doctest::Approx(0.25 * a + 0.75 * b).epsilon(1e-12));
    CHECK_THROWS_AS(initial_state_contribution(m, CMatrix(0.5 * (site_state(n, 0) + site_state(n, 1)))),
                    ConfigError);
  }
}

TEST_CASE("no-jump Hamiltonian anti-Hermitian part") {
  const auto m = redfield::build_redfield_generator(dimer_system(35.0));
  const CMatrix h = no_jump_hamiltonian(m);
  CMatrix expect = CMatrix::Zero(2, 2);
  for (const auto& j : m.jumps) expect += 0.5 * j.rate * j.op.adjoint() * j.op;
  expect(m.trap_index, m.trap_index) += m.trap_rate;
  expect += m.loss_rate * CMatrix::Identity(2, 2);
  CHECK(((h - h.adjoint()) / (2.0 * kI) + expect).norm() < 1e-15);
  CHECK(((h + h.adjoint()) / 2.0 - m.hamiltonian).norm() < 1e-15);
}

TEST_CASE("concurrence") {
  CHECK(concurrence(site_state(2, 0)) == 0.0);
  CMatrix plus = CMatrix::Constant(2, 2, 0.5);
  CHECK(concurrence(plus) == doctest::Approx(1.0));
  CHECK(concurrence(CMatrix(0.5 * CMatrix::Identity(2, 2))) == 0.0);
}

TEST_CASE("integrated coherence") {
  const ExcitonSystem s0 = dimer_system(0.0);
  const auto m0 = redfield::build_redfield_generator(s0);
  const auto c0 = integrated_coherence(redfield_parts(m0), site_state(2, 0), s0);
  CHECK(c0.C_normalized == 1.0);
  CHECK(c0.C > 0.0);

  const ExcitonSystem s = dimer_system(35.0);
  const auto parts = redfield_parts(redfield::build_redfield_generator(s));
  const auto c = integrated_coherence(parts, site_state(2, 0), s);
  CHECK(c.C >= 0.0);
  CHECK(c.C_normalized < 1.0);
  CHECK(c.cutoff_time > 0.0);
  // Extending the horizon past the cutoff barely changes C.
  EfficiencyOptions longer;
  longer.coherence_trace_cutoff = 1e-6;
  const auto [c_long, t_long] = coherence_integral(parts, site_state(2, 0), longer);
  CHECK(t_long > c.cutoff_time);
  CHECK(std::abs(c_long - c.C) / c.C < 2e-3);

  EfficiencyOptions short_horizon;
  short_horizon.horizon_fs = 100.0;
  CHECK_THROWS_AS(coherence_integral(parts, site_state(2, 0), short_horizon), NumericalError);

  // Exciton-basis variant: with uniform loss only, an exciton stays coherence-free.
  ExcitonSystem lossy = dimer_system(0.0);
  lossy.trap_rate_per_fs = 0.0;
  lossy.loss_rate_per_fs = 1e-3;
  const auto ml = redfield::build_redfield_generator(lossy);
  EfficiencyOptions exc;
  exc.coherence_basis = ml.basis.vectors;
  const CMatrix alpha = ml.basis.vectors.col(1) * ml.basis.vectors.col(1).adjoint();
  CHECK(coherence_integral(redfield_parts(ml), alpha, exc).first < 1e-9);
  CHECK(coherence_integral(redfield_parts(ml), alpha).first > 1.0);
}

TEST_CASE("HEOM efficiency partition on the whole hierarchy") {
  heom::HeomOptions opt;
  opt.tiers = 4;
  const heom::HeomGenerator g(dimer_system(35.0), opt);
  const auto parts = heom_parts(g);
  const auto r = efficiency_report(parts, site_state(2, 0));
  CHECK(std::abs(r.residual) <= 1e-6);
  CHECK(std::abs(r.eta - r.eta_quadrature) <= 1e-6);
  CHECK(r.eta > 0.9);
  // At lambda = 0 the hierarchy collapses onto the Redfield result.
  const heom::HeomGenerator g0(dimer_system(0.0), opt);
  const auto m0 = redfield::build_redfield_generator(dimer_system(0.0));
  CHECK(efficiency(heom_parts(g0), site_state(2, 0)) ==
        doctest::Approx(efficiency(redfield_parts(m0), site_state(2, 0))).epsilon(1e-9));
}
