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
#include "exciton/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace exciton {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                 b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

}  // namespace

DormandPrince::DormandPrince(Rhs rhs, OdeOptions options) : rhs_(std::move(rhs)), opt_(options) {
  if (!(opt_.rtol > 0.0) || !(opt_.atol > 0.0)) throw ConfigError("integrator tolerances must be > 0");
}

double DormandPrince::error_norm(const CVector& y, const CVector& y_new, const CVector& err) const {
  double worst = 0.0;
  for (Index i = 0; i < y.size(); ++i) {
    const double sc = opt_.atol + opt_.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
    worst = std::max(worst, std::abs(err[i]) / sc);
  }
  return worst;
}

double DormandPrince::initial_step(const CVector& y, const CVector& f0, double span) const {
  if (opt_.initial_step > 0.0) return std::min(opt_.initial_step, span);
  const double d0 = y.cwiseAbs().maxCoeff();
  const double d1 = f0.cwiseAbs().maxCoeff();
  double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-3 * span : 0.01 * d0 / d1;
  return std::clamp(h, 1e-12 * span, std::min(span, opt_.max_step));
}

double DormandPrince::integrate(CVector& y, double t0, double t1, const StepObserver& observer) {
  if (!(t1 > t0)) return t0;
  const Index n = y.size();
  for (CVector* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &tmp_, &y_new_, &err_}) {
    if (v->size() != n) v->resize(n);
  }
  if (!have_fsal_ || k1_.size() != n) {
    rhs_(y, k1_);
    ++evaluations_;
  }
  have_fsal_ = false;
  if (h_ <= 0.0) h_ = initial_step(y, k1_, t1 - t0);

  double t = t0;
  int rejections = 0;
  while (t < t1) {
    if (steps_ >= opt_.max_steps) throw NumericalError("integrator exceeded max_steps");
    double h = std::min({h_, opt_.max_step, t1 - t});
    const bool last = (t + h >= t1);
    if (last) h = t1 - t;

    tmp_ = y + h * a21 * k1_;
    rhs_(tmp_, k2_);
    tmp_ = y + h * (a31 * k1_ + a32 * k2_);
    rhs_(tmp_, k3_);
    tmp_ = y + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
    rhs_(tmp_, k4_);
    tmp_ = y + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
    rhs_(tmp_, k5_);
    tmp_ = y + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
    rhs_(tmp_, k6_);
    y_new_ = y + h * (b1 * k1_ + b3 * k3_ + b4 * k4_ + b5 * k5_ + b6 * k6_);
    rhs_(y_new_, k7_);
    evaluations_ += 6;
    err_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);

    const double en = error_norm(y, y_new_, err_);
    if (!std::isfinite(en)) throw NumericalError("integrator produced non-finite state");
    if (en <= 1.0) {
      t = last ? t1 : t + h;
      y.swap(y_new_);
      k1_.swap(k7_);
      ++steps_;
      rejections = 0;
      const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      // Do not let a short final step shrink the controller's step.
      if (!last || h >= h_) h_ = h * fac;
      if (observer && !observer(t, y)) {
        have_fsal_ = true;
        return t;
      }
    } else {
      h_ = h * std::max(0.2, 0.9 * std::pow(en, -0.2));
      if (++rejections > opt_.max_rejections || h_ < 1e-14 * std::max(1.0, std::abs(t))) {
        std::ostringstream msg;
        msg << "integrator tolerance failure at t=" << t << " fs after " << rejections
            << " step subdivisions (error norm " << en << ")";
        throw NumericalError(msg.str());
      }
    }
  }
  have_fsal_ = true;
  return t;
}

std::vector<CVector> integrate_to_grid(const Rhs& rhs, const CVector& y0, std::span<const double> grid,
                                       const OdeOptions& options) {
  std::vector<CVector> out;
  if (grid.empty()) return out;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) throw ConfigError("time grid must be strictly ascending");
  }
  out.reserve(grid.size());
  CVector y = y0;
  out.push_back(y);
  DormandPrince dp(rhs, options);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    dp.integrate(y, grid[k - 1], grid[k]);
    out.push_back(y);
  }
  return out;
}

}  // namespace exciton
