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

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "exciton/types.hpp"

namespace exciton {

struct OdeOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double initial_step = 0.0;  // 0 selects automatically
  double max_step = std::numeric_limits<double>::infinity();
  int max_rejections = 60;    // consecutive step subdivisions before giving up
  std::size_t max_steps = 100'000'000;
};

/// Autonomous right-hand side dy = f(y). Must not alias y and dy.
using Rhs = std::function<void(const CVector& y, CVector& dy)>;

/// Called after every accepted step with the new time and state; return false to stop.
using StepObserver = std::function<bool(double t, const CVector& y)>;

/// Embedded Runge-Kutta 5(4) (Dormand-Prince) with per-component error control
/// |err_i| <= atol + rtol * max(|y_i|, |y_new_i|).
class DormandPrince {
 public:
  DormandPrince(Rhs rhs, OdeOptions options);

  /// Integrates from t0 to t1 (t1 > t0), stepping exactly onto t1. The
  /// observer sees every accepted step. Returns the final time reached, which
  /// is t1 unless the observer stopped early.
  double integrate(CVector& y, double t0, double t1, const StepObserver& observer = {});

  /// Forget the cached derivative and step size (call after editing y externally).
  void reset() {
    have_fsal_ = false;
    h_ = 0.0;
  }

  std::size_t steps_taken() const { return steps_; }
  std::size_t rhs_evaluations() const { return evaluations_; }

 private:
  double error_norm(const CVector& y, const CVector& y_new, const CVector& err) const;
  double initial_step(const CVector& y, const CVector& f0, double span) const;

  Rhs rhs_;
  OdeOptions opt_;
  double h_ = 0.0;
  std::size_t steps_ = 0;
  std::size_t evaluations_ = 0;
  CVector k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, y_new_, err_;
  bool have_fsal_ = false;
};

/// States at each time of an ascending grid starting at the initial time grid[0].
std::vector<CVector> integrate_to_grid(const Rhs& rhs, const CVector& y0, std::span<const double> grid,
                                       const OdeOptions& options);

}  // namespace exciton
