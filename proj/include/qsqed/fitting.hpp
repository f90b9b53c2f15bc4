// Copyright 2026 The qsqed Authors
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

#include <functional>

#include "qsqed/rng.hpp"
#include "qsqed/types.hpp"

namespace qsqed {

// Residual vector for matching a parameterized matrix to a target up to global
// phase: stacked real/imag entries of P(x) * phase - target, with the phase
// chosen to maximize |tr(P^dag T)|.
RVec phase_free_residual(const Mat& candidate, const Mat& target);

struct FitResult {
  RVec x;
  double residual_norm = 0.0;   // 2-norm of residual vector
  double max_abs_residual = 0.0;
  int restarts_used = 0;
  bool converged = false;
};

// Levenberg-Marquardt with forward-difference Jacobian.
FitResult levenberg_marquardt(const std::function<RVec(const RVec&)>& residual, RVec x0,
                              int max_iter = 200, double tol = 1e-13);

// Multi-start wrapper: uniform starts in [-pi, pi]^n from a seeded stream.
FitResult fit_multistart(const std::function<RVec(const RVec&)>& residual, int num_params,
                         int max_restarts, double target_max_abs, std::uint64_t seed);

}  // namespace qsqed
