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

#include "qsqed/fitting.hpp"

#include <cmath>

namespace qsqed {

RVec phase_free_residual(const Mat& candidate, const Mat& target) {
  const Cx tr = (candidate.adjoint() * target).trace();
  Cx phase = 1.0;
  if (std::abs(tr) > 1e-14) phase = tr / std::abs(tr);
  const Mat diff = candidate * phase - target;
  RVec out(2 * diff.size());
  Eigen::Index k = 0;
  for (Eigen::Index c = 0; c < diff.cols(); ++c) {
    for (Eigen::Index r = 0; r < diff.rows(); ++r) {
      out(k++) = diff(r, c).real();
      out(k++) = diff(r, c).imag();
    }
  }
  return out;
}

FitResult levenberg_marquardt(const std::function<RVec(const RVec&)>& residual, RVec x0,
                              int max_iter, double tol) {
  FitResult result;
  RVec x = std::move(x0);
  RVec r = residual(x);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  const int n = static_cast<int>(x.size());
  const int m = static_cast<int>(r.size());

  for (int iter = 0; iter < max_iter; ++iter) {
    RMat jac(m, n);
    const double h = 1e-7;
    for (int j = 0; j < n; ++j) {
      RVec xp = x;
      xp(j) += h;
      jac.col(j) = (residual(xp) - r) / h;
    }
    const RMat jtj = jac.transpose() * jac;
    const RVec jtr = jac.transpose() * r;
    bool stepped = false;
    for (int attempt = 0; attempt < 24; ++attempt) {
      RMat a = jtj;
      a.diagonal().array() += lambda;
      const RVec dx = a.ldlt().solve(-jtr);
      const RVec xn = x + dx;
      const RVec rn = residual(xn);
      const double cn = rn.squaredNorm();
      if (cn < cost) {
        x = xn;
        r = rn;
        cost = cn;
        lambda = std::max(lambda * 0.3, 1e-12);
        stepped = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!stepped || cost < tol * tol) break;
  }
  result.x = x;
  result.residual_norm = std::sqrt(cost);
  result.max_abs_residual = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
  result.converged = result.residual_norm < 1e-9;
  return result;
}

FitResult fit_multistart(const std::function<RVec(const RVec&)>& residual, int num_params,
                         int max_restarts, double target_max_abs, std::uint64_t seed) {
  SplitRng rng(seed);
  FitResult best;
  best.max_abs_residual = 1e300;
  for (int t = 0; t < max_restarts; ++t) {
    RVec x0(num_params);
    if (t == 0) {
      x0.setZero();
    } else {
      for (int i = 0; i < num_params; ++i) x0(i) = rng.uniform(-3.14159265358979, 3.14159265358979);
    }
    FitResult res = levenberg_marquardt(residual, x0);
    res.restarts_used = t + 1;
    if (res.max_abs_residual < best.max_abs_residual) best = res;
    if (best.max_abs_residual < target_max_abs) break;
  }
  best.converged = best.max_abs_residual < target_max_abs;
  return best;
}

}  // namespace qsqed
