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

#include <complex>
#include <Eigen/Dense>

namespace qsqed {

using Cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Tolerance ladder, used project-wide:
//   construction checks (unitarity, hermiticity, completeness)  1e-10
//   conservation checks (norm, trace)                           1e-12
//   decomposition equivalence (composed gates vs target)        1e-9
inline constexpr double kConstructionTol = 1e-10;
inline constexpr double kConservationTol = 1e-12;
inline constexpr double kDecompositionTol = 1e-9;

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

inline bool is_unitary(const Mat& u, double tol = kConstructionTol) {
  if (u.rows() != u.cols()) return false;
  return max_abs(u.adjoint() * u - Mat::Identity(u.rows(), u.cols())) <= tol;
}

inline bool is_hermitian(const Mat& m, double tol = kConstructionTol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol;
}

// Max-abs distance between a and b after aligning the global phase of a to b.
// Returns 2 if the overlap trace vanishes (nothing to align against).
inline double phase_aligned_distance(const Mat& a, const Mat& b) {
  const Cx tr = (a.adjoint() * b).trace();
  if (std::abs(tr) < 1e-300) return 2.0;
  return max_abs(a * (tr / std::abs(tr)) - b);
}

}  // namespace qsqed
