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

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "qsqed/types.hpp"

namespace qsqed {

enum class Axis { X, Y, Z };
enum class PauliMode { Annihilating, Embedded };
enum class NoiseClass { RzVirtual, OneQuditNoisy, TwoQudit };
enum class NativeGateSet { CsumNative, LzlzNative, QubitCnot };

// Two-level Pauli sigma^{axis}_{a,b} on a d-level site:
//   sigma^x: |a><b| + |b><a|
//   sigma^y: -i|b><a| + i|a><b|   (|a> -> -i|b>, |b> -> +i|a>)
//   sigma^z: |a><a| - |b><b|
// Annihilating mode is zero on the complement of span{|a>,|b>}; embedded mode
// completes with the identity there (unitary, Hermitian, an involution).
Mat subspace_pauli(Axis axis, int a, int b, int d, PauliMode mode);

// R^axis_{a,b}(theta) = exp(+i theta sigma^axis_{a,b}), identity on the
// complement of the two-level subspace.
Mat rotation(Axis axis, int a, int b, double theta, int d);

// Controlled-sum gate on (control, target): |a,b> -> |a,(a+b) mod d>.
// The adjoint maps |a,b> -> |a,(b-a) mod d>.
Mat csum(int d, bool adjoint = false);

// Discrete Fourier gate H[k][j] = exp(2 pi i k j / d) / sqrt(d).
Mat generalized_hadamard(int d);

// Coefficients of target = alpha0 I + sum_j alphas[j] sigma^z_{j,j+1}
// (annihilating-mode sigma^z), solved exactly by elimination.
struct DiagonalDecomposition {
  double alpha0 = 0.0;
  std::vector<double> alphas;  // indexed by adjacent pair (j, j+1)

  RVec reconstruct(int d) const;
};
DiagonalDecomposition solve_diagonal_coeffs(const RVec& target);

// One gate placed on local site indices (0 for one-qudit sequences; 0=control,
// 1=target for two-qudit sequences). `angle` is informational (NaN when the
// gate has no single-angle parameterization).
struct GateOp {
  std::string name;
  Mat matrix;
  std::vector<int> sites;
  NoiseClass noise = NoiseClass::OneQuditNoisy;
  double angle = std::numeric_limits<double>::quiet_NaN();
};

struct GateSequence {
  std::vector<GateOp> ops;  // applied first-to-last
  Cx global_phase = 1.0;

  int count(NoiseClass cls) const;
};

// Dense composition of a local sequence on a register of `num_sites` sites of
// dimension d each (small sequences only; used for verification).
Mat compose_sequence(const GateSequence& seq, int d, int num_sites);

// exp(i theta diag(target)) as adjacent-pair R^z gates (noise class
// rz_virtual) plus a recorded global phase exp(i theta alpha0).
GateSequence decompose_diagonal_rotation(double theta, const RVec& target_diagonal, int d);

// exp(i theta L^z x L^z) for spin truncation n_max.
//   LzlzNative: single native two-qudit gate.
//   CsumNative: ladder of d = 2 n_max + 1 csum gates with d-1 diagonal
//   rotation layers on the target qudit; requires d prime. For n_max = 1 this
//   reproduces the published three-csum, four-rotation sequence exactly.
GateSequence decompose_lzlz(double theta, int n_max, NativeGateSet native);

enum class UxMode { Exact, Trotterized };

// exp(i theta U^x). Exact mode diagonalizes U^x (five fixed rotations for the
// hard-wall spin-1 case; Givens synthesis otherwise). Trotterized mode splits
// into per-pair sigma^x rotations with O(theta^2) error.
GateSequence decompose_ux(double theta, int n_max, int c_bound, UxMode mode);

// Euler-product fit of a 3x3 special unitary:
//   V = e^{i a1 z01} e^{i a2 y01} e^{i a3 z01} e^{i a4 y02}
//       e^{i a5 z01} e^{i a6 y01} e^{i a7 z01} e^{i a8 z12}
// Angles found by seeded multi-start numerical minimization of the
// phase-aligned reconstruction residual.
struct Su3EulerFit {
  std::array<double, 8> angles{};
  double residual = 0.0;
  bool converged = false;
};
Su3EulerFit su3_euler_fit(const Mat& target, std::uint64_t seed = 12345, int max_restarts = 32);
Mat su3_euler_product(const std::array<double, 8>& angles);

}  // namespace qsqed
