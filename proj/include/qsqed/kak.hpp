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

#include "qsqed/gates.hpp"
#include "qsqed/types.hpp"

namespace qsqed {

// Canonical (magic-basis) decomposition of a two-qubit unitary:
//   U = phase * (a1 x a2) * exp(i (x XX + y YY + z ZZ)) * (b1 x b2)
struct KakDecomposition {
  Mat a1, a2, b1, b2;  // 2x2 unitaries
  double x = 0.0, y = 0.0, z = 0.0;
  Cx phase = 1.0;
};

KakDecomposition kak_decompose(const Mat& u);

// exp(i (x XX + y YY + z ZZ)), dense via its magic-basis diagonal.
Mat canonical_gate(double x, double y, double z);

// Synthesizes an arbitrary two-qubit unitary as exactly 3 CNOTs and 15
// one-qubit rotations (four ZYZ corners, one Rz + two Ry inside the CNOT
// ladder). Sites are {0 (control-side), 1}. Throws if the reconstruction
// misses the target beyond kDecompositionTol.
GateSequence qubit_two_qubit_sequence(const Mat& u);

}  // namespace qsqed
