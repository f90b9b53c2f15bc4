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

#include <cstdint>
#include <vector>

#include "qsqed/register.hpp"
#include "qsqed/rng.hpp"
#include "qsqed/types.hpp"

namespace qsqed {

struct StateVector {
  Register reg;
  Vec amplitudes;

  double norm() const { return amplitudes.norm(); }
};

struct DensityMatrix {
  Register reg;
  Mat matrix;

  double trace_real() const { return matrix.trace().real(); }
};

struct MeasurementRecord {
  std::vector<int> outcome;  // per-site basis index
  std::int64_t count = 0;
  std::uint64_t seed = 0;
};

StateVector make_basis_state(const Register& reg, const std::vector<int>& indices);
DensityMatrix make_density_matrix(const StateVector& psi);

// Applies `u` to the ordered site subset. `u` must be square with dimension
// equal to the product of the subset's local dimensions and unitary within
// kConstructionTol. All other sites are untouched.
void apply_unitary_in_place(StateVector& psi, const Mat& u, const std::vector<int>& sites);
void apply_unitary_in_place(DensityMatrix& rho, const Mat& u, const std::vector<int>& sites);
StateVector apply_unitary(const StateVector& psi, const Mat& u, const std::vector<int>& sites);
DensityMatrix apply_unitary(const DensityMatrix& rho, const Mat& u, const std::vector<int>& sites);

// Applies a (site-subset) linear operator to the ket side only; used for
// expectation values. No unitarity requirement.
void apply_operator_ket(StateVector& psi, const Mat& op, const std::vector<int>& sites);

double expectation(const StateVector& psi, const Mat& observable, const std::vector<int>& sites);
double expectation(const DensityMatrix& rho, const Mat& observable, const std::vector<int>& sites);

Cx inner_product(const StateVector& a, const StateVector& b);

// Computational-basis probabilities (statevector modulus squared / density
// matrix diagonal).
RVec basis_probabilities(const StateVector& psi);
RVec basis_probabilities(const DensityMatrix& rho);

std::vector<MeasurementRecord> sample_measurements(const StateVector& psi, std::int64_t shots,
                                                   std::uint64_t seed);
std::vector<MeasurementRecord> sample_measurements(const DensityMatrix& rho, std::int64_t shots,
                                                   std::uint64_t seed);

// Embeds a subset operator into the full register dimension (dense). Test
// oracle and small-register utility; the strided apply above never builds it.
Mat embed_operator(const Register& reg, const Mat& op, const std::vector<int>& sites);

}  // namespace qsqed
