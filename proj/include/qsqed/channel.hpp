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

#include <vector>

#include "qsqed/state.hpp"
#include "qsqed/types.hpp"

namespace qsqed {

// Kraus channel on a 1- or 2-site subset. Completeness (sum K^dag K = I) is
// checked at construction.
class Channel {
 public:
  Channel(std::vector<Mat> kraus_ops, int arity);

  const std::vector<Mat>& kraus() const { return kraus_; }
  int arity() const { return arity_; }
  int local_dim() const { return static_cast<int>(kraus_.front().rows()); }

  // Conjugation superoperator S[(p,s),(q,r)] = sum_i K_i[p,q] conj(K_i[s,r]),
  // flattened to (k^2) x (k^2); built lazily and cached.
  const Mat& superoperator() const;

 private:
  std::vector<Mat> kraus_;
  int arity_;
  mutable Mat superop_;
  mutable bool superop_built_ = false;
};

// rho -> sum_i K_i rho K_i^dag on the given sites.
void apply_channel_in_place(DensityMatrix& rho, const Channel& channel,
                            const std::vector<int>& sites);
DensityMatrix apply_channel(const DensityMatrix& rho, const Channel& channel,
                            const std::vector<int>& sites);

// Monte-Carlo trajectory branch: draws one Kraus operator and applies it.
// Valid only for channels whose Kraus operators are proportional to unitaries
// (true for Pauli channels); rejects otherwise.
void apply_channel_sampled(StateVector& psi, const Channel& channel, const std::vector<int>& sites,
                           SplitRng& rng);

}  // namespace qsqed
