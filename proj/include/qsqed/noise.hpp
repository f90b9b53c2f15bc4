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

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "qsqed/channel.hpp"
#include "qsqed/gates.hpp"

namespace qsqed {

// How the single flat two-qudit error probability is distributed over the 81
// sigma (x) sigma terms:
//   PerTerm : every term gets p (error weight 81 p).
//   Total   : p is split uniformly over the terms (error weight p).
//   Factored: each qudit independently suffers its 9 per-pair-axis errors with
//             probability p each (tensor product of two one-qudit channels).
//   Off     : no two-qudit noise.
enum class TwoQuditMode { PerTerm, Total, Factored, Off };

std::string to_string(TwoQuditMode mode);
TwoQuditMode two_qudit_mode_from_string(const std::string& name);

// How the tabulated one-qudit pair value is read: as the per-axis probability
// p^alpha_{ij} (default), or as the pair total split evenly over x, y, z.
enum class OneQuditAxisInterpretation { PerAxis, TotalSplit3 };

struct PauliChannelSpec {
  int d = 3;
  // probability per level pair (i, j), interpreted per axis_interpretation
  std::map<std::pair<int, int>, double> one_qudit = {
      {{0, 1}, 0.00038}, {{0, 2}, 0.00143}, {{1, 2}, 0.00068}};
  OneQuditAxisInterpretation axis_interpretation = OneQuditAxisInterpretation::PerAxis;
  TwoQuditMode two_qudit_mode = TwoQuditMode::PerTerm;
  double two_qudit_p = 0.003;

  std::string to_json() const;
  static PauliChannelSpec from_json(const std::string& text);

  PauliChannelSpec scaled(double factor) const;
  bool is_zero() const;
};

Channel build_1q_channel(const PauliChannelSpec& spec);
Channel build_2q_channel(const PauliChannelSpec& spec);

// Which gate classes receive a channel after execution. rz_virtual gates never
// receive noise.
struct NoisePolicy {
  bool one_qudit_noisy = true;
  bool two_qudit_noisy = true;
};

// A circuit gate list with the per-gate channel (if any) attached after it.
struct NoisyOp {
  const GateOp* op = nullptr;
  std::shared_ptr<const Channel> channel;  // null when the gate is noiseless
};

std::vector<NoisyOp> attach_noise(const GateSequence& seq, const PauliChannelSpec& spec,
                                  const NoisePolicy& policy = NoisePolicy{});

}  // namespace qsqed
