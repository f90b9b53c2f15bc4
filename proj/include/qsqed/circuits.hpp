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
#include <optional>
#include <string>

#include "qsqed/gates.hpp"
#include "qsqed/model.hpp"
#include "qsqed/noise.hpp"
#include "qsqed/state.hpp"

namespace qsqed {

struct CircuitMeta {
  NativeGateSet native = NativeGateSet::CsumNative;
  double dt = 0.0;
  int n_steps = 0;
  int ancilla_site = -1;
  int source_site = 0;
  // Normalization of the raised branch, |U^+ psi0| = sqrt(1+b^2)/N; multiplies
  // the measured combination in classical post-processing.
  double scale = 1.0;
  int prep_op_count = 0;  // ops before the evolution block
  int readout_op_count = 0;  // trailing ops after the evolution block
};

struct Circuit {
  Register reg;
  GateSequence seq;
  CircuitMeta meta;
};

// Dense composed unitary of a circuit (small registers only).
Mat compose_circuit_unitary(const Circuit& circuit);

// JSON description (gate name, sites, angle, noise class) for reproducibility.
std::string circuit_to_json(const Circuit& circuit);

// V_g: two y rotations taking |0> to the one-site state, on the given site.
GateSequence vg_sequence(const OneSiteState& site_state, int site);

struct VprepAngles {
  std::array<double, 4> omega{};
  double residual = 0.0;
  int branch_sign = 1;  // overall sign of the prepared two-branch target
};

// Solves the four preparation angles so that
//   H01(anc); Ry01(w1) Ry12(w2) Ry01(-w1); Csum; Ry01(w3) Ry12(w4) Ry01(-w3); Csum^dag
// maps |0>|0>_a to sign * (psi0 |0>_a + upn |1>_a)/sqrt(2) exactly (both
// branch signs pinned, so no stray relative phase enters the interferometry).
VprepAngles solve_vprep_angles(const OneSiteState& site_state, std::uint64_t seed = 2024);

// Full preparation circuit on n_s + 1 qutrits (ancilla last):
// site 0 carries the two-branch superposition, sites 1..n_s-1 get V_g.
Circuit build_vprep(const ModelParams& params, const OneSiteState& site_state,
                    std::uint64_t seed = 2024);

// One Trotter step U_tr(dt) on the n_s working sites:
// (L^z)^2 layer, L^z L^z layer (even bonds then odd bonds), U^x layer.
Circuit build_trotter_step(const ModelParams& params, double dt, NativeGateSet native);

enum class CorrelatorPart { Real, Imag, Both };

// Preparation, n_steps Trotter steps, then the ancilla-controlled shift on the
// source site. Measurement bases and the classical +-1 rule are applied by
// estimate_correlator.
Circuit build_correlator_circuit(const ModelParams& params, double dt, int n_steps,
                                 NativeGateSet native,
                                 CorrelatorPart part = CorrelatorPart::Both,
                                 std::uint64_t seed = 2024);

struct CorrelatorEstimate {
  double t = 0.0;
  double re = 0.0;
  double im = 0.0;
  double err_re = 0.0;
  double err_im = 0.0;
  std::int64_t shots = 0;
  std::string provenance;  // exact | circuit_noiseless | circuit_noisy
};

struct EstimateOptions {
  bool sampled = false;
  std::int64_t shots = 10000;
  std::uint64_t seed = 0;
  std::optional<PauliChannelSpec> noise;
  NoisePolicy policy{};
  // When set, the circuit's evolution block is replaced by this dense unitary
  // on the working sites (protocol checks against exact evolution).
  std::optional<Mat> replace_evolution;
};

CorrelatorEstimate estimate_correlator(const Circuit& circuit, const EstimateOptions& options);

enum class HadamardVariant { XX, XZX };

// Ancilla-controlled interferometry circuit: prep_v on the ancilla-|0> branch,
// prep_w on the |1> branch, evolution, then the controlled unitary part of the
// sink split at site_y. Returns T_variant via estimate_hadamard_test; the two
// variants sum to the correlator.
Circuit build_hadamard_test(const ModelParams& params, const GateSequence& prep_v,
                            const GateSequence& prep_w, double prep_w_scale, double dt,
                            int n_steps, int site_y, HadamardVariant variant);

Cx estimate_hadamard_test(const Circuit& circuit, const EstimateOptions& options);

// Qubit-encoded building blocks (2 qubits per site).
GateSequence build_qubit_lz2(double theta);
GateSequence build_qubit_lzlz(double theta);
GateSequence build_qubit_ux(double theta);
// R_z angle multiplier chosen by calibration for the 8-CNOT two-site circuit.
double qubit_lzlz_angle_calibration();

struct GateCountRow {
  std::string name;
  int qubit_1q = 0;
  int qubit_2q = 0;
  int qutrit_1q = 0;
  int qutrit_2q = 0;
};
std::array<GateCountRow, 3> gate_count_report();

int count_1q_ops(const GateSequence& seq);
int count_2q_ops(const GateSequence& seq);

}  // namespace qsqed
