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

#include "qsqed/circuits.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "qsqed/fitting.hpp"
#include "qsqed/kak.hpp"

namespace qsqed {
namespace {

constexpr double kPi = 3.14159265358979323846;

Mat kron2(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

// Hadamard on the (0,1) subspace of a qutrit.
Mat had01() {
  Mat m = Mat::Identity(3, 3);
  const double s = 1.0 / std::sqrt(2.0);
  m(0, 0) = s;
  m(0, 1) = s;
  m(1, 0) = s;
  m(1, 1) = -s;
  return m;
}

GateOp named_op(std::string name, Mat m, std::vector<int> sites, NoiseClass noise,
                double angle = std::numeric_limits<double>::quiet_NaN()) {
  GateOp op;
  op.name = std::move(name);
  op.matrix = std::move(m);
  op.sites = std::move(sites);
  op.noise = noise;
  op.angle = angle;
  return op;
}

GateOp rot_op(Axis axis, int a, int b, double theta, int d, int site, NoiseClass noise) {
  const char* base = axis == Axis::X ? "rx" : (axis == Axis::Y ? "ry" : "rz");
  return named_op(std::string(base) + "_" + std::to_string(a) + std::to_string(b),
                  rotation(axis, a, b, theta, d), {site}, noise, theta);
}

// Controlled version of a one-site gate: apply `u` when the control qutrit is
// in |match>, identity otherwise. Local site order is (control, target).
Mat controlled_gate(const Mat& u, int control_dim, int match) {
  const Eigen::Index k = u.rows();
  Mat out = Mat::Zero(control_dim * k, control_dim * k);
  for (int c = 0; c < control_dim; ++c) {
    if (c == match)
      out.block(c * k, c * k, k, k) = u;
    else
      out.block(c * k, c * k, k, k) = Mat::Identity(k, k);
  }
  return out;
}

// Preparation block on (working site, ancilla) as a dense 9x9 operator, used
// by the angle solver. Basis order: working most significant.
Mat vprep_block(const std::array<double, 4>& w) {
  const Mat i3 = Mat::Identity(3, 3);
  auto layer = [](double wa, double wb) {
    return Mat(rotation(Axis::Y, 0, 1, -wa, 3) * rotation(Axis::Y, 1, 2, wb, 3) *
               rotation(Axis::Y, 0, 1, wa, 3));
  };
  auto cs_anc_second = [](bool raise) {
    Mat m = Mat::Zero(9, 9);
    for (int a = 0; a < 3; ++a)
      for (int k = 0; k < 3; ++k) {
        const int t = raise ? (a + k) % 3 : ((a - k) % 3 + 3) % 3;
        m(t * 3 + k, a * 3 + k) = 1.0;
      }
    return m;
  };
  Mat u = kron2(i3, had01());
  u = kron2(layer(w[0], w[1]), i3) * u;
  u = cs_anc_second(true) * u;
  u = kron2(layer(w[2], w[3]), i3) * u;
  u = cs_anc_second(false) * u;
  return u;
}

void append_sequence(Circuit& circuit, const GateSequence& seq, const std::vector<int>& site_map) {
  for (const GateOp& op : seq.ops) {
    GateOp placed = op;
    placed.sites.clear();
    for (int local : op.sites) placed.sites.push_back(site_map.at(static_cast<std::size_t>(local)));
    circuit.seq.ops.push_back(std::move(placed));
  }
  circuit.seq.global_phase *= seq.global_phase;
}

const char* noise_class_name(NoiseClass cls) {
  switch (cls) {
    case NoiseClass::RzVirtual: return "rz_virtual";
    case NoiseClass::OneQuditNoisy: return "one_qudit_noisy";
    case NoiseClass::TwoQudit: return "two_qudit";
  }
  return "?";
}

}  // namespace

Mat compose_circuit_unitary(const Circuit& circuit) {
  const std::int64_t dim = circuit.reg.total_dim();
  Mat total = Mat::Identity(dim, dim) * circuit.seq.global_phase;
  for (const GateOp& op : circuit.seq.ops)
    total = embed_operator(circuit.reg, op.matrix, op.sites) * total;
  return total;
}

std::string circuit_to_json(const Circuit& circuit) {
  nlohmann::json j;
  j["register"] = circuit.reg.dims();
  j["global_phase"] = {circuit.seq.global_phase.real(), circuit.seq.global_phase.imag()};
  j["metadata"] = {{"dt", circuit.meta.dt},
                   {"n_steps", circuit.meta.n_steps},
                   {"ancilla_site", circuit.meta.ancilla_site},
                   {"source_site", circuit.meta.source_site},
                   {"scale", circuit.meta.scale}};
  nlohmann::json gates = nlohmann::json::array();
  for (const GateOp& op : circuit.seq.ops) {
    nlohmann::json g;
    g["name"] = op.name;
    g["sites"] = op.sites;
    if (std::isfinite(op.angle)) g["angle"] = op.angle;
    g["noise"] = noise_class_name(op.noise);
    gates.push_back(std::move(g));
  }
  j["gates"] = std::move(gates);
  return j.dump(2);
}

GateSequence vg_sequence(const OneSiteState& site_state, int site) {
  GateSequence seq;
  seq.ops.push_back(rot_op(Axis::Y, 0, 1, site_state.rho1, 3, site, NoiseClass::OneQuditNoisy));
  seq.ops.push_back(rot_op(Axis::Y, 1, 2, site_state.rho2, 3, site, NoiseClass::OneQuditNoisy));
  return seq;
}

VprepAngles solve_vprep_angles(const OneSiteState& site_state, std::uint64_t seed) {
  const double b = site_state.b;
  const double np = std::sqrt(1.0 + b * b);
  Vec target(9);
  target.setZero();
  for (int a = 0; a < 3; ++a) {
    target(a * 3 + 0) = site_state.amplitudes(a) / std::sqrt(2.0);
    target(a * 3 + 1) =
        (a == 0 ? b / np : (a == 1 ? 1.0 / np : 0.0)) / std::sqrt(2.0);
  }
  Vec start = Vec::Zero(9);
  start(0) = 1.0;

  VprepAngles best;
  best.residual = 1e300;
  for (int sign : {1, -1}) {
    auto residual = [&](const RVec& x) {
      std::array<double, 4> w{x(0), x(1), x(2), x(3)};
      const Vec out = vprep_block(w) * start - static_cast<double>(sign) * target;
      RVec r(18);
      for (int i = 0; i < 9; ++i) {
        r(2 * i) = out(i).real();
        r(2 * i + 1) = out(i).imag();
      }
      return r;
    };
    const FitResult fit = fit_multistart(residual, 4, 48, 1e-12, seed + (sign > 0 ? 0 : 1));
    if (fit.max_abs_residual < best.residual) {
      best.residual = fit.max_abs_residual;
      best.branch_sign = sign;
      for (int i = 0; i < 4; ++i) best.omega[static_cast<std::size_t>(i)] = fit.x(i);
    }
  }
  if (best.residual > 1e-9)
    throw std::runtime_error("solve_vprep_angles: residual " + std::to_string(best.residual));
  return best;
}

Circuit build_vprep(const ModelParams& params, const OneSiteState& site_state,
                    std::uint64_t seed) {
  params.validate();
  if (params.n_max != 1)
    throw std::invalid_argument("build_vprep: preparation circuit is defined for n_max = 1");
  const VprepAngles angles = solve_vprep_angles(site_state, seed);
  const int anc = params.n_s;

  Circuit circuit{params.make_register(3), GateSequence{}, CircuitMeta{}};
  circuit.meta.ancilla_site = anc;
  circuit.meta.source_site = 0;
  circuit.meta.scale = std::sqrt(1.0 + site_state.b * site_state.b) / site_state.norm;

  circuit.seq.ops.push_back(named_op("had_01", had01(), {anc}, NoiseClass::OneQuditNoisy));
  const auto& w = angles.omega;
  circuit.seq.ops.push_back(rot_op(Axis::Y, 0, 1, w[0], 3, 0, NoiseClass::OneQuditNoisy));
  circuit.seq.ops.push_back(rot_op(Axis::Y, 1, 2, w[1], 3, 0, NoiseClass::OneQuditNoisy));
  circuit.seq.ops.push_back(rot_op(Axis::Y, 0, 1, -w[0], 3, 0, NoiseClass::OneQuditNoisy));
  circuit.seq.ops.push_back(named_op("csum", csum(3), {anc, 0}, NoiseClass::TwoQudit));
  circuit.seq.ops.push_back(rot_op(Axis::Y, 0, 1, w[2], 3, 0, NoiseClass::OneQuditNoisy));
  circuit.seq.ops.push_back(rot_op(Axis::Y, 1, 2, w[3], 3, 0, NoiseClass::OneQuditNoisy));
  circuit.seq.ops.push_back(rot_op(Axis::Y, 0, 1, -w[2], 3, 0, NoiseClass::OneQuditNoisy));
  circuit.seq.ops.push_back(named_op("csum_dag", csum(3, true), {anc, 0}, NoiseClass::TwoQudit));
  for (int i = 1; i < params.n_s; ++i) append_sequence(circuit, vg_sequence(site_state, i), {i});
  circuit.meta.prep_op_count = static_cast<int>(circuit.seq.ops.size());
  return circuit;
}

Circuit build_trotter_step(const ModelParams& params, double dt, NativeGateSet native) {
  params.validate();
  if (native == NativeGateSet::QubitCnot)
    throw std::invalid_argument(
        "build_trotter_step: the qubit-encoded step is not assembled here; use the dedicated "
        "qubit builders");
  const int d = params.local_dim();
  Circuit circuit{params.make_register(), GateSequence{}, CircuitMeta{}};
  circuit.meta.native = native;
  circuit.meta.dt = dt;
  circuit.meta.n_steps = 1;
  circuit.meta.ancilla_site = -1;

  // e^{-i dt (U+2Y)/2 (L^z)^2} per site
  const Mat lz = build_lz(params.n_max);
  RVec lz2_diag(d);
  for (int i = 0; i < d; ++i) lz2_diag(i) = std::norm(lz(i, i));
  const double theta_site = -dt * (params.coupling_u + 2.0 * params.coupling_y) / 2.0;
  const GateSequence site_seq = decompose_diagonal_rotation(theta_site, lz2_diag, d);
  for (int i = 0; i < params.n_s; ++i) append_sequence(circuit, site_seq, {i});

  // e^{-i dt Y L^z L^z} per bond, even bonds then odd bonds
  const double theta_bond = -dt * params.coupling_y;
  const GateSequence bond_seq = decompose_lzlz(theta_bond, params.n_max, native);
  for (int parity : {0, 1})
    for (int i = parity; i + 1 < params.n_s; i += 2) append_sequence(circuit, bond_seq, {i, i + 1});

  // e^{+i dt X U^x} per site
  const GateSequence ux_seq = decompose_ux(dt * params.coupling_x, params.n_max, params.c_bound,
                                           UxMode::Exact);
  for (int i = 0; i < params.n_s; ++i) append_sequence(circuit, ux_seq, {i});
  return circuit;
}

Circuit build_correlator_circuit(const ModelParams& params, double dt, int n_steps,
                                 NativeGateSet native, CorrelatorPart /*part*/,
                                 std::uint64_t seed) {
  if (n_steps < 0) throw std::invalid_argument("build_correlator_circuit: n_steps must be >= 0");
  const OneSiteState site_state = onesite_prep_ansatz(params.coupling_u);
  Circuit circuit = build_vprep(params, site_state, seed);
  circuit.meta.native = native;
  circuit.meta.dt = dt;
  circuit.meta.n_steps = n_steps;

  if (n_steps > 0) {
    const Circuit step = build_trotter_step(params, dt, native);
    std::vector<int> identity_map(static_cast<std::size_t>(params.n_s));
    for (int i = 0; i < params.n_s; ++i) identity_map[static_cast<std::size_t>(i)] = i;
    for (int s = 0; s < n_steps; ++s) append_sequence(circuit, step.seq, identity_map);
  }

  // Ancilla-controlled shift on the source site. With our csum convention
  // |a,b> -> |a,(a+b) mod d> this is csum itself (the published figure's
  // adjoint refers to the opposite shift-direction convention).
  circuit.seq.ops.push_back(
      named_op("csum", csum(3), {circuit.meta.ancilla_site, circuit.meta.source_site},
               NoiseClass::TwoQudit));
  circuit.meta.readout_op_count = 1;
  return circuit;
}

namespace {

struct MeasuredTerm {
  double mean = 0.0;
  double stderr_ = 0.0;
};

// Joint sampling of one ancilla basis: returns the combined estimator
// mean of  anc_value * (1 + source_sign)/2  and its standard error.
MeasuredTerm sample_combined(const Register& reg, const RVec& probs, int anc, int source,
                             std::int64_t shots, std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("estimate_correlator: shots must be >= 1");
  SplitRng rng(seed);
  double sum = 0.0, sum_sq = 0.0;
  RVec cdf(probs.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    acc += std::max(0.0, probs(i));
    cdf(i) = acc;
  }
  for (std::int64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * acc;
    const double* begin = cdf.data();
    const double* it = std::upper_bound(begin, begin + cdf.size(), u);
    std::int64_t idx = it - begin;
    if (idx >= cdf.size()) idx = cdf.size() - 1;
    const std::vector<int> digits = reg.unflatten(idx);
    const int a = digits[static_cast<std::size_t>(anc)];
    const int w = digits[static_cast<std::size_t>(source)];
    const double anc_value = (a == 0) ? 1.0 : (a == 1 ? -1.0 : 0.0);
    const double source_sign = (w == 0) ? -1.0 : 1.0;
    const double v = anc_value * (1.0 + source_sign) / 2.0;
    sum += v;
    sum_sq += v * v;
  }
  MeasuredTerm out;
  out.mean = sum / static_cast<double>(shots);
  const double var = std::max(0.0, sum_sq / static_cast<double>(shots) - out.mean * out.mean);
  out.stderr_ = std::sqrt(var / static_cast<double>(shots));
  return out;
}

// Basis-change unitaries mapping the measured subspace Pauli to sigma^z_{0,1}.
Mat x_basis_change() { return had01(); }
Mat y_basis_change() {
  // columns: eigenvectors of sigma^y_{0,1} for +1, -1, and the untouched |2>
  Mat v = Mat::Zero(3, 3);
  const double s = 1.0 / std::sqrt(2.0);
  v(0, 0) = s;
  v(1, 0) = Cx(0, -s);
  v(0, 1) = s;
  v(1, 1) = Cx(0, s);
  v(2, 2) = 1.0;
  return v.adjoint();
}

template <typename State>
State run_circuit(const Circuit& circuit, const EstimateOptions& options, State state) {
  std::vector<NoisyOp> ops;
  const bool noisy = options.noise.has_value();
  if (noisy)
    ops = attach_noise(circuit.seq, *options.noise, options.policy);

  const int total = static_cast<int>(circuit.seq.ops.size());
  const int prep_end = circuit.meta.prep_op_count;
  const int evolution_end = total - circuit.meta.readout_op_count;

  std::vector<int> working_sites;
  for (int i = 0; i < circuit.reg.num_sites(); ++i)
    if (i != circuit.meta.ancilla_site) working_sites.push_back(i);

  for (int idx = 0; idx < total; ++idx) {
    if (options.replace_evolution && idx == prep_end) {
      apply_unitary_in_place(state, *options.replace_evolution, working_sites);
    }
    if (options.replace_evolution && idx >= prep_end && idx < evolution_end) continue;
    const GateOp& op = circuit.seq.ops[static_cast<std::size_t>(idx)];
    apply_unitary_in_place(state, op.matrix, op.sites);
    if (noisy && ops[static_cast<std::size_t>(idx)].channel) {
      if constexpr (std::is_same_v<State, DensityMatrix>) {
        apply_channel_in_place(state, *ops[static_cast<std::size_t>(idx)].channel, op.sites);
      } else {
        throw std::invalid_argument("noisy execution requires the density-matrix backend");
      }
    }
  }
  // Degenerate corner: evolution replacement when the evolution block is empty
  // and prep_end == total - readout; handled above since idx == prep_end fires.
  return state;
}

}  // namespace

CorrelatorEstimate estimate_correlator(const Circuit& circuit, const EstimateOptions& options) {
  const int anc = circuit.meta.ancilla_site;
  const int src = circuit.meta.source_site;
  if (anc < 0) throw std::invalid_argument("estimate_correlator: circuit has no ancilla");

  CorrelatorEstimate est;
  est.t = circuit.meta.dt * circuit.meta.n_steps;
  const double scale = circuit.meta.scale;

  const std::vector<int> zeros(static_cast<std::size_t>(circuit.reg.num_sites()), 0);
  const bool noisy = options.noise.has_value() && !options.noise->is_zero();

  // Observables: annihilating sigma^x/sigma^y on the ancilla, and the
  // source-site sign operator diag(-1, 1, 1) (classical -1 when the source
  // qutrit is measured in |0>).
  const Mat sx = subspace_pauli(Axis::X, 0, 1, 3, PauliMode::Annihilating);
  const Mat sy = subspace_pauli(Axis::Y, 0, 1, 3, PauliMode::Annihilating);
  Mat zsign = Mat::Identity(3, 3);
  zsign(0, 0) = -1.0;

  auto combine = [&](double ex, double exz, double ey, double eyz) {
    est.re = scale * (ex + exz) / 2.0;
    est.im = -scale * (ey + eyz) / 2.0;
  };

  if (options.noise.has_value()) {
    DensityMatrix rho = make_density_matrix(make_basis_state(circuit.reg, zeros));
    rho = run_circuit(circuit, options, std::move(rho));
    if (!options.sampled) {
      const double ex = expectation(rho, sx, {anc});
      const double exz = expectation(rho, Mat(kron2(sx, zsign)), {anc, src});
      const double ey = expectation(rho, sy, {anc});
      const double eyz = expectation(rho, Mat(kron2(sy, zsign)), {anc, src});
      combine(ex, exz, ey, eyz);
      est.provenance = noisy ? "circuit_noisy" : "circuit_noiseless";
      return est;
    }
    const DensityMatrix rho_x = apply_unitary(rho, x_basis_change(), {anc});
    const DensityMatrix rho_y = apply_unitary(rho, y_basis_change(), {anc});
    SplitRng root(options.seed);
    const MeasuredTerm mx = sample_combined(circuit.reg, basis_probabilities(rho_x), anc, src,
                                            options.shots, root.split(1).next_u64());
    const MeasuredTerm my = sample_combined(circuit.reg, basis_probabilities(rho_y), anc, src,
                                            options.shots, root.split(2).next_u64());
    est.re = scale * mx.mean;
    est.im = -scale * my.mean;
    est.err_re = scale * mx.stderr_;
    est.err_im = scale * my.stderr_;
    est.shots = options.shots;
    est.provenance = noisy ? "circuit_noisy" : "circuit_noiseless";
    return est;
  }

  StateVector psi = make_basis_state(circuit.reg, zeros);
  psi = run_circuit(circuit, options, std::move(psi));
  psi.amplitudes *= circuit.seq.global_phase;  // keeps exact-state checks honest
  if (!options.sampled) {
    const double ex = expectation(psi, sx, {anc});
    const double exz = expectation(psi, Mat(kron2(sx, zsign)), {anc, src});
    const double ey = expectation(psi, sy, {anc});
    const double eyz = expectation(psi, Mat(kron2(sy, zsign)), {anc, src});
    combine(ex, exz, ey, eyz);
    est.provenance = options.replace_evolution ? "exact" : "circuit_noiseless";
    return est;
  }
  const StateVector psi_x = apply_unitary(psi, x_basis_change(), {anc});
  const StateVector psi_y = apply_unitary(psi, y_basis_change(), {anc});
  SplitRng root(options.seed);
  const MeasuredTerm mx = sample_combined(circuit.reg, basis_probabilities(psi_x), anc, src,
                                          options.shots, root.split(1).next_u64());
  const MeasuredTerm my = sample_combined(circuit.reg, basis_probabilities(psi_y), anc, src,
                                          options.shots, root.split(2).next_u64());
  est.re = scale * mx.mean;
  est.im = -scale * my.mean;
  est.err_re = scale * mx.stderr_;
  est.err_im = scale * my.stderr_;
  est.shots = options.shots;
  est.provenance = "circuit_noiseless";
  return est;
}

Circuit build_hadamard_test(const ModelParams& params, const GateSequence& prep_v,
                            const GateSequence& prep_w, double prep_w_scale, double dt,
                            int n_steps, int site_y, HadamardVariant variant) {
  params.validate();
  if (site_y < 0 || site_y >= params.n_s)
    throw std::invalid_argument("build_hadamard_test: site_y out of range");
  const int anc = params.n_s;
  Circuit circuit{params.make_register(3), GateSequence{}, CircuitMeta{}};
  circuit.meta.ancilla_site = anc;
  circuit.meta.source_site = site_y;
  circuit.meta.scale = prep_w_scale;
  circuit.meta.dt = dt;
  circuit.meta.n_steps = n_steps;

  circuit.seq.ops.push_back(named_op("had_01", had01(), {anc}, NoiseClass::OneQuditNoisy));
  auto push_controlled = [&](const GateSequence& seq, int match) {
    for (const GateOp& op : seq.ops) {
      if (op.sites.size() != 1)
        throw std::invalid_argument("build_hadamard_test: preparation gates must be one-site");
      std::vector<int> sites{anc, op.sites[0]};
      circuit.seq.ops.push_back(named_op("c[" + op.name + "]",
                                         controlled_gate(op.matrix, 3, match), std::move(sites),
                                         NoiseClass::TwoQudit));
    }
  };
  push_controlled(prep_v, 0);
  push_controlled(prep_w, 1);
  circuit.meta.prep_op_count = static_cast<int>(circuit.seq.ops.size());

  if (n_steps > 0) {
    const Circuit step = build_trotter_step(params, dt, NativeGateSet::CsumNative);
    std::vector<int> identity_map(static_cast<std::size_t>(params.n_s));
    for (int i = 0; i < params.n_s; ++i) identity_map[static_cast<std::size_t>(i)] = i;
    for (int s = 0; s < n_steps; ++s) append_sequence(circuit, step.seq, identity_map);
  }

  // Controlled unitary part of the sink split at site_y. The sink parts are
  // (X01 X12) and (X01 Z01 X12), applied right-to-left.
  const Mat x01 = subspace_pauli(Axis::X, 0, 1, 3, PauliMode::Embedded);
  const Mat x12 = subspace_pauli(Axis::X, 1, 2, 3, PauliMode::Embedded);
  const Mat z01 = subspace_pauli(Axis::Z, 0, 1, 3, PauliMode::Embedded);
  int readout = 0;
  auto push_part = [&](const Mat& u, const char* name) {
    circuit.seq.ops.push_back(
        named_op(name, controlled_gate(u, 3, 1), {anc, site_y}, NoiseClass::TwoQudit));
    ++readout;
  };
  push_part(x12, "c[x_12]");
  if (variant == HadamardVariant::XZX) push_part(z01, "c[z_01]");
  push_part(x01, "c[x_01]");
  circuit.meta.readout_op_count = readout;
  return circuit;
}

Cx estimate_hadamard_test(const Circuit& circuit, const EstimateOptions& options) {
  const int anc = circuit.meta.ancilla_site;
  const std::vector<int> zeros(static_cast<std::size_t>(circuit.reg.num_sites()), 0);
  const Mat sx = subspace_pauli(Axis::X, 0, 1, 3, PauliMode::Annihilating);
  const Mat sy = subspace_pauli(Axis::Y, 0, 1, 3, PauliMode::Annihilating);
  if (options.noise.has_value()) {
    DensityMatrix rho = make_density_matrix(make_basis_state(circuit.reg, zeros));
    rho = run_circuit(circuit, options, std::move(rho));
    return circuit.meta.scale *
           Cx(expectation(rho, sx, {anc}), -expectation(rho, sy, {anc})) / 2.0;
  }
  StateVector psi = make_basis_state(circuit.reg, zeros);
  psi = run_circuit(circuit, options, std::move(psi));
  return circuit.meta.scale * Cx(expectation(psi, sx, {anc}), -expectation(psi, sy, {anc})) / 2.0;
}

GateSequence build_qubit_lz2(double theta) {
  // exp(i theta (1 + Z1)/2) = e^{i theta/2} Rz(theta/2) on the first qubit.
  GateSequence seq;
  Mat rz = Mat::Zero(2, 2);
  rz(0, 0) = std::polar(1.0, theta / 2.0);
  rz(1, 1) = std::polar(1.0, -theta / 2.0);
  GateOp op = named_op("rz", std::move(rz), {0}, NoiseClass::RzVirtual, theta / 2.0);
  seq.ops.push_back(std::move(op));
  seq.global_phase = std::polar(1.0, theta / 2.0);
  return seq;
}

namespace {

Mat cnot_mat(bool control_first) {
  Mat m = Mat::Zero(4, 4);
  if (control_first) {
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  } else {
    m(0, 0) = m(1, 3) = m(2, 2) = m(3, 1) = 1.0;
  }
  return m;
}

GateSequence qubit_lzlz_sequence_with(double theta, double calib) {
  GateSequence seq;
  auto rz = [&](int q) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = std::polar(1.0, calib * theta);
    m(1, 1) = std::polar(1.0, -calib * theta);
    return named_op("rz", std::move(m), {q}, NoiseClass::RzVirtual, calib * theta);
  };
  auto cn = [&](int ctrl, int tgt) {
    return named_op("cnot", cnot_mat(true), {ctrl, tgt}, NoiseClass::TwoQudit);
  };
  // CNOT/Rz ladder computing the four Z-string parities.
  seq.ops.push_back(cn(1, 3));
  seq.ops.push_back(rz(3));
  seq.ops.push_back(cn(3, 2));
  seq.ops.push_back(rz(2));
  seq.ops.push_back(cn(2, 0));
  seq.ops.push_back(rz(0));
  seq.ops.push_back(cn(2, 0));
  seq.ops.push_back(cn(3, 2));
  seq.ops.push_back(cn(3, 0));
  seq.ops.push_back(rz(0));
  seq.ops.push_back(cn(3, 0));
  seq.ops.push_back(cn(1, 3));
  return seq;
}

double calibrate_qubit_lzlz() {
  const QubitEncoding enc = qubit_encoding();
  const double theta = 0.537;
  Mat target = Mat::Zero(16, 16);
  const Mat lzlz = kron2(enc.lz, enc.lz);
  for (int i = 0; i < 16; ++i) target(i, i) = std::polar(1.0, theta * lzlz(i, i).real());
  for (double c : {0.25, -0.25, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0}) {
    const GateSequence seq = qubit_lzlz_sequence_with(theta, c);
    if (phase_aligned_distance(compose_sequence(seq, 2, 4), target) < kDecompositionTol) return c;
  }
  throw std::runtime_error("build_qubit_lzlz: no angle calibration found");
}

}  // namespace

double qubit_lzlz_angle_calibration() {
  static const double calib = calibrate_qubit_lzlz();
  return calib;
}

GateSequence build_qubit_lzlz(double theta) {
  return qubit_lzlz_sequence_with(theta, qubit_lzlz_angle_calibration());
}

GateSequence build_qubit_ux(double theta) {
  const QubitEncoding enc = qubit_encoding();
  Eigen::SelfAdjointEigenSolver<Mat> solver(enc.ux);
  Mat target = Mat::Zero(4, 4);
  Vec phases(4);
  for (int i = 0; i < 4; ++i) phases(i) = std::polar(1.0, theta * solver.eigenvalues()(i));
  target = solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
  return qubit_two_qubit_sequence(target);
}

int count_1q_ops(const GateSequence& seq) {
  int n = 0;
  for (const GateOp& op : seq.ops) n += op.sites.size() == 1 ? 1 : 0;
  return n;
}

int count_2q_ops(const GateSequence& seq) {
  int n = 0;
  for (const GateOp& op : seq.ops) n += op.sites.size() == 2 ? 1 : 0;
  return n;
}

std::array<GateCountRow, 3> gate_count_report() {
  const double theta = 0.78;
  std::array<GateCountRow, 3> rows;

  const GateSequence ux_qutrit = decompose_ux(theta, 1, 0, UxMode::Exact);
  const GateSequence ux_qubit = build_qubit_ux(theta);
  rows[0] = GateCountRow{"ux", count_1q_ops(ux_qubit), count_2q_ops(ux_qubit),
                         count_1q_ops(ux_qutrit), count_2q_ops(ux_qutrit)};

  RVec lz2(3);
  lz2 << 1.0, 0.0, 1.0;
  const GateSequence lz2_qutrit = decompose_diagonal_rotation(theta, lz2, 3);
  const GateSequence lz2_qubit = build_qubit_lz2(theta);
  rows[1] = GateCountRow{"lz2", count_1q_ops(lz2_qubit), count_2q_ops(lz2_qubit),
                         count_1q_ops(lz2_qutrit), count_2q_ops(lz2_qutrit)};

  const GateSequence lzlz_qutrit = decompose_lzlz(theta, 1, NativeGateSet::CsumNative);
  const GateSequence lzlz_qubit = build_qubit_lzlz(theta);
  rows[2] = GateCountRow{"lzlz", count_1q_ops(lzlz_qubit), count_2q_ops(lzlz_qubit),
                         count_1q_ops(lzlz_qutrit), count_2q_ops(lzlz_qutrit)};
  return rows;
}

}  // namespace qsqed
