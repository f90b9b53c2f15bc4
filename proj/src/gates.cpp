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

#include "qsqed/gates.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qsqed/fitting.hpp"

namespace qsqed {
namespace {

constexpr double kPi = 3.14159265358979323846;

void check_pair(int a, int b, int d) {
  if (!(0 <= a && a < b && b < d))
    throw std::invalid_argument("subspace pair requires 0 <= a < b < d, got (" +
                                std::to_string(a) + ", " + std::to_string(b) + ") at d=" +
                                std::to_string(d));
}

bool is_prime(int n) {
  if (n < 2) return false;
  for (int p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

std::string pair_name(const char* base, int a, int b) {
  return std::string(base) + "_" + std::to_string(a) + std::to_string(b);
}

GateOp make_rotation_op(Axis axis, int a, int b, double theta, int d, int site,
                        NoiseClass noise) {
  const char* base = axis == Axis::X ? "rx" : (axis == Axis::Y ? "ry" : "rz");
  GateOp op;
  op.name = pair_name(base, a, b);
  op.matrix = rotation(axis, a, b, theta, d);
  op.sites = {site};
  op.noise = noise;
  op.angle = theta;
  return op;
}

}  // namespace

Mat subspace_pauli(Axis axis, int a, int b, int d, PauliMode mode) {
  check_pair(a, b, d);
  Mat m = Mat::Zero(d, d);
  switch (axis) {
    case Axis::X:
      m(b, a) = 1.0;
      m(a, b) = 1.0;
      break;
    case Axis::Y:
      m(b, a) = Cx(0.0, -1.0);
      m(a, b) = Cx(0.0, 1.0);
      break;
    case Axis::Z:
      m(a, a) = 1.0;
      m(b, b) = -1.0;
      break;
  }
  if (mode == PauliMode::Embedded) {
    for (int c = 0; c < d; ++c)
      if (c != a && c != b) m(c, c) = 1.0;
  }
  return m;
}

Mat rotation(Axis axis, int a, int b, double theta, int d) {
  check_pair(a, b, d);
  if (!std::isfinite(theta)) throw std::invalid_argument("rotation: non-finite angle");
  const Mat sigma = subspace_pauli(axis, a, b, d, PauliMode::Annihilating);
  Mat proj = Mat::Zero(d, d);
  proj(a, a) = 1.0;
  proj(b, b) = 1.0;
  return std::cos(theta) * proj + Cx(0.0, std::sin(theta)) * sigma +
         (Mat::Identity(d, d) - proj);
}

Mat csum(int d, bool adjoint) {
  if (d < 2) throw std::invalid_argument("csum: d must be >= 2");
  Mat m = Mat::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      const int t = adjoint ? ((b - a) % d + d) % d : (a + b) % d;
      m(a * d + t, a * d + b) = 1.0;
    }
  }
  return m;
}

Mat generalized_hadamard(int d) {
  if (d < 2) throw std::invalid_argument("generalized_hadamard: d must be >= 2");
  Mat m(d, d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j)
      m(k, j) = std::polar(scale, 2.0 * kPi * k * j / d);
  return m;
}

RVec DiagonalDecomposition::reconstruct(int d) const {
  RVec out = RVec::Constant(d, alpha0);
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    out(static_cast<Eigen::Index>(j)) += alphas[j];
    out(static_cast<Eigen::Index>(j) + 1) -= alphas[j];
  }
  return out;
}

DiagonalDecomposition solve_diagonal_coeffs(const RVec& target) {
  const int d = static_cast<int>(target.size());
  if (d < 2) throw std::invalid_argument("solve_diagonal_coeffs: need length >= 2");
  DiagonalDecomposition out;
  // Summing all rows kills the traceless sigma^z terms; then the alphas follow
  // by forward elimination down the ladder.
  out.alpha0 = target.mean();
  out.alphas.resize(static_cast<std::size_t>(d) - 1);
  double prev = 0.0;
  for (int j = 0; j + 1 < d; ++j) {
    const double alpha = target(j) - out.alpha0 + prev;
    out.alphas[static_cast<std::size_t>(j)] = alpha;
    prev = alpha;
  }
  const RVec recon = out.reconstruct(d);
  if ((recon - target).cwiseAbs().maxCoeff() > kConservationTol)
    throw std::runtime_error("solve_diagonal_coeffs: reconstruction residual above tolerance");
  return out;
}

int GateSequence::count(NoiseClass cls) const {
  int n = 0;
  for (const GateOp& op : ops) n += (op.noise == cls) ? 1 : 0;
  return n;
}

namespace {

// Embeds a subset operator into num_sites qudits of dimension d each; site 0
// is the most significant digit.
Mat embed_local(const Mat& op, const std::vector<int>& sites, int d, int num_sites) {
  std::int64_t dim = 1;
  for (int i = 0; i < num_sites; ++i) dim *= d;
  std::vector<std::int64_t> strides(static_cast<std::size_t>(num_sites), 1);
  for (int i = num_sites - 2; i >= 0; --i)
    strides[static_cast<std::size_t>(i)] = strides[static_cast<std::size_t>(i) + 1] * d;

  const int k = static_cast<int>(op.rows());
  std::vector<std::int64_t> sub_offsets(static_cast<std::size_t>(k), 0);
  {
    std::vector<int> digit(sites.size(), 0);
    for (int j = 0; j < k; ++j) {
      std::int64_t off = 0;
      for (std::size_t i = 0; i < sites.size(); ++i)
        off += digit[i] * strides[static_cast<std::size_t>(sites[i])];
      sub_offsets[static_cast<std::size_t>(j)] = off;
      for (int i = static_cast<int>(sites.size()) - 1; i >= 0; --i) {
        if (++digit[static_cast<std::size_t>(i)] < d) break;
        digit[static_cast<std::size_t>(i)] = 0;
      }
    }
  }
  std::vector<bool> in_subset(static_cast<std::size_t>(num_sites), false);
  for (int s : sites) in_subset[static_cast<std::size_t>(s)] = true;
  std::vector<int> rest;
  for (int s = 0; s < num_sites; ++s)
    if (!in_subset[static_cast<std::size_t>(s)]) rest.push_back(s);
  std::int64_t rest_dim = 1;
  for (std::size_t i = 0; i < rest.size(); ++i) rest_dim *= d;

  Mat full = Mat::Zero(dim, dim);
  std::vector<int> digit(rest.size(), 0);
  for (std::int64_t idx = 0; idx < rest_dim; ++idx) {
    std::int64_t base = 0;
    for (std::size_t i = 0; i < rest.size(); ++i)
      base += digit[i] * strides[static_cast<std::size_t>(rest[i])];
    for (int j = 0; j < k; ++j)
      for (int l = 0; l < k; ++l)
        full(base + sub_offsets[static_cast<std::size_t>(j)],
             base + sub_offsets[static_cast<std::size_t>(l)]) = op(j, l);
    for (int i = static_cast<int>(rest.size()) - 1; i >= 0; --i) {
      if (++digit[static_cast<std::size_t>(i)] < d) break;
      digit[static_cast<std::size_t>(i)] = 0;
    }
  }
  return full;
}

}  // namespace

Mat compose_sequence(const GateSequence& seq, int d, int num_sites) {
  std::int64_t dim = 1;
  for (int i = 0; i < num_sites; ++i) dim *= d;
  Mat total = Mat::Identity(dim, dim) * seq.global_phase;
  for (const GateOp& op : seq.ops) {
    int sub_dim = 1;
    for (std::size_t i = 0; i < op.sites.size(); ++i) sub_dim *= d;
    if (op.matrix.rows() != sub_dim)
      throw std::invalid_argument("compose_sequence: operator/site shape mismatch");
    total = embed_local(op.matrix, op.sites, d, num_sites) * total;
  }
  return total;
}

GateSequence decompose_diagonal_rotation(double theta, const RVec& target_diagonal, int d) {
  if (static_cast<int>(target_diagonal.size()) != d)
    throw std::invalid_argument("decompose_diagonal_rotation: diagonal length mismatch");
  GateSequence seq;
  if (theta == 0.0) return seq;
  const DiagonalDecomposition coeffs = solve_diagonal_coeffs(target_diagonal);
  seq.global_phase = std::polar(1.0, theta * coeffs.alpha0);
  for (int j = 0; j + 1 < d; ++j) {
    const double angle = theta * coeffs.alphas[static_cast<std::size_t>(j)];
    seq.ops.push_back(make_rotation_op(Axis::Z, j, j + 1, angle, d, 0, NoiseClass::RzVirtual));
  }
  return seq;
}

GateSequence decompose_lzlz(double theta, int n_max, NativeGateSet native) {
  if (n_max < 1) throw std::invalid_argument("decompose_lzlz: n_max must be >= 1");
  const int d = 2 * n_max + 1;
  GateSequence seq;

  if (native == NativeGateSet::LzlzNative) {
    Mat gate = Mat::Zero(d * d, d * d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        gate(a * d + b, a * d + b) =
            std::polar(1.0, theta * (n_max - a) * (n_max - b));
    GateOp op;
    op.name = "lzlz";
    op.matrix = std::move(gate);
    op.sites = {0, 1};
    op.noise = NoiseClass::TwoQudit;
    op.angle = theta;
    seq.ops.push_back(std::move(op));
    return seq;
  }
  if (native != NativeGateSet::CsumNative)
    throw std::invalid_argument("decompose_lzlz: unsupported native gate set");
  if (!is_prime(d))
    throw std::invalid_argument("decompose_lzlz: csum ladder requires prime local dimension, d=" +
                                std::to_string(d) + " is unsupported");
  if (theta == 0.0) return seq;

  // Fourier solve for the rotation layers: after j csum gates the target digit
  // holds (j*a + b) mod d, so layer phases p_j must satisfy
  //   sum_j p_j((j a + b) mod d) = theta m(a) m(b),  m(k) = n_max - k.
  // Writing p_j in characters of Z_d decouples the system when d is prime:
  //   p_j(x) = theta sum_{k!=0} mhat(k) mhat(k j mod d) omega^{k x}.
  std::vector<Cx> mhat(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    Cx acc = 0.0;
    for (int x = 0; x < d; ++x)
      acc += Cx(n_max - x) * std::polar(1.0, -2.0 * kPi * k * x / d);
    mhat[static_cast<std::size_t>(k)] = acc / static_cast<double>(d);
  }

  GateOp cs;
  cs.name = "csum";
  cs.matrix = csum(d);
  cs.sites = {0, 1};
  cs.noise = NoiseClass::TwoQudit;

  seq.ops.push_back(cs);
  for (int j = 1; j < d; ++j) {
    RVec layer(d);
    for (int x = 0; x < d; ++x) {
      Cx acc = 0.0;
      for (int k = 1; k < d; ++k)
        acc += mhat[static_cast<std::size_t>(k)] * mhat[static_cast<std::size_t>((k * j) % d)] *
               std::polar(1.0, 2.0 * kPi * k * x / d);
      layer(x) = theta * acc.real();
    }
    GateSequence rz_layer = decompose_diagonal_rotation(1.0, layer, d);
    for (GateOp& op : rz_layer.ops) {
      op.sites = {1};  // rotations act on the csum target qudit
      seq.ops.push_back(std::move(op));
    }
    seq.global_phase *= rz_layer.global_phase;
    seq.ops.push_back(cs);
  }
  return seq;
}

namespace {

// Real Givens synthesis: returns rotations with V = R(th_1) R(th_2) ... R(th_m) S,
// where R(th) is rotation(Axis::Y, a, b, th) and S = diag(signs), det(S) = +1.
struct GivensSynthesis {
  struct Entry {
    int a, b;
    double theta;
  };
  std::vector<Entry> rotations;
  std::vector<int> negative_signs;  // indices with S_ii = -1 (even count)
};

GivensSynthesis givens_synthesize(RMat v) {
  const int d = static_cast<int>(v.rows());
  GivensSynthesis out;
  for (int col = 0; col < d; ++col) {
    for (int row = d - 1; row > col; --row) {
      const double x = v(row - 1, col);
      const double y = v(row, col);
      if (std::abs(y) < 1e-15) continue;
      const double th = std::atan2(y, x);
      const double c = std::cos(th), s = std::sin(th);
      for (int k = 0; k < d; ++k) {
        const double top = c * v(row - 1, k) + s * v(row, k);
        const double bot = -s * v(row - 1, k) + c * v(row, k);
        v(row - 1, k) = top;
        v(row, k) = bot;
      }
      out.rotations.push_back({row - 1, row, th});
    }
  }
  for (int i = 0; i < d; ++i)
    if (v(i, i) < 0.0) out.negative_signs.push_back(i);
  if (out.negative_signs.size() % 2 != 0)
    throw std::runtime_error("givens_synthesize: det(V) must be +1");
  return out;
}

}  // namespace

GateSequence decompose_ux(double theta, int n_max, int c_bound, UxMode mode) {
  if (n_max < 1) throw std::invalid_argument("decompose_ux: n_max must be >= 1");
  if (c_bound != 0 && c_bound != 1) throw std::invalid_argument("decompose_ux: c_bound in {0,1}");
  const int d = 2 * n_max + 1;
  GateSequence seq;

  if (mode == UxMode::Trotterized) {
    // U^x = (1/2)(sum_j sigma^x_{j,j+1} + c_bound sigma^x_{0,d-1}); each factor
    // exponentiates to a half-angle rotation.
    for (int j = 0; j + 1 < d; ++j)
      seq.ops.push_back(
          make_rotation_op(Axis::X, j, j + 1, theta / 2.0, d, 0, NoiseClass::OneQuditNoisy));
    if (c_bound)
      seq.ops.push_back(
          make_rotation_op(Axis::X, 0, d - 1, theta / 2.0, d, 0, NoiseClass::OneQuditNoisy));
    return seq;
  }

  if (n_max == 1 && c_bound == 0) {
    // Fixed five-rotation form for the hard-wall qutrit: conjugate the
    // eigenbasis change (two y rotations each side) around one virtual z
    // rotation carrying the +-1/sqrt(2) eigenvalues.
    seq.ops.push_back(make_rotation_op(Axis::Y, 0, 2, -kPi / 4, d, 0, NoiseClass::OneQuditNoisy));
    seq.ops.push_back(make_rotation_op(Axis::Y, 0, 1, -kPi / 4, d, 0, NoiseClass::OneQuditNoisy));
    seq.ops.push_back(make_rotation_op(Axis::Z, 0, 1, theta / std::sqrt(2.0), d, 0,
                                       NoiseClass::RzVirtual));
    seq.ops.push_back(make_rotation_op(Axis::Y, 0, 1, kPi / 4, d, 0, NoiseClass::OneQuditNoisy));
    seq.ops.push_back(make_rotation_op(Axis::Y, 0, 2, kPi / 4, d, 0, NoiseClass::OneQuditNoisy));
    return seq;
  }

  // General case: diagonalize U^x = V D V^T (real symmetric), synthesize V by
  // Givens rotations, carry D as a virtual z layer.
  RMat ux = RMat::Zero(d, d);
  for (int j = 0; j + 1 < d; ++j) {
    ux(j, j + 1) += 0.5;
    ux(j + 1, j) += 0.5;
  }
  if (c_bound) {
    ux(0, d - 1) += 0.5;
    ux(d - 1, 0) += 0.5;
  }
  Eigen::SelfAdjointEigenSolver<RMat> solver(ux);
  RMat v = solver.eigenvectors();
  if (v.determinant() < 0.0) v.col(0) *= -1.0;
  const GivensSynthesis syn = givens_synthesize(v);

  auto push_sign_ops = [&](GateSequence& s) {
    for (std::size_t i = 0; i + 1 < syn.negative_signs.size(); i += 2)
      s.ops.push_back(make_rotation_op(Axis::Y, syn.negative_signs[i],
                                       syn.negative_signs[i + 1], kPi, d, 0,
                                       NoiseClass::OneQuditNoisy));
  };

  // Application order: V^dag, then the diagonal layer, then V.
  for (const auto& r : syn.rotations)
    seq.ops.push_back(make_rotation_op(Axis::Y, r.a, r.b, -r.theta, d, 0,
                                       NoiseClass::OneQuditNoisy));
  push_sign_ops(seq);

  GateSequence diag = decompose_diagonal_rotation(theta, solver.eigenvalues(), d);
  for (GateOp& op : diag.ops) seq.ops.push_back(std::move(op));
  seq.global_phase *= diag.global_phase;

  push_sign_ops(seq);
  for (auto it = syn.rotations.rbegin(); it != syn.rotations.rend(); ++it)
    seq.ops.push_back(make_rotation_op(Axis::Y, it->a, it->b, it->theta, d, 0,
                                       NoiseClass::OneQuditNoisy));
  return seq;
}

Mat su3_euler_product(const std::array<double, 8>& a) {
  return rotation(Axis::Z, 0, 1, a[0], 3) * rotation(Axis::Y, 0, 1, a[1], 3) *
         rotation(Axis::Z, 0, 1, a[2], 3) * rotation(Axis::Y, 0, 2, a[3], 3) *
         rotation(Axis::Z, 0, 1, a[4], 3) * rotation(Axis::Y, 0, 1, a[5], 3) *
         rotation(Axis::Z, 0, 1, a[6], 3) * rotation(Axis::Z, 1, 2, a[7], 3);
}

Su3EulerFit su3_euler_fit(const Mat& target, std::uint64_t seed, int max_restarts) {
  if (target.rows() != 3 || target.cols() != 3)
    throw std::invalid_argument("su3_euler_fit: target must be 3x3");
  if (!is_unitary(target)) throw std::invalid_argument("su3_euler_fit: target is not unitary");

  auto residual = [&target](const RVec& x) {
    std::array<double, 8> a{};
    for (int i = 0; i < 8; ++i) a[static_cast<std::size_t>(i)] = x(i);
    return phase_free_residual(su3_euler_product(a), target);
  };
  const FitResult fit = fit_multistart(residual, 8, max_restarts, 1e-10, seed);

  Su3EulerFit out;
  for (int i = 0; i < 8; ++i) out.angles[static_cast<std::size_t>(i)] = fit.x(i);
  out.residual = fit.max_abs_residual;
  out.converged = fit.max_abs_residual < 1e-8;
  return out;
}

}  // namespace qsqed
