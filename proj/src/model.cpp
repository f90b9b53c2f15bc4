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

#include "qsqed/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qsqed/gates.hpp"

namespace qsqed {

Register ModelParams::make_register(int extra_ancilla_dim) const {
  std::vector<int> dims(static_cast<std::size_t>(n_s), local_dim());
  if (extra_ancilla_dim > 0) dims.push_back(extra_ancilla_dim);
  return Register(dims);
}

void ModelParams::validate() const {
  if (n_max < 1) throw std::invalid_argument("ModelParams: n_max must be >= 1");
  if (n_s < 1) throw std::invalid_argument("ModelParams: n_s must be >= 1");
  if (c_bound != 0 && c_bound != 1) throw std::invalid_argument("ModelParams: c_bound in {0,1}");
}

Mat build_lz(int n_max) {
  if (n_max < 1) throw std::invalid_argument("build_lz: n_max must be >= 1");
  const int d = 2 * n_max + 1;
  Mat m = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = n_max - i;
  return m;
}

Mat build_ux(int n_max, int c_bound) {
  if (n_max < 1) throw std::invalid_argument("build_ux: n_max must be >= 1");
  if (c_bound != 0 && c_bound != 1) throw std::invalid_argument("build_ux: c_bound in {0,1}");
  const int d = 2 * n_max + 1;
  Mat m = Mat::Zero(d, d);
  for (int j = 0; j + 1 < d; ++j) {
    m(j, j + 1) += 0.5;
    m(j + 1, j) += 0.5;
  }
  if (c_bound) {
    m(0, d - 1) += 0.5;
    m(d - 1, 0) += 0.5;
  }
  return m;
}

void HamiltonianTerms::apply(const Vec& x, Vec& y) const {
  const Register reg = params.make_register();
  StateVector scratch{reg, x};
  for (const LocalTerm& term : terms) {
    StateVector t = scratch;
    apply_operator_ket(t, term.op, term.sites);
    y += t.amplitudes;
  }
}

HamiltonianTerms build_hamiltonian(const ModelParams& params) {
  params.validate();
  HamiltonianTerms h;
  h.params = params;
  const Mat lz = build_lz(params.n_max);
  const Mat ux = build_ux(params.n_max, params.c_bound);
  const Mat lz2 = lz * lz;
  const double site_coeff = (params.coupling_u + 2.0 * params.coupling_y) / 2.0;

  for (int i = 0; i < params.n_s; ++i) {
    h.terms.push_back({{i}, site_coeff * lz2 - params.coupling_x * ux});
  }
  if (params.n_s > 1) {
    Mat bond(lz.rows() * lz.rows(), lz.cols() * lz.cols());
    for (Eigen::Index r = 0; r < lz.rows(); ++r)
      for (Eigen::Index c = 0; c < lz.cols(); ++c)
        bond.block(r * lz.rows(), c * lz.cols(), lz.rows(), lz.cols()) = lz(r, c) * lz;
    bond *= params.coupling_y;
    for (int i = 0; i + 1 < params.n_s; ++i) h.terms.push_back({{i, i + 1}, bond});
  }

  const Register reg = params.make_register();
  h.dense = Mat::Zero(reg.total_dim(), reg.total_dim());
  for (const LocalTerm& term : h.terms) h.dense += embed_operator(reg, term.op, term.sites);
  return h;
}

SpectralEvolver::SpectralEvolver(const Mat& hamiltonian) {
  if (!is_hermitian(hamiltonian, kConservationTol * hamiltonian.rows()))
    throw std::invalid_argument("SpectralEvolver: Hamiltonian is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> solver(hamiltonian);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("SpectralEvolver: eigensolve failed");
  evals_ = solver.eigenvalues();
  evecs_ = solver.eigenvectors();
}

StateVector SpectralEvolver::evolve(double t, const StateVector& psi) const {
  Vec coeffs = evecs_.adjoint() * psi.amplitudes;
  for (Eigen::Index i = 0; i < coeffs.size(); ++i)
    coeffs(i) *= std::polar(1.0, -evals_(i) * t);
  return StateVector{psi.reg, evecs_ * coeffs};
}

Mat SpectralEvolver::evolution_operator(double t) const {
  Vec phases(evals_.size());
  for (Eigen::Index i = 0; i < evals_.size(); ++i) phases(i) = std::polar(1.0, -evals_(i) * t);
  return evecs_ * phases.asDiagonal() * evecs_.adjoint();
}

bool SpectralEvolver::ground_degenerate(double tol) const {
  return evals_.size() > 1 && (evals_(1) - evals_(0)) < tol;
}

StateVector exact_evolve(const Mat& hamiltonian, double t, const StateVector& psi) {
  return SpectralEvolver(hamiltonian).evolve(t, psi);
}

GroundState exact_ground_state(const Mat& hamiltonian) {
  SpectralEvolver solver(hamiltonian);
  return GroundState{solver.ground_energy(), solver.ground_state(), solver.ground_degenerate()};
}

namespace {

// Lanczos with full reorthogonalization against the stored Krylov basis.
GroundState lanczos_ground_state(const HamiltonianTerms& h, int max_iter = 220,
                                 double tol = 1e-13) {
  const Register reg = h.params.make_register();
  const std::int64_t dim = reg.total_dim();
  SplitRng rng(0x1a2b3c4d5e6f7788ull);
  Vec v(dim);
  for (std::int64_t i = 0; i < dim; ++i) v(i) = Cx(rng.normal(), rng.normal());
  v.normalize();

  std::vector<Vec> basis;
  std::vector<double> alpha, beta;
  GroundState best;
  double prev_energy = 1e300;

  for (int it = 0; it < max_iter; ++it) {
    basis.push_back(v);
    Vec w = Vec::Zero(dim);
    h.apply(v, w);
    const double a = v.dot(w).real();
    alpha.push_back(a);
    // full reorthogonalization, twice for stability
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& u : basis) w -= u.dot(w) * u;
    const double b = w.norm();

    const int k = static_cast<int>(alpha.size());
    RMat tri = RMat::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      tri(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < k) {
        tri(i, i + 1) = beta[static_cast<std::size_t>(i)];
        tri(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
    }
    Eigen::SelfAdjointEigenSolver<RMat> small(tri);
    const double energy = small.eigenvalues()(0);
    if (b < 1e-12 || (it > 8 && std::abs(prev_energy - energy) < tol)) {
      Vec ground = Vec::Zero(dim);
      for (int i = 0; i < k; ++i)
        ground += small.eigenvectors()(i, 0) * basis[static_cast<std::size_t>(i)];
      ground.normalize();
      const bool degen = small.eigenvalues().size() > 1 &&
                         (small.eigenvalues()(1) - energy) < 1e-9;
      return GroundState{energy, ground, degen};
    }
    prev_energy = energy;
    beta.push_back(b);
    v = w / b;
  }
  // Fell off the iteration cap; return the best Ritz pair anyway.
  const int k = static_cast<int>(alpha.size());
  RMat tri = RMat::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    tri(i, i) = alpha[static_cast<std::size_t>(i)];
    if (i + 1 < k) {
      tri(i, i + 1) = beta[static_cast<std::size_t>(i)];
      tri(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
  }
  Eigen::SelfAdjointEigenSolver<RMat> small(tri);
  Vec ground = Vec::Zero(dim);
  for (int i = 0; i < k; ++i)
    ground += small.eigenvectors()(i, 0) * basis[static_cast<std::size_t>(i)];
  ground.normalize();
  return GroundState{small.eigenvalues()(0), ground, false};
}

}  // namespace

GroundState ground_state(const HamiltonianTerms& h, std::int64_t dense_limit) {
  const Register reg = h.params.make_register();
  if (reg.total_dim() <= dense_limit) return exact_ground_state(h.dense);
  return lanczos_ground_state(h);
}

OneSiteState make_onesite_state(double b) {
  OneSiteState s;
  s.b = b;
  s.norm = std::sqrt(2.0 + b * b);
  s.rho1 = std::acos(-1.0 / s.norm);
  // Branch-aware companion angle: cos(rho2) = -b / sqrt(N^2-1),
  // sin(rho2) = -1 / sqrt(N^2-1). For b < 0 this is the principal
  // arcsin(-1/sqrt(N^2-1)) branch.
  const double r = std::sqrt(s.norm * s.norm - 1.0);
  s.rho2 = std::atan2(-1.0 / r, -b / r);
  s.amplitudes << Cx(1.0 / s.norm), Cx(b / s.norm), Cx(1.0 / s.norm);
  return s;
}

OneSiteState onesite_ground_state(const ModelParams& params) {
  params.validate();
  if (params.coupling_x <= 0.0)
    throw std::invalid_argument("onesite_ground_state: requires coupling_x > 0");
  const double a = (params.coupling_u + 2.0 * params.coupling_y) / 2.0;
  const double b = (a + std::sqrt(a * a + 2.0 * params.coupling_x * params.coupling_x)) /
                   params.coupling_x;
  return make_onesite_state(b);
}

double prep_ansatz_b(double g2) {
  return (g2 + 1.0 - std::sqrt((g2 - 1.0) * (g2 - 1.0) + 32.0)) / 4.0;
}

OneSiteState onesite_prep_ansatz(double g2) { return make_onesite_state(prep_ansatz_b(g2)); }

StateVector product_state(const ModelParams& params, const OneSiteState& site_state) {
  if (params.n_max != 1)
    throw std::invalid_argument("product_state: one-site ansatz defined for n_max = 1");
  const Register reg = params.make_register();
  Vec amp = Vec::Ones(1);
  for (int i = 0; i < params.n_s; ++i) {
    Vec next(amp.size() * 3);
    for (Eigen::Index r = 0; r < amp.size(); ++r)
      for (int k = 0; k < 3; ++k) next(r * 3 + k) = amp(r) * site_state.amplitudes(k);
    amp = std::move(next);
  }
  return StateVector{reg, std::move(amp)};
}

SourceSink source_sink(int n_max) {
  if (n_max < 1) throw std::invalid_argument("source_sink: n_max must be >= 1");
  const int d = 2 * n_max + 1;
  SourceSink s;
  s.up = Mat::Zero(d, d);
  for (int k = 1; k < d; ++k) s.up(k - 1, k) = 1.0;
  s.down = s.up.adjoint();

  if (n_max == 1) {
    const Mat x01 = subspace_pauli(Axis::X, 0, 1, 3, PauliMode::Embedded);
    const Mat x12 = subspace_pauli(Axis::X, 1, 2, 3, PauliMode::Embedded);
    const Mat z01 = subspace_pauli(Axis::Z, 0, 1, 3, PauliMode::Embedded);
    // Published operator order (X^{0,1} X^{1,2} acting right-to-left) does not
    // average to U^+; the verified order swaps the two shift factors.
    const Mat printed_a = x01 * x12;
    const Mat printed_b = x01 * z01 * x12;
    s.printed_split_valid = max_abs((printed_a + printed_b) / 2.0 - s.up) <= kConservationTol;
    if (!s.printed_split_valid) {
      s.split_a = x12 * x01;
      s.split_b = x12 * z01 * x01;
    } else {
      s.split_a = printed_a;
      s.split_b = printed_b;
    }
    if (max_abs((s.split_a + s.split_b) / 2.0 - s.up) > kConservationTol)
      throw std::runtime_error("source_sink: no valid unitary split found");
    return s;
  }

  // General d: U^+ = (C + D C)/2 with C the cyclic index-lowering shift and
  // D = diag(1, ..., 1, -1) cancelling the wrap-around term.
  Mat shift = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k) shift((k - 1 + d) % d, k) = 1.0;
  Mat dmat = Mat::Identity(d, d);
  dmat(d - 1, d - 1) = -1.0;
  s.split_a = shift;
  s.split_b = dmat * shift;
  if (max_abs((s.split_a + s.split_b) / 2.0 - s.up) > kConservationTol)
    throw std::runtime_error("source_sink: generalized split failed");
  return s;
}

Cx exact_correlator(const ModelParams& params, double t, InitialState initial, int site_x,
                    int site_y) {
  const HamiltonianTerms h = build_hamiltonian(params);
  const SpectralEvolver evolver(h.dense);
  Vec init;
  if (initial == InitialState::ProductAnsatz) {
    init = product_state(params, onesite_prep_ansatz(params.coupling_u)).amplitudes;
  } else {
    init = ground_state(h).vector;
  }
  return exact_correlator(h, evolver, init, t, site_x, site_y);
}

Cx exact_correlator(const HamiltonianTerms& h, const SpectralEvolver& evolver, const Vec& initial,
                    double t, int site_x, int site_y) {
  const Register reg = h.params.make_register();
  if (site_x < 0 || site_x >= h.params.n_s || site_y < 0 || site_y >= h.params.n_s)
    throw std::invalid_argument("exact_correlator: site out of range");
  const SourceSink s = source_sink(h.params.n_max);

  StateVector ket{reg, initial};
  apply_operator_ket(ket, s.up, {site_y});
  ket = evolver.evolve(t, ket);
  apply_operator_ket(ket, s.down, {site_x});

  const StateVector bra = evolver.evolve(t, StateVector{reg, initial});
  return bra.amplitudes.dot(ket.amplitudes);
}

std::vector<OverlapRow> overlap_scan(const std::vector<int>& sites,
                                     const std::vector<double>& couplings, int n_max) {
  std::vector<OverlapRow> rows;
  for (int n_s : sites) {
    for (double u : couplings) {
      ModelParams params;
      params.n_max = n_max;
      params.n_s = n_s;
      params.coupling_u = u;
      const HamiltonianTerms h = build_hamiltonian(params);
      const GroundState omega = ground_state(h);
      const StateVector gamma = product_state(params, onesite_ground_state(params));
      const Register reg = params.make_register();
      std::vector<int> ones(static_cast<std::size_t>(n_s), 1);
      const StateVector all_ones = make_basis_state(reg, ones);
      OverlapRow row;
      row.n_s = n_s;
      row.coupling_u = u;
      row.overlap_product = std::norm(gamma.amplitudes.dot(omega.vector));
      row.overlap_ones = std::norm(all_ones.amplitudes.dot(omega.vector));
      rows.push_back(row);
    }
  }
  return rows;
}

Cx spectral_function(const std::vector<std::vector<Cx>>& series, const std::vector<double>& t_grid,
                     double energy, double momentum, double t_max) {
  if (series.empty() || t_grid.size() < 2)
    throw std::invalid_argument("spectral_function: empty series");
  for (const auto& row : series)
    if (row.size() != t_grid.size())
      throw std::invalid_argument("spectral_function: ragged series");
  const double dt = t_grid[1] - t_grid[0];
  for (std::size_t k = 1; k < t_grid.size(); ++k)
    if (std::abs(t_grid[k] - t_grid[k - 1] - dt) > 1e-12)
      throw std::invalid_argument("spectral_function: non-uniform t grid");

  Cx out = 0.0;
  for (std::size_t x = 0; x < series.size(); ++x) {
    const Cx space_phase = std::polar(1.0, momentum * static_cast<double>(x));
    Cx integral = 0.0;
    for (std::size_t k = 0; k + 1 < t_grid.size(); ++k) {
      if (t_grid[k + 1] > t_max + 1e-12) break;
      const Cx f0 = series[x][k] * std::polar(1.0, -energy * t_grid[k]);
      const Cx f1 = series[x][k + 1] * std::polar(1.0, -energy * t_grid[k + 1]);
      integral += 0.5 * dt * (f0 + f1);
    }
    out += space_phase * integral;
  }
  return out;
}

QubitEncoding qubit_encoding() {
  Mat z = Mat::Zero(2, 2), x = Mat::Zero(2, 2), y = Mat::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  y(0, 1) = Cx(0.0, -1.0);
  y(1, 0) = Cx(0.0, 1.0);
  const Mat id = Mat::Identity(2, 2);
  auto kron2 = [](const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r)
      for (Eigen::Index c = 0; c < a.cols(); ++c)
        out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    return out;
  };

  QubitEncoding enc;
  enc.lz = (kron2(id, z) + kron2(z, z)) / 2.0;
  enc.lz_sq = (kron2(id, id) + kron2(z, id)) / 2.0;
  enc.ux = (kron2(x, id + x + z) / 2.0 + kron2(y, y) / 2.0) / 2.0;
  enc.embed = Mat::Zero(4, 3);
  enc.embed(0, 0) = 1.0;  // |00> <-> m=+1
  enc.embed(2, 1) = 1.0;  // |10> <-> m=0
  enc.embed(1, 2) = 1.0;  // |01> <-> m=-1
  return enc;
}

}  // namespace qsqed
