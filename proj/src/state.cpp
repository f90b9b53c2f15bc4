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

#include "qsqed/state.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace qsqed {
namespace {

// Index bookkeeping for applying an operator on a site subset: flat offsets of
// every subset configuration, plus every base offset of the complement sites.
struct SubsetIndexer {
  std::vector<std::int64_t> sub_offsets;
  std::vector<std::int64_t> base_offsets;
  int sub_dim = 1;

  SubsetIndexer(const Register& reg, const std::vector<int>& sites) {
    const int n = reg.num_sites();
    std::vector<bool> in_subset(static_cast<std::size_t>(n), false);
    for (int s : sites) {
      if (s < 0 || s >= n)
        throw std::invalid_argument("site index " + std::to_string(s) + " out of range");
      if (in_subset[static_cast<std::size_t>(s)])
        throw std::invalid_argument("duplicate site index " + std::to_string(s));
      in_subset[static_cast<std::size_t>(s)] = true;
    }
    for (int s : sites) sub_dim *= reg.dim(s);

    sub_offsets.assign(static_cast<std::size_t>(sub_dim), 0);
    {
      std::vector<int> digit(sites.size(), 0);
      for (int j = 0; j < sub_dim; ++j) {
        std::int64_t off = 0;
        for (std::size_t i = 0; i < sites.size(); ++i) off += digit[i] * reg.stride(sites[i]);
        sub_offsets[static_cast<std::size_t>(j)] = off;
        // odometer over subset digits, last site fastest
        for (int i = static_cast<int>(sites.size()) - 1; i >= 0; --i) {
          if (++digit[static_cast<std::size_t>(i)] < reg.dim(sites[static_cast<std::size_t>(i)]))
            break;
          digit[static_cast<std::size_t>(i)] = 0;
        }
      }
    }

    std::vector<int> rest;
    for (int s = 0; s < n; ++s)
      if (!in_subset[static_cast<std::size_t>(s)]) rest.push_back(s);
    std::int64_t rest_dim = 1;
    for (int s : rest) rest_dim *= reg.dim(s);
    base_offsets.assign(static_cast<std::size_t>(rest_dim), 0);
    std::vector<int> digit(rest.size(), 0);
    for (std::int64_t j = 0; j < rest_dim; ++j) {
      std::int64_t off = 0;
      for (std::size_t i = 0; i < rest.size(); ++i) off += digit[i] * reg.stride(rest[i]);
      base_offsets[static_cast<std::size_t>(j)] = off;
      for (int i = static_cast<int>(rest.size()) - 1; i >= 0; --i) {
        if (++digit[static_cast<std::size_t>(i)] < reg.dim(rest[static_cast<std::size_t>(i)]))
          break;
        digit[static_cast<std::size_t>(i)] = 0;
      }
    }
  }
};

void check_op_shape(const Mat& op, const SubsetIndexer& ix) {
  if (op.rows() != op.cols() || op.rows() != ix.sub_dim)
    throw std::invalid_argument("operator dimension " + std::to_string(op.rows()) +
                                " does not match site subset dimension " +
                                std::to_string(ix.sub_dim));
}

void apply_ket_side(Vec& amp, const Mat& op, const SubsetIndexer& ix) {
  const int k = ix.sub_dim;
  Vec scratch(k), out(k);
  for (std::int64_t base : ix.base_offsets) {
    for (int j = 0; j < k; ++j) scratch(j) = amp(base + ix.sub_offsets[static_cast<std::size_t>(j)]);
    out.noalias() = op * scratch;
    for (int j = 0; j < k; ++j) amp(base + ix.sub_offsets[static_cast<std::size_t>(j)]) = out(j);
  }
}

}  // namespace

StateVector make_basis_state(const Register& reg, const std::vector<int>& indices) {
  StateVector psi{reg, Vec::Zero(reg.total_dim())};
  psi.amplitudes(reg.flat_index(indices)) = 1.0;
  return psi;
}

DensityMatrix make_density_matrix(const StateVector& psi) {
  return DensityMatrix{psi.reg, psi.amplitudes * psi.amplitudes.adjoint()};
}

void apply_operator_ket(StateVector& psi, const Mat& op, const std::vector<int>& sites) {
  SubsetIndexer ix(psi.reg, sites);
  check_op_shape(op, ix);
  apply_ket_side(psi.amplitudes, op, ix);
}

void apply_unitary_in_place(StateVector& psi, const Mat& u, const std::vector<int>& sites) {
  SubsetIndexer ix(psi.reg, sites);
  check_op_shape(u, ix);
  if (!is_unitary(u)) throw std::invalid_argument("apply_unitary: matrix is not unitary");
  apply_ket_side(psi.amplitudes, u, ix);
}

void apply_unitary_in_place(DensityMatrix& rho, const Mat& u, const std::vector<int>& sites) {
  SubsetIndexer ix(rho.reg, sites);
  check_op_shape(u, ix);
  if (!is_unitary(u)) throw std::invalid_argument("apply_unitary: matrix is not unitary");
  const int k = ix.sub_dim;
  const std::int64_t dim = rho.reg.total_dim();
  Vec scratch(k), out(k);
  // rho -> (U x I) rho
  for (std::int64_t base : ix.base_offsets) {
    for (std::int64_t c = 0; c < dim; ++c) {
      for (int j = 0; j < k; ++j)
        scratch(j) = rho.matrix(base + ix.sub_offsets[static_cast<std::size_t>(j)], c);
      out.noalias() = u * scratch;
      for (int j = 0; j < k; ++j)
        rho.matrix(base + ix.sub_offsets[static_cast<std::size_t>(j)], c) = out(j);
    }
  }
  // rho -> rho (U x I)^dag
  const Mat u_conj = u.conjugate();
  for (std::int64_t base : ix.base_offsets) {
    for (std::int64_t r = 0; r < dim; ++r) {
      for (int j = 0; j < k; ++j)
        scratch(j) = rho.matrix(r, base + ix.sub_offsets[static_cast<std::size_t>(j)]);
      out.noalias() = u_conj * scratch;
      for (int j = 0; j < k; ++j)
        rho.matrix(r, base + ix.sub_offsets[static_cast<std::size_t>(j)]) = out(j);
    }
  }
}

StateVector apply_unitary(const StateVector& psi, const Mat& u, const std::vector<int>& sites) {
  StateVector out = psi;
  apply_unitary_in_place(out, u, sites);
  return out;
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const Mat& u, const std::vector<int>& sites) {
  DensityMatrix out = rho;
  apply_unitary_in_place(out, u, sites);
  return out;
}

double expectation(const StateVector& psi, const Mat& observable, const std::vector<int>& sites) {
  if (!is_hermitian(observable))
    throw std::invalid_argument("expectation: observable is not Hermitian");
  StateVector scratch = psi;
  apply_operator_ket(scratch, observable, sites);
  const Cx value = psi.amplitudes.dot(scratch.amplitudes);
  if (std::abs(value.imag()) >= kConstructionTol)
    throw std::runtime_error("expectation: imaginary residue above tolerance");
  return value.real();
}

double expectation(const DensityMatrix& rho, const Mat& observable, const std::vector<int>& sites) {
  if (!is_hermitian(observable))
    throw std::invalid_argument("expectation: observable is not Hermitian");
  SubsetIndexer ix(rho.reg, sites);
  check_op_shape(observable, ix);
  // tr(O_embedded rho): only diagonal blocks over the subset contribute.
  Cx value = 0.0;
  const int k = ix.sub_dim;
  for (std::int64_t base : ix.base_offsets) {
    for (int j = 0; j < k; ++j) {
      for (int l = 0; l < k; ++l) {
        value += observable(j, l) * rho.matrix(base + ix.sub_offsets[static_cast<std::size_t>(l)],
                                               base + ix.sub_offsets[static_cast<std::size_t>(j)]);
      }
    }
  }
  if (std::abs(value.imag()) >= kConstructionTol)
    throw std::runtime_error("expectation: imaginary residue above tolerance");
  return value.real();
}

Cx inner_product(const StateVector& a, const StateVector& b) {
  if (a.reg != b.reg) throw std::invalid_argument("inner_product: register mismatch");
  return a.amplitudes.dot(b.amplitudes);
}

RVec basis_probabilities(const StateVector& psi) { return psi.amplitudes.cwiseAbs2(); }

RVec basis_probabilities(const DensityMatrix& rho) { return rho.matrix.diagonal().real(); }

namespace {

std::vector<MeasurementRecord> sample_from_probs(const Register& reg, const RVec& probs,
                                                 std::int64_t shots, std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sample_measurements: shots must be >= 1");
  RVec cdf(probs.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    acc += std::max(0.0, probs(i));
    cdf(i) = acc;
  }
  SplitRng rng(seed);
  std::map<std::int64_t, std::int64_t> counts;
  for (std::int64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * acc;
    const double* begin = cdf.data();
    const double* it = std::upper_bound(begin, begin + cdf.size(), u);
    std::int64_t idx = it - begin;
    if (idx >= cdf.size()) idx = cdf.size() - 1;
    ++counts[idx];
  }
  std::vector<MeasurementRecord> out;
  out.reserve(counts.size());
  for (const auto& [flat, count] : counts)
    out.push_back(MeasurementRecord{reg.unflatten(flat), count, seed});
  return out;
}

}  // namespace

std::vector<MeasurementRecord> sample_measurements(const StateVector& psi, std::int64_t shots,
                                                   std::uint64_t seed) {
  return sample_from_probs(psi.reg, basis_probabilities(psi), shots, seed);
}

std::vector<MeasurementRecord> sample_measurements(const DensityMatrix& rho, std::int64_t shots,
                                                   std::uint64_t seed) {
  return sample_from_probs(rho.reg, basis_probabilities(rho), shots, seed);
}

Mat embed_operator(const Register& reg, const Mat& op, const std::vector<int>& sites) {
  SubsetIndexer ix(reg, sites);
  check_op_shape(op, ix);
  Mat full = Mat::Zero(reg.total_dim(), reg.total_dim());
  for (std::int64_t base : ix.base_offsets) {
    for (int j = 0; j < ix.sub_dim; ++j)
      for (int l = 0; l < ix.sub_dim; ++l)
        full(base + ix.sub_offsets[static_cast<std::size_t>(j)],
             base + ix.sub_offsets[static_cast<std::size_t>(l)]) = op(j, l);
  }
  return full;
}

}  // namespace qsqed
