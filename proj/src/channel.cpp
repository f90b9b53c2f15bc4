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

#include "qsqed/channel.hpp"

#include <stdexcept>
#include <string>

namespace qsqed {

Channel::Channel(std::vector<Mat> kraus_ops, int arity)
    : kraus_(std::move(kraus_ops)), arity_(arity) {
  if (kraus_.empty()) throw std::invalid_argument("Channel: empty Kraus set");
  if (arity_ != 1 && arity_ != 2) throw std::invalid_argument("Channel: arity must be 1 or 2");
  const Eigen::Index k = kraus_.front().rows();
  Mat sum = Mat::Zero(k, k);
  for (const Mat& op : kraus_) {
    if (op.rows() != k || op.cols() != k)
      throw std::invalid_argument("Channel: inconsistent Kraus shapes");
    sum += op.adjoint() * op;
  }
  if (max_abs(sum - Mat::Identity(k, k)) > kConstructionTol)
    throw std::invalid_argument("Channel: Kraus set is not complete (sum K^dag K != I)");
}

const Mat& Channel::superoperator() const {
  if (!superop_built_) {
    const int k = local_dim();
    superop_ = Mat::Zero(k * k, k * k);
    for (const Mat& op : kraus_) {
      for (int p = 0; p < k; ++p)
        for (int s = 0; s < k; ++s)
          for (int q = 0; q < k; ++q)
            for (int r = 0; r < k; ++r)
              superop_(p * k + s, q * k + r) += op(p, q) * std::conj(op(s, r));
    }
    superop_built_ = true;
  }
  return superop_;
}

void apply_channel_in_place(DensityMatrix& rho, const Channel& channel,
                            const std::vector<int>& sites) {
  if (static_cast<int>(sites.size()) != channel.arity())
    throw std::invalid_argument("apply_channel: site count does not match channel arity");
  int sub_dim = 1;
  for (int s : sites) sub_dim *= rho.reg.dim(s);
  if (sub_dim != channel.local_dim())
    throw std::invalid_argument("apply_channel: local dimension mismatch");

  const int k = sub_dim;
  const Mat& s_op = channel.superoperator();

  // Offsets of the subset digits and of the complement configurations.
  std::vector<std::int64_t> sub_offsets(static_cast<std::size_t>(k), 0);
  {
    std::vector<int> digit(sites.size(), 0);
    for (int j = 0; j < k; ++j) {
      std::int64_t off = 0;
      for (std::size_t i = 0; i < sites.size(); ++i) off += digit[i] * rho.reg.stride(sites[i]);
      sub_offsets[static_cast<std::size_t>(j)] = off;
      for (int i = static_cast<int>(sites.size()) - 1; i >= 0; --i) {
        if (++digit[static_cast<std::size_t>(i)] < rho.reg.dim(sites[static_cast<std::size_t>(i)]))
          break;
        digit[static_cast<std::size_t>(i)] = 0;
      }
    }
  }
  std::vector<std::int64_t> base_offsets;
  {
    std::vector<int> rest;
    for (int s = 0; s < rho.reg.num_sites(); ++s) {
      bool in = false;
      for (int t : sites) in = in || (t == s);
      if (!in) rest.push_back(s);
    }
    std::int64_t rest_dim = 1;
    for (int s : rest) rest_dim *= rho.reg.dim(s);
    base_offsets.assign(static_cast<std::size_t>(rest_dim), 0);
    std::vector<int> digit(rest.size(), 0);
    for (std::int64_t j = 0; j < rest_dim; ++j) {
      std::int64_t off = 0;
      for (std::size_t i = 0; i < rest.size(); ++i) off += digit[i] * rho.reg.stride(rest[i]);
      base_offsets[static_cast<std::size_t>(j)] = off;
      for (int i = static_cast<int>(rest.size()) - 1; i >= 0; --i) {
        if (++digit[static_cast<std::size_t>(i)] < rho.reg.dim(rest[static_cast<std::size_t>(i)]))
          break;
        digit[static_cast<std::size_t>(i)] = 0;
      }
    }
  }

  Vec block(k * k), mapped(k * k);
  for (std::int64_t base_r : base_offsets) {
    for (std::int64_t base_c : base_offsets) {
      for (int q = 0; q < k; ++q)
        for (int r = 0; r < k; ++r)
          block(q * k + r) = rho.matrix(base_r + sub_offsets[static_cast<std::size_t>(q)],
                                        base_c + sub_offsets[static_cast<std::size_t>(r)]);
      mapped.noalias() = s_op * block;
      for (int p = 0; p < k; ++p)
        for (int s = 0; s < k; ++s)
          rho.matrix(base_r + sub_offsets[static_cast<std::size_t>(p)],
                     base_c + sub_offsets[static_cast<std::size_t>(s)]) = mapped(p * k + s);
    }
  }
}

DensityMatrix apply_channel(const DensityMatrix& rho, const Channel& channel,
                            const std::vector<int>& sites) {
  DensityMatrix out = rho;
  apply_channel_in_place(out, channel, sites);
  return out;
}

void apply_channel_sampled(StateVector& psi, const Channel& channel, const std::vector<int>& sites,
                           SplitRng& rng) {
  const int k = channel.local_dim();
  std::vector<double> probs;
  probs.reserve(channel.kraus().size());
  for (const Mat& op : channel.kraus()) {
    const Mat gram = op.adjoint() * op;
    const double p = gram.trace().real() / k;
    if (max_abs(gram - p * Mat::Identity(k, k)) > kConstructionTol)
      throw std::invalid_argument(
          "apply_channel_sampled: Kraus operator is not proportional to a unitary");
    probs.push_back(p);
  }
  const std::size_t pick = rng.discrete(probs);
  const Mat branch = channel.kraus()[pick] / std::sqrt(probs[pick]);
  apply_unitary_in_place(psi, branch, sites);
}

}  // namespace qsqed
