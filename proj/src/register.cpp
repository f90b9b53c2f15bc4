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

#include "qsqed/register.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace qsqed {

Register::Register(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw std::invalid_argument("Register: needs at least one site");
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (dims_[i] < 2)
      throw std::invalid_argument("Register: site " + std::to_string(i) +
                                  " has local dimension < 2");
  }
  strides_.assign(dims_.size(), 1);
  for (int i = static_cast<int>(dims_.size()) - 2; i >= 0; --i) {
    strides_[static_cast<std::size_t>(i)] =
        strides_[static_cast<std::size_t>(i) + 1] * dims_[static_cast<std::size_t>(i) + 1];
  }
  total_ = strides_[0] * dims_[0];
  if (total_ > dimension_cap())
    throw std::invalid_argument("Register: total dimension " + std::to_string(total_) +
                                " exceeds cap " + std::to_string(dimension_cap()) +
                                " (override with QSQED_DIM_CAP)");
}

std::int64_t Register::flat_index(const std::vector<int>& indices) const {
  if (indices.size() != dims_.size())
    throw std::invalid_argument("Register::flat_index: index count mismatch");
  std::int64_t flat = 0;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= dims_[i])
      throw std::invalid_argument("Register::flat_index: index out of range at site " +
                                  std::to_string(i));
    flat += strides_[i] * indices[i];
  }
  return flat;
}

std::vector<int> Register::unflatten(std::int64_t flat) const {
  std::vector<int> out(dims_.size());
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    out[i] = static_cast<int>(flat / strides_[i]);
    flat %= strides_[i];
  }
  return out;
}

std::int64_t Register::dimension_cap() {
  if (const char* env = std::getenv("QSQED_DIM_CAP")) {
    const long long v = std::atoll(env);
    if (v > 1) return v;
  }
  return 1 << 16;
}

}  // namespace qsqed
