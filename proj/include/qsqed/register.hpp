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

namespace qsqed {

// Mixed-radix register of qudits with per-site local dimensions.
// Site 0 is the most significant digit of the flat index.
class Register {
 public:
  explicit Register(std::vector<int> dims);

  int num_sites() const { return static_cast<int>(dims_.size()); }
  int dim(int site) const { return dims_.at(static_cast<std::size_t>(site)); }
  const std::vector<int>& dims() const { return dims_; }
  std::int64_t total_dim() const { return total_; }
  std::int64_t stride(int site) const { return strides_.at(static_cast<std::size_t>(site)); }

  std::int64_t flat_index(const std::vector<int>& indices) const;
  std::vector<int> unflatten(std::int64_t flat) const;

  bool operator==(const Register& other) const { return dims_ == other.dims_; }
  bool operator!=(const Register& other) const { return !(*this == other); }

  // Desk-scale guard on the total dimension. Overridable through the
  // QSQED_DIM_CAP environment variable.
  static std::int64_t dimension_cap();

 private:
  std::vector<int> dims_;
  std::vector<std::int64_t> strides_;
  std::int64_t total_ = 1;
};

}  // namespace qsqed
