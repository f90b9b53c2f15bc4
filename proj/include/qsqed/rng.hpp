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
#include <random>
#include <span>
#include <vector>

namespace qsqed {

// Seedable, splittable random stream. Child streams are derived
// deterministically from the root seed plus integer tags, so per-(time point,
// shot batch) streams are reproducible regardless of evaluation order.
//
// All sampling goes through our own uniform/discrete routines rather than
// std:: distributions, which are implementation-defined; identical seeds give
// identical samples on every platform.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed)
      : root_(seed), engine_(mix_(seed ^ 0x9e3779b97f4a7c15ull)) {}

  // Deterministic child stream: tag words are mixed into the root seed.
  SplitRng split(std::span<const std::uint64_t> tags) const {
    std::uint64_t s = root_;
    for (std::uint64_t t : tags) s = mix_(s + 0x9e3779b97f4a7c15ull * (t + 1));
    SplitRng out(0);
    out.root_ = s;
    out.engine_.seed(mix_(s));
    return out;
  }
  SplitRng split(std::uint64_t a) const {
    const std::uint64_t t[1] = {a};
    return split(std::span<const std::uint64_t>(t, 1));
  }
  SplitRng split(std::uint64_t a, std::uint64_t b) const {
    const std::uint64_t t[2] = {a, b};
    return split(std::span<const std::uint64_t>(t, 2));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Index sampled from unnormalized non-negative weights by inverse CDF.
  std::size_t discrete(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = uniform() * total;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      u -= weights[i];
      if (u < 0.0) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
  }

  double normal() {
    // Box-Muller; uses two uniforms per call, no state carried over.
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  static std::uint64_t mix_(std::uint64_t z) {
    // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t root_ = 0;
  std::mt19937_64 engine_;
};

}  // namespace qsqed
