// Copyright (c) 2026 The fairsv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAIRSV_RANDOM_HPP_
#define FAIRSV_RANDOM_HPP_

#include <cstdint>
#include <string_view>
#include <vector>

namespace fairsv {

// Every sampled artifact (rosters, splits, trial pairs, synthetic scores)
// must reproduce byte-identically from a 64-bit seed. The standard
// <random> distributions are not pinned across library implementations,
// so the toolkit carries its own fixed arithmetic: splitmix64 for seed
// mixing and stream derivation, xoshiro256** as the engine, rejection
// sampling for bounded integers.

// One splitmix64 step; advances `state` and returns the next output.
std::uint64_t splitmix64_next(std::uint64_t& state);

// Child seed for an integer-identified stream (e.g. a fold id).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

// Child seed for a string-identified stream (e.g. "trials|spk0042").
// The tag is folded in with FNV-1a before mixing.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag);

class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform integer in [0, bound); bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound);

  // Uniform double in [0, 1) with 53 random bits.
  double uniform_real();

  // Standard normal deviate (Marsaglia polar method, one value cached).
  double gaussian();

  // Fisher-Yates permutation of indices [0, n); the first k entries are a
  // uniform sample without replacement, in selection order.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::uint64_t state_[4];
  double spare_gaussian_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fairsv

#endif  // FAIRSV_RANDOM_HPP_
