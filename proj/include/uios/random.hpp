/*
 * Copyright 2026 The uios Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef UIOS_RANDOM_HPP_
#define UIOS_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace uios {

// Seeded random source used everywhere in the library.
//
// Engine: std::mt19937_64. Distributions are hand-rolled, not <random>:
//   uniform()  = (next >> 11) * 2^-53, in [0, 1)
//   normal()   = Box-Muller on two uniforms, second value cached
//   index(n)   = rejection sampling on the top bits, unbiased
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  std::size_t index(std::size_t n);

  // Fisher-Yates, back to front.
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[index(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// SplitMix64 finalizer over (base, stream); used to derive independent
// per-epoch / per-pass seeds from a single user seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace uios

#endif  // UIOS_RANDOM_HPP_
