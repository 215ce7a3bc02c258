// Copyright 2026 The icl-enroll Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ICLENROLL_RNG_HPP_
#define ICLENROLL_RNG_HPP_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace iclenroll {

// FNV-1a, used for stateless per-item seeds and sampling priorities.
inline uint64_t fnv1a64(std::string_view bytes, uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline uint64_t fnv1a64(uint64_t value, uint64_t h = 0xcbf29ce484222325ull) {
  for (int i = 0; i < 8; ++i) {
    h ^= (value >> (8 * i)) & 0xff;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Folds a seed with a sequence of string/integer parts into a derived seed.
// Parts are separated so ("ab","c") and ("a","bc") hash differently.
inline uint64_t derive_seed(uint64_t seed) { return fnv1a64(seed); }

template <typename First, typename... Rest>
uint64_t derive_seed(uint64_t seed, First&& first, Rest&&... rest) {
  uint64_t h = fnv1a64(seed);
  if constexpr (std::is_convertible_v<First, std::string_view>) {
    h = fnv1a64(std::string_view(first), h);
  } else {
    h = fnv1a64(static_cast<uint64_t>(first), h);
  }
  h = fnv1a64(uint64_t{0x1f}, h);  // separator
  if constexpr (sizeof...(rest) == 0) {
    return h;
  } else {
    return derive_seed(h, rest...);
  }
}

// Maps a hash to [0,1) with 53 bits of precision.
inline double hash_to_unit(uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Deterministic RNG built on mt19937_64 with hand-rolled distributions so
// output streams are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform integer in [0, n), unbiased via rejection. n must be > 0.
  uint64_t below(uint64_t n) {
    const uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % n);
    uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % n;
  }

  // Uniform double in [0,1).
  double unit() { return hash_to_unit(gen_()); }

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[below(i)]);
    }
  }

  // First k entries of a seeded permutation of [0, n): a uniform k-subset in
  // selection order. k is clipped to n.
  std::vector<size_t> sample_indices(size_t n, size_t k) {
    std::vector<size_t> indices(n);
    for (size_t i = 0; i < n; ++i) indices[i] = i;
    shuffle(indices);
    if (k < n) indices.resize(k);
    return indices;
  }

  // Index drawn from unnormalized non-negative weights (positive sum).
  size_t weighted(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double r = unit() * total;
    for (size_t i = 0; i < weights.size(); ++i) {
      r -= weights[i];
      if (r < 0.0) return i;
    }
    return weights.size() - 1;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace iclenroll

#endif  // ICLENROLL_RNG_HPP_
