/* Copyright 2026 The Align Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef ALIGN_RNG_HPP_
#define ALIGN_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace align {

// Deterministic RNG with named substream derivation. All randomness in a run
// flows from one root seed; every consumer derives its own stream from a path
// like "train/dropout/<step>/<trial>", so disabling one consumer never shifts
// the draws seen by another. Distributions are implemented here rather than
// with <random> distribution classes, whose output is not pinned by the
// standard across library implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  static uint64_t hash_combine(uint64_t h, uint64_t v) {
    // splitmix64 finalizer over a running mix
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    uint64_t z = h;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static uint64_t hash_str(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  // Derive an independent stream from (root seed, path, indices).
  static Rng substream(uint64_t root, std::string_view path, uint64_t a = 0, uint64_t b = 0, uint64_t c = 0) {
    uint64_t h = hash_combine(root, hash_str(path));
    h = hash_combine(h, a);
    h = hash_combine(h, b);
    h = hash_combine(h, c);
    return Rng(h);
  }

  uint64_t next_u64() { return eng_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n), rejection sampled to avoid modulo bias.
  uint64_t uniform_int(uint64_t n) {
    if (n == 0) return 0;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % n;
  }

  int uniform_int_range(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(uniform_int(static_cast<uint64_t>(hi - lo + 1)));
  }

  // Box-Muller; one variate per call so stream position is call-count exact.
  double normal() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = uniform_int(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace align

#endif  // ALIGN_RNG_HPP_
