// Copyright 2026 The qrc authors
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

#ifndef QRC_RNG_HPP
#define QRC_RNG_HPP

#include <cstdint>

namespace qrc {

// splitmix64 finalizer. Bijective over u64, used both as the stream update
// and as the key mixer for counter-based substream derivation.
inline uint64_t mix64(uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Deterministic seeded random stream (splitmix64).
//
// Substreams are derived counter-style: derive(i) keys a fresh stream from
// (state, i) without consuming from the parent, so ensembles indexed by i are
// order-independent and safe to generate in parallel.
class RandomStream {
 public:
  explicit RandomStream(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // k low-order random bits, k in [0, 64].
  uint64_t next_bits(int k) {
    if (k <= 0) return 0;
    uint64_t v = next_u64();
    return k >= 64 ? v : (v >> (64 - k));
  }

  // Uniform double in [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform integer in [0, n). Rejection sampling keeps it unbiased.
  uint64_t below(uint64_t n) {
    if (n == 0) return 0;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
  }

  RandomStream derive(uint64_t index) const {
    return RandomStream(mix64(state_ ^ mix64(index ^ 0xA5A5A5A5A5A5A5A5ULL)));
  }

  uint64_t state() const { return state_; }

 private:
  uint64_t state_;
};

}  // namespace qrc

#endif
