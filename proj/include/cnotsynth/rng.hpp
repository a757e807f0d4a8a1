// Copyright 2026 The cnotsynth authors
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

#pragma once

#include <cstdint>

namespace cnotsynth {

/// Deterministic 64-bit generator (splitmix64). Same seed produces the same
/// stream on every platform, which keeps generated suites and training runs
/// reproducible byte-for-byte.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, bound) via rejection sampling; exact, no modulo
  /// bias. bound must be nonzero.
  uint64_t below(uint64_t bound) {
    uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  bool next_bit() { return next() & 1; }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Derives an independent stream seed from (seed, stream). Used to split
  /// one master seed into per-matrix / per-run streams.
  static uint64_t derive(uint64_t seed, uint64_t stream) {
    Rng a(seed);
    Rng b(stream + 0x9e3779b97f4a7c15ULL);
    uint64_t x = a.next();
    return x ^ b.next();
  }

 private:
  uint64_t state_;
};

}  // namespace cnotsynth
