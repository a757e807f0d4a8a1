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
#include <vector>

#include "cnotsynth/bitmatrix.hpp"
#include "cnotsynth/circuit.hpp"

namespace cnotsynth {

/// Minimal gate counts for every element of GL(n,2), n <= 4, indexed by the
/// packed row-major matrix key. Entries not reachable from the identity
/// (non-invertible keys) hold kUnreached.
struct DistanceTable {
  static constexpr uint8_t kUnreached = 0xFF;

  int n = 0;
  std::vector<uint8_t> dist;  // size 2^(n*n)
  size_t group_size = 0;      // |GL(n,2)|
  int diameter = 0;

  int lookup_key(uint64_t key) const;
  int lookup(const BitMatrix& m) const;
};

/// Breadth-first search from the identity over the n(n-1) CNOT generators.
/// Throws for n > 4 (use optimal_solve for n == 5).
DistanceTable build_distance_table(int n);

struct OptimalSolution {
  int count = 0;
  Circuit witness;  // verify_solves(m, witness) holds, length == count
};

/// Provably minimal CNOT count via bidirectional breadth-first search
/// meeting in the middle; n <= 5. Refuses larger instances.
OptimalSolution optimal_solve(const BitMatrix& m);

int optimal_count(const BitMatrix& m);

}  // namespace cnotsynth
