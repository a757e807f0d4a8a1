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

#include "cnotsynth/bitmatrix.hpp"
#include "cnotsynth/circuit.hpp"
#include "cnotsynth/pmh.hpp"

namespace cnotsynth {

/// Result of reducing an n x n instance to an m x m block:
/// replay(source, prefix_circuit) == block_diag(identity(k), reduced) with
/// k = n - m, and reduced invertible. Solving `reduced`, lifting the
/// solution by k and appending it to prefix_circuit solves the source.
struct StripeReduction {
  Circuit prefix_circuit;
  BitMatrix reduced;
  int k = 0;
};

/// Reduces the first k = n - target_size rows and columns to an identity
/// block using only row operations:
///   1. stripe elimination below the diagonal in columns [0, k)
///   2. back-substitution clearing above the diagonal in those columns
///   3. clearing the residual tails of the first k rows through the
///      invertible bottom-right block
/// The structural postcondition is checked exactly on every call.
StripeReduction gaussian_stripe(const BitMatrix& m, int target_size,
                                const PmhConfig& cfg = {});

/// block_diag(identity(m - n), m): pads the instance into the lower-right
/// corner of an m x m matrix. Requires m > size of the input.
BitMatrix embed(const BitMatrix& m, int target_size);

/// Shifts every gate by `offset` onto n wires. Throws if an index would
/// overflow.
Circuit lift_circuit(const Circuit& c, int offset, int n);

/// True iff every gate acts entirely inside rows/cols >= offset.
bool gates_within_block(const Circuit& c, int offset);

}  // namespace cnotsynth
