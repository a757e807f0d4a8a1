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

#include <vector>

#include "cnotsynth/bitmatrix.hpp"
#include "cnotsynth/circuit.hpp"

namespace cnotsynth {

struct PmhConfig {
  /// Stripe width k in [1, n]. 2 is a practical default; the asymptotically
  /// optimal choice is around log2(n) and is available via
  /// sweep_stripe_width.
  int stripe_width = 2;
};

/// Stripe-based elimination of everything below the diagonal in columns
/// [0, col_limit), recording every row operation. Per stripe: rows at or
/// below the stripe start that share the same nonzero sub-row pattern are
/// merged into the lowest-index representative, then Gaussian elimination
/// clears the stripe's below-diagonal entries. Missing pivots are repaired
/// by XORing a lower row in. Throws std::logic_error if no pivot exists
/// (impossible for invertible input).
///
/// If check_preserved_upper is set, every recorded operation is asserted
/// (debug builds) to keep the strictly-above-diagonal region zero; enable it
/// only when the input is lower triangular.
void eliminate_columns_inplace(BitMatrix& m, int col_limit, int width,
                               std::vector<CnotGate>& ops,
                               bool check_preserved_upper = false);

/// Full lower pass: returns the upper-triangular (unit diagonal) form of m
/// and appends the recorded row operations to ops.
BitMatrix eliminate_lower(const BitMatrix& m, const PmhConfig& cfg,
                          std::vector<CnotGate>& ops);

/// Two-pass stripe synthesis: lower pass on m, then the same pass on the
/// transpose of the result. Transposed-frame operations map to gates with
/// control and target swapped, emitted in reverse order; the combined
/// circuit replays m to the identity.
SynthesisResult synthesize_pmh(const BitMatrix& m, const PmhConfig& cfg = {});

/// Minimum-gate-count result over stripe widths {1, 2, ceil(log2 n)}.
SynthesisResult sweep_stripe_width(const BitMatrix& m);

}  // namespace cnotsynth
