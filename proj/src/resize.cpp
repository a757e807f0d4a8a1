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

#include "cnotsynth/resize.hpp"

#include <bit>
#include <stdexcept>

namespace cnotsynth {

namespace {

BitMatrix extract_trailing_block(const BitMatrix& m, int k) {
  const int size = m.size() - k;
  BitMatrix out(size);
  for (int i = 0; i < size; ++i) out.set_row(i, m.row(k + i) >> k);
  return out;
}

}  // namespace

StripeReduction gaussian_stripe(const BitMatrix& m, int target_size,
                                const PmhConfig& cfg) {
  const int n = m.size();
  if (target_size < 1 || target_size >= n)
    throw std::invalid_argument(
        "gaussian_stripe requires 1 <= target size < n");
  if (!is_invertible(m))
    throw std::invalid_argument("gaussian_stripe: matrix is not invertible");
  const int k = n - target_size;

  BitMatrix work = m;
  std::vector<CnotGate> ops;

  // Pass 1: below-diagonal elimination restricted to columns [0, k).
  eliminate_columns_inplace(work, k, cfg.stripe_width, ops);

  // Pass 2a: clear above-diagonal entries in columns [0, k). Columns are
  // processed right to left so the control row is already e_j within the
  // leading block when it is used.
  for (int j = k - 1; j > 0; --j) {
    for (int i = 0; i < j; ++i) {
      if (work.get(i, j)) {
        apply_cnot_inplace(work, j, i);
        ops.push_back({j, i});
      }
    }
  }

  // Pass 2b: clear the residual tails of the first k rows through the
  // bottom-right block. Row i's tail b is removed by XORing in the bottom
  // rows selected by x = b * C^-1, which contributes x * C = b.
  BitMatrix block = extract_trailing_block(work, k);
  BitMatrix block_inv = inverse(block);
  for (int i = 0; i < k; ++i) {
    uint64_t tail = work.row(i) >> k;
    if (tail == 0) continue;
    uint64_t select = 0;
    uint64_t bits = tail;
    while (bits) {
      int j = std::countr_zero(bits);
      bits &= bits - 1;
      select ^= block_inv.row(j);
    }
    while (select) {
      int j = std::countr_zero(select);
      select &= select - 1;
      apply_cnot_inplace(work, k + j, i);
      ops.push_back({k + j, i});
    }
  }

  StripeReduction out;
  out.k = k;
  out.prefix_circuit = Circuit{n, std::move(ops)};
  out.reduced = extract_trailing_block(work, k);

  // Exact structural postcondition; an invertible input can never fail it.
  if (!(work == embed(out.reduced, n)) ||
      !(replay(m, out.prefix_circuit) == work))
    throw std::logic_error("gaussian_stripe: reduction postcondition failed");
  return out;
}

BitMatrix embed(const BitMatrix& m, int target_size) {
  const int n = m.size();
  if (n >= target_size)
    throw std::invalid_argument("embed requires target size > n");
  const int k = target_size - n;
  BitMatrix out = identity(target_size);
  for (int i = 0; i < n; ++i) out.set_row(k + i, m.row(i) << k);
  return out;
}

Circuit lift_circuit(const Circuit& c, int offset, int n) {
  if (offset < 0) throw std::invalid_argument("lift_circuit: negative offset");
  Circuit out;
  out.n = n;
  out.gates.reserve(c.gates.size());
  for (const CnotGate& g : c.gates) {
    int control = g.control + offset;
    int target = g.target + offset;
    if (control >= n || target >= n)
      throw std::invalid_argument("lift_circuit: gate index overflows n");
    out.gates.push_back({control, target});
  }
  return out;
}

bool gates_within_block(const Circuit& c, int offset) {
  for (const CnotGate& g : c.gates)
    if (g.control < offset || g.target < offset) return false;
  return true;
}

}  // namespace cnotsynth
