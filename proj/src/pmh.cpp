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

#include "cnotsynth/pmh.hpp"

#include <cassert>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace cnotsynth {

namespace {

#ifndef NDEBUG
bool upper_is_zero(const BitMatrix& m) {
  for (int i = 0; i < m.size(); ++i) {
    uint64_t above = m.row(i) >> (i + 1);
    if (i + 1 < 64 && (above << (i + 1)) != 0) return false;
  }
  return true;
}
#endif

void record(BitMatrix& m, int control, int target, std::vector<CnotGate>& ops,
            bool check_preserved_upper) {
  apply_cnot_inplace(m, control, target);
  ops.push_back({control, target});
#ifdef NDEBUG
  (void)check_preserved_upper;
#else
  assert(!check_preserved_upper || upper_is_zero(m));
#endif
}

}  // namespace

void eliminate_columns_inplace(BitMatrix& m, int col_limit, int width,
                               std::vector<CnotGate>& ops,
                               bool check_preserved_upper) {
  const int n = m.size();
  if (col_limit < 0 || col_limit > n)
    throw std::invalid_argument("eliminate_columns: column limit out of range");
  if (width < 1) throw std::invalid_argument("stripe width must be >= 1");
  if (width > n) width = n;

  for (int s = 0; s < col_limit; s += width) {
    const int e = std::min(s + width, col_limit);
    const uint64_t stripe_mask = ((e - s) == 64 ? ~uint64_t{0}
                                                : (uint64_t{1} << (e - s)) - 1);

    // Phase 1: merge rows with identical nonzero patterns in this stripe's
    // columns. The lowest-index row is the representative.
    std::unordered_map<uint64_t, int> representative;
    for (int r = s; r < n; ++r) {
      uint64_t pattern = (m.row(r) >> s) & stripe_mask;
      if (pattern == 0) continue;
      auto [it, inserted] = representative.try_emplace(pattern, r);
      if (!inserted)
        record(m, it->second, r, ops, check_preserved_upper);
    }

    // Phase 2: Gaussian elimination below the diagonal within the stripe.
    for (int j = s; j < e; ++j) {
      if (!m.get(j, j)) {
        int pivot = -1;
        for (int r = j + 1; r < n; ++r) {
          if (m.get(r, j)) {
            pivot = r;
            break;
          }
        }
        if (pivot < 0)
          throw std::logic_error("eliminate_columns: no pivot in column " +
                                 std::to_string(j) +
                                 " (input not invertible?)");
        record(m, pivot, j, ops, check_preserved_upper);
      }
      for (int r = j + 1; r < n; ++r)
        if (m.get(r, j)) record(m, j, r, ops, check_preserved_upper);
    }
  }
}

BitMatrix eliminate_lower(const BitMatrix& m, const PmhConfig& cfg,
                          std::vector<CnotGate>& ops) {
  BitMatrix work = m;
  eliminate_columns_inplace(work, m.size(), cfg.stripe_width, ops);
  return work;
}

SynthesisResult synthesize_pmh(const BitMatrix& m, const PmhConfig& cfg) {
  auto start = std::chrono::steady_clock::now();
  if (!is_invertible(m))
    throw std::invalid_argument("synthesize_pmh: matrix is not invertible");

  std::vector<CnotGate> lower_ops;
  BitMatrix upper = eliminate_lower(m, cfg, lower_ops);

  // Second pass on the transpose (lower triangular, unit diagonal). Row
  // operations there keep the smaller index as control, so the zeroed
  // region is preserved; enable the debug check.
  BitMatrix t = transpose(upper);
  std::vector<CnotGate> upper_ops;
  eliminate_columns_inplace(t, m.size(), cfg.stripe_width, upper_ops, true);
  assert(t.is_identity());

  SynthesisResult result;
  result.method = "pmh";
  result.circuit.n = m.size();
  result.circuit.gates = std::move(lower_ops);
  // A transposed-frame op (c, t) becomes gate (t, c); the whole block is
  // emitted in reverse order so the left-to-right replay matches.
  for (auto it = upper_ops.rbegin(); it != upper_ops.rend(); ++it)
    result.circuit.gates.push_back({it->target, it->control});

  result.verified = verify_solves(m, result.circuit);
  if (!result.verified)
    throw std::logic_error("synthesize_pmh: circuit failed verification");
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

SynthesisResult sweep_stripe_width(const BitMatrix& m) {
  const int n = m.size();
  int log_width = 1;
  while ((1 << log_width) < n) ++log_width;  // ceil(log2 n)
  std::vector<int> widths = {1, 2, log_width};

  SynthesisResult best;
  bool have = false;
  for (int w : widths) {
    if (w < 1 || w > n) continue;
    SynthesisResult r = synthesize_pmh(m, PmhConfig{w});
    if (!have || r.circuit.size() < best.circuit.size()) {
      best = std::move(r);
      have = true;
    }
  }
  return best;
}

}  // namespace cnotsynth
