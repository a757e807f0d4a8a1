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
#include <string>
#include <vector>

namespace cnotsynth {

inline constexpr int kMaxDim = 64;

/// n x n boolean matrix over GF(2) with each row packed into one 64-bit
/// word: bit j of word i holds entry (i, j). Bits at column positions >= n
/// are always zero. Immutable-after-construction value semantics; the only
/// mutating entry points are the *_inplace helpers and set()/set_row().
class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(int n);  // zero matrix

  static BitMatrix identity_of(int n);

  int size() const { return n_; }

  bool get(int r, int c) const { return (rows_[r] >> c) & 1; }
  void set(int r, int c, bool v) {
    if (v)
      rows_[r] |= uint64_t{1} << c;
    else
      rows_[r] &= ~(uint64_t{1} << c);
  }

  uint64_t row(int r) const { return rows_[r]; }
  void set_row(int r, uint64_t bits) { rows_[r] = bits & column_mask(); }
  void xor_row(int target, uint64_t bits) { rows_[target] ^= bits & column_mask(); }

  uint64_t column_mask() const {
    return n_ == 64 ? ~uint64_t{0} : (uint64_t{1} << n_) - 1;
  }

  bool is_identity() const;

  friend bool operator==(const BitMatrix& a, const BitMatrix& b) {
    return a.n_ == b.n_ && a.rows_ == b.rows_;
  }

 private:
  int n_ = 0;
  std::vector<uint64_t> rows_;
};

BitMatrix identity(int n);

/// Row op: row[target] ^= row[control]. Throws on control == target or
/// out-of-range indices. Preserves invertibility.
BitMatrix apply_cnot(const BitMatrix& m, int control, int target);
void apply_cnot_inplace(BitMatrix& m, int control, int target);

/// Rank over GF(2) equals n (elimination on a copy).
bool is_invertible(const BitMatrix& m);

int diag_ones(const BitMatrix& m);
int offdiag_ones(const BitMatrix& m);
int total_ones(const BitMatrix& m);
/// (n - diag_ones) + offdiag_ones; zero iff m is the identity.
int hamming_to_identity(const BitMatrix& m);

BitMatrix transpose(const BitMatrix& m);
BitMatrix multiply(const BitMatrix& a, const BitMatrix& b);
/// GF(2) inverse via Gauss-Jordan; throws std::invalid_argument if singular.
BitMatrix inverse(const BitMatrix& m);

/// Text format: first line `n`, then n lines of n characters '0'/'1'.
/// Round-trips exactly.
std::string to_text(const BitMatrix& m);
BitMatrix matrix_from_text(const std::string& text);

BitMatrix load_matrix(const std::string& path);
void save_matrix(const std::string& path, const BitMatrix& m);

/// Packs the n*n entries row-major into one word (requires n <= 8).
uint64_t pack_key(const BitMatrix& m);
BitMatrix unpack_key(uint64_t key, int n);

}  // namespace cnotsynth
