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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>

#include "cnotsynth/bitmatrix.hpp"
#include "cnotsynth/rng.hpp"

using namespace cnotsynth;

namespace {

BitMatrix from_bits(const std::vector<std::vector<int>>& bits) {
  BitMatrix m(static_cast<int>(bits.size()));
  for (size_t i = 0; i < bits.size(); ++i)
    for (size_t j = 0; j < bits.size(); ++j)
      if (bits[i][j]) m.set(static_cast<int>(i), static_cast<int>(j), true);
  return m;
}

BitMatrix random_invertible(int n, Rng& rng) {
  // Random row ops from the identity always stay invertible.
  BitMatrix m = identity(n);
  for (int step = 0; step < 4 * n; ++step) {
    int c = static_cast<int>(rng.below(n));
    int t = static_cast<int>(rng.below(n - 1));
    if (t >= c) ++t;
    apply_cnot_inplace(m, c, t);
  }
  return m;
}

}  // namespace

TEST_CASE("identity basics") {
  CHECK(identity(2) == from_bits({{1, 0}, {0, 1}}));
  CHECK(identity(1) == from_bits({{1}}));
  BitMatrix i8 = identity(8);
  CHECK(diag_ones(i8) == 8);
  CHECK(offdiag_ones(i8) == 0);
  CHECK(hamming_to_identity(i8) == 0);
  CHECK(i8.is_identity());
  CHECK_THROWS_AS(identity(0), std::invalid_argument);
  CHECK_THROWS_AS(identity(65), std::invalid_argument);
  CHECK(identity(64).is_identity());
}

TEST_CASE("apply_cnot") {
  CHECK(apply_cnot(identity(2), 0, 1) == from_bits({{1, 0}, {1, 1}}));
  CHECK(apply_cnot(from_bits({{1, 1}, {0, 1}}), 1, 0) == identity(2));

  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2 + static_cast<int>(rng.below(10));
    BitMatrix m = random_invertible(n, rng);
    int c = static_cast<int>(rng.below(n));
    int t = static_cast<int>(rng.below(n - 1));
    if (t >= c) ++t;
    // involution
    CHECK(apply_cnot(apply_cnot(m, c, t), c, t) == m);
    // only the target row changes
    BitMatrix after = apply_cnot(m, c, t);
    for (int i = 0; i < n; ++i) {
      if (i == t)
        CHECK(after.row(i) == (m.row(i) ^ m.row(c)));
      else
        CHECK(after.row(i) == m.row(i));
    }
    // invertibility preserved
    CHECK(is_invertible(after));
  }

  CHECK_THROWS_AS(apply_cnot(identity(3), 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(apply_cnot(identity(3), 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(apply_cnot(identity(3), -1, 0), std::invalid_argument);
}

TEST_CASE("is_invertible") {
  CHECK(is_invertible(identity(4)));
  CHECK_FALSE(is_invertible(BitMatrix(3)));  // zero matrix
  CHECK_FALSE(is_invertible(from_bits({{1, 1}, {1, 1}})));
  CHECK(is_invertible(from_bits({{0, 1}, {1, 0}})));
}

TEST_CASE("counting helpers") {
  BitMatrix m = apply_cnot(identity(3), 0, 1);
  CHECK(diag_ones(m) == 3);
  CHECK(offdiag_ones(m) == 1);
  CHECK(hamming_to_identity(m) == 1);

  BitMatrix swap2 = from_bits({{0, 1}, {1, 0}});
  CHECK(diag_ones(swap2) == 0);
  CHECK(offdiag_ones(swap2) == 2);
  CHECK(hamming_to_identity(swap2) == 4);
}

TEST_CASE("hamming delta equals offdiag delta minus diag delta") {
  Rng rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    int n = 2 + static_cast<int>(rng.below(13));
    BitMatrix m = random_invertible(n, rng);
    int c = static_cast<int>(rng.below(n));
    int t = static_cast<int>(rng.below(n - 1));
    if (t >= c) ++t;
    BitMatrix after = apply_cnot(m, c, t);
    int d = diag_ones(after) - diag_ones(m);
    int dbar = offdiag_ones(after) - offdiag_ones(m);
    CHECK(hamming_to_identity(after) - hamming_to_identity(m) == dbar - d);
  }
}

TEST_CASE("transpose and multiply") {
  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 1 + static_cast<int>(rng.below(16));
    BitMatrix m = n >= 2 ? random_invertible(n, rng) : identity(1);
    CHECK(transpose(transpose(m)) == m);
    CHECK(multiply(m, identity(n)) == m);
    CHECK(multiply(identity(n), m) == m);
  }
  BitMatrix u = from_bits({{1, 1}, {0, 1}});
  CHECK(multiply(u, u) == identity(2));
  CHECK_THROWS_AS(multiply(identity(2), identity(3)), std::invalid_argument);
}

TEST_CASE("bit-packed multiply matches the naive triple loop") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(rng.below(16));
    BitMatrix a(n), b(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (rng.next_bit()) a.set(i, j, true);
        if (rng.next_bit()) b.set(i, j, true);
      }
    BitMatrix expected(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        int acc = 0;
        for (int k = 0; k < n; ++k) acc ^= (a.get(i, k) & b.get(k, j));
        if (acc) expected.set(i, j, true);
      }
    CHECK(multiply(a, b) == expected);
  }
}

TEST_CASE("inverse") {
  Rng rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2 + static_cast<int>(rng.below(15));
    BitMatrix m = random_invertible(n, rng);
    CHECK(multiply(m, inverse(m)) == identity(n));
    CHECK(multiply(inverse(m), m) == identity(n));
  }
  CHECK_THROWS_AS(inverse(BitMatrix(2)), std::invalid_argument);
}

TEST_CASE("text round trip") {
  BitMatrix m = from_bits({{1, 0, 1}, {0, 1, 0}, {1, 1, 1}});
  CHECK(to_text(m) == "3\n101\n010\n111\n");
  CHECK(matrix_from_text(to_text(m)) == m);

  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 1 + static_cast<int>(rng.below(20));
    BitMatrix r(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (rng.next_bit()) r.set(i, j, true);
    CHECK(matrix_from_text(to_text(r)) == r);
  }

  CHECK_THROWS_AS(matrix_from_text(""), std::runtime_error);
  CHECK_THROWS_AS(matrix_from_text("2\n10\n1"), std::runtime_error);
  CHECK_THROWS_AS(matrix_from_text("2\n10\n1x"), std::runtime_error);
}

TEST_CASE("pack key round trip") {
  Rng rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 1 + static_cast<int>(rng.below(8));
    BitMatrix m(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (rng.next_bit()) m.set(i, j, true);
    CHECK(unpack_key(pack_key(m), n) == m);
  }
}

TEST_CASE("rng determinism and bounds") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());

  Rng r(1);
  for (int i = 0; i < 10000; ++i) {
    uint64_t x = r.below(7);
    CHECK(x < 7);
  }
  // a fixed draw, frozen so any change to the generator is caught
  Rng probe(42);
  CHECK(probe.next() == 13679457532755275413ULL);

  CHECK(Rng::derive(1, 2) != Rng::derive(1, 3));
  CHECK(Rng::derive(1, 2) == Rng::derive(1, 2));
}
