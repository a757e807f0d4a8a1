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

#include "cnotsynth/bitmatrix.hpp"
#include "cnotsynth/rng.hpp"

namespace cnotsynth {

enum class MatrixKind { permutation, upper_triangular, lower_triangular, random_cnots };

struct MatrixClass {
  MatrixKind kind = MatrixKind::random_cnots;
  int cnot_budget = 0;  // used when kind == random_cnots
};

/// Benchmark suites in increasing density: rare applies ceil(n/2) random
/// CNOTs to the identity, medium round(n*log n), overcooked n^2.
enum class Setting { rare, medium, overcooked };

/// Base of the logarithm in the medium / nlogn budget. Natural log is the
/// default; base 2 is available as a sensitivity knob.
enum class LogBase { natural, base2 };

const char* setting_name(Setting s);
Setting parse_setting(const std::string& name);

int setting_budget(Setting s, int n, LogBase base = LogBase::natural);
/// round(n * log n) in the chosen base.
int nlogn_budget(int n, LogBase base = LogBase::natural);

/// One 1 per row and column; Fisher-Yates shuffle of the identity rows.
BitMatrix gen_permutation(int n, Rng& rng);

/// Unit diagonal, i.i.d. uniform free entries on one side, zeros on the
/// other. Always invertible.
BitMatrix gen_triangular(int n, bool upper, Rng& rng);

/// identity(n) with k uniformly random valid (control, target) CNOTs
/// applied. Consecutive duplicates are allowed, so the true distance may be
/// below k.
BitMatrix gen_random_cnots(int n, int k, Rng& rng);

BitMatrix draw_from_class(const MatrixClass& cls, int n, Rng& rng);

/// `count` matrices with the setting's budget, deterministic from seed.
/// Matrix i uses the derived stream Rng::derive(seed, i), so suites can be
/// generated in parallel without changing the output.
std::vector<BitMatrix> gen_suite(Setting s, int n, int count, uint64_t seed,
                                 LogBase base = LogBase::natural);

}  // namespace cnotsynth
