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

#include "cnotsynth/generators.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cnotsynth {

const char* setting_name(Setting s) {
  switch (s) {
    case Setting::rare:
      return "rare";
    case Setting::medium:
      return "medium";
    case Setting::overcooked:
      return "overcooked";
  }
  return "?";
}

Setting parse_setting(const std::string& name) {
  if (name == "rare") return Setting::rare;
  if (name == "medium") return Setting::medium;
  if (name == "overcooked") return Setting::overcooked;
  throw std::invalid_argument("unknown setting: " + name);
}

int nlogn_budget(int n, LogBase base) {
  double ln = std::log(static_cast<double>(n));
  if (base == LogBase::base2) ln /= std::log(2.0);
  return static_cast<int>(std::lround(n * ln));
}

int setting_budget(Setting s, int n, LogBase base) {
  switch (s) {
    case Setting::rare:
      return (n + 1) / 2;  // ceil(n/2)
    case Setting::medium:
      return nlogn_budget(n, base);
    case Setting::overcooked:
      return n * n;
  }
  return 0;
}

BitMatrix gen_permutation(int n, Rng& rng) {
  std::vector<int> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(rng.below(static_cast<uint64_t>(i) + 1));
    std::swap(perm[i], perm[j]);
  }
  BitMatrix m(n);
  for (int i = 0; i < n; ++i) m.set(i, perm[i], true);
  return m;
}

BitMatrix gen_triangular(int n, bool upper, Rng& rng) {
  BitMatrix m = identity(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      bool bit = rng.next_bit();
      if (!bit) continue;
      if (upper)
        m.set(j, i, true);
      else
        m.set(i, j, true);
    }
  }
  return m;
}

BitMatrix gen_random_cnots(int n, int k, Rng& rng) {
  if (n < 2) throw std::invalid_argument("gen_random_cnots requires n >= 2");
  BitMatrix m = identity(n);
  const uint64_t pairs = static_cast<uint64_t>(n) * (n - 1);
  for (int step = 0; step < k; ++step) {
    uint64_t idx = rng.below(pairs);
    int c = static_cast<int>(idx / (n - 1));
    int r = static_cast<int>(idx % (n - 1));
    int t = r + (r >= c ? 1 : 0);
    apply_cnot_inplace(m, c, t);
  }
  return m;
}

BitMatrix draw_from_class(const MatrixClass& cls, int n, Rng& rng) {
  switch (cls.kind) {
    case MatrixKind::permutation:
      return gen_permutation(n, rng);
    case MatrixKind::upper_triangular:
      return gen_triangular(n, true, rng);
    case MatrixKind::lower_triangular:
      return gen_triangular(n, false, rng);
    case MatrixKind::random_cnots:
      return gen_random_cnots(n, cls.cnot_budget, rng);
  }
  throw std::invalid_argument("bad matrix class");
}

std::vector<BitMatrix> gen_suite(Setting s, int n, int count, uint64_t seed,
                                 LogBase base) {
  if (count < 1) throw std::invalid_argument("suite count must be >= 1");
  const int budget = setting_budget(s, n, base);
  std::vector<BitMatrix> out;
  out.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    Rng rng(Rng::derive(seed, static_cast<uint64_t>(i)));
    out.push_back(gen_random_cnots(n, budget, rng));
  }
  return out;
}

}  // namespace cnotsynth
