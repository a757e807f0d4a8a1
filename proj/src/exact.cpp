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

#include "cnotsynth/exact.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace cnotsynth {

namespace {

// Gate (c, t) on a packed row-major key: row t ^= row c.
inline uint64_t neighbor_key(uint64_t key, int c, int t, int n) {
  const uint64_t row_mask = (uint64_t{1} << n) - 1;
  uint64_t row_c = (key >> (c * n)) & row_mask;
  return key ^ (row_c << (t * n));
}

struct GateList {
  // All n(n-1) ordered (control, target) pairs.
  std::vector<CnotGate> gates;
  explicit GateList(int n) {
    for (int c = 0; c < n; ++c)
      for (int t = 0; t < n; ++t)
        if (c != t) gates.push_back({c, t});
  }
};

}  // namespace

int DistanceTable::lookup_key(uint64_t key) const {
  uint8_t d = dist[key];
  if (d == kUnreached)
    throw std::invalid_argument("distance table: key is not in GL(n,2)");
  return d;
}

int DistanceTable::lookup(const BitMatrix& m) const {
  if (m.size() != n)
    throw std::invalid_argument("distance table: dimension mismatch");
  return lookup_key(pack_key(m));
}

DistanceTable build_distance_table(int n) {
  if (n < 1 || n > 4)
    throw std::invalid_argument("build_distance_table supports n <= 4 only");
  DistanceTable table;
  table.n = n;
  table.dist.assign(uint64_t{1} << (n * n), DistanceTable::kUnreached);

  GateList gl(n);
  const uint64_t start = pack_key(identity(n));
  table.dist[start] = 0;
  std::vector<uint64_t> frontier{start}, next;
  table.group_size = 1;
  int depth = 0;
  while (!frontier.empty()) {
    next.clear();
    for (uint64_t key : frontier) {
      for (const CnotGate& g : gl.gates) {
        uint64_t v = neighbor_key(key, g.control, g.target, n);
        if (table.dist[v] == DistanceTable::kUnreached) {
          table.dist[v] = static_cast<uint8_t>(depth + 1);
          next.push_back(v);
        }
      }
    }
    if (!next.empty()) {
      ++depth;
      table.group_size += next.size();
    }
    frontier.swap(next);
  }
  table.diameter = depth;
  return table;
}

namespace {

struct Side {
  std::vector<uint8_t> dist;
  std::vector<uint64_t> frontier;
  int depth = 0;
};

// Greedy descent: from `key` at distance d in `side`, find the gate leading
// to distance d-1. Every BFS-settled vertex except the root has one.
CnotGate descend_step(const Side& side, uint64_t& key, int n,
                      const GateList& gl) {
  int d = side.dist[key];
  for (const CnotGate& g : gl.gates) {
    uint64_t v = neighbor_key(key, g.control, g.target, n);
    if (side.dist[v] != DistanceTable::kUnreached && side.dist[v] == d - 1) {
      key = v;
      return g;
    }
  }
  throw std::logic_error("optimal_solve: descent failed");
}

}  // namespace

OptimalSolution optimal_solve(const BitMatrix& m) {
  const int n = m.size();
  if (n > 5)
    throw std::invalid_argument(
        "optimal_solve refuses n > 5 (state space too large)");
  if (!is_invertible(m))
    throw std::invalid_argument("optimal_solve: matrix is not invertible");

  OptimalSolution out;
  out.witness.n = n;
  if (m.is_identity()) return out;

  const uint64_t start = pack_key(m);
  const uint64_t goal = pack_key(identity(n));
  const size_t space = uint64_t{1} << (n * n);
  GateList gl(n);

  Side a, b;  // a grows from m, b from the identity
  a.dist.assign(space, DistanceTable::kUnreached);
  b.dist.assign(space, DistanceTable::kUnreached);
  a.dist[start] = 0;
  b.dist[goal] = 0;
  a.frontier = {start};
  b.frontier = {goal};

  int best = -1;
  uint64_t meet = 0;
  std::vector<uint64_t> next;
  while (best < 0 || a.depth + b.depth < best) {
    Side& grow = (a.frontier.size() <= b.frontier.size()) ? a : b;
    Side& other = (&grow == &a) ? b : a;
    if (grow.frontier.empty()) break;
    next.clear();
    for (uint64_t key : grow.frontier) {
      for (const CnotGate& g : gl.gates) {
        uint64_t v = neighbor_key(key, g.control, g.target, n);
        if (grow.dist[v] == DistanceTable::kUnreached) {
          grow.dist[v] = static_cast<uint8_t>(grow.depth + 1);
          next.push_back(v);
          if (other.dist[v] != DistanceTable::kUnreached) {
            int total = grow.dist[v] + other.dist[v];
            if (best < 0 || total < best) {
              best = total;
              meet = v;
            }
          }
        }
      }
    }
    grow.frontier.swap(next);
    ++grow.depth;
  }
  if (best < 0)
    throw std::logic_error("optimal_solve: search exhausted without meeting");

  // Path m -> meet: walk meet down side a, then reverse (gates are
  // involutions). Path meet -> identity: walk meet down side b directly.
  std::vector<CnotGate> head;
  uint64_t cur = meet;
  while (cur != start) head.push_back(descend_step(a, cur, n, gl));
  std::reverse(head.begin(), head.end());
  out.witness.gates = std::move(head);
  cur = meet;
  while (cur != goal) out.witness.gates.push_back(descend_step(b, cur, n, gl));

  out.count = best;
  assert(static_cast<int>(out.witness.gates.size()) == best);
  if (!verify_solves(m, out.witness))
    throw std::logic_error("optimal_solve: witness failed verification");
  return out;
}

int optimal_count(const BitMatrix& m) { return optimal_solve(m).count; }

}  // namespace cnotsynth
