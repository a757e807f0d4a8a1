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

#include <string>
#include <vector>

#include "cnotsynth/bitmatrix.hpp"

namespace cnotsynth {

struct CnotGate {
  int control = 0;
  int target = 0;
  friend bool operator==(const CnotGate&, const CnotGate&) = default;
};

/// Ordered gate sequence on n wires. Gates apply left-to-right as row
/// operations: row[target] ^= row[control].
struct Circuit {
  int n = 0;
  std::vector<CnotGate> gates;

  size_t size() const { return gates.size(); }
  friend bool operator==(const Circuit&, const Circuit&) = default;
};

/// Applies every gate of c to m in list order.
BitMatrix replay(BitMatrix m, const Circuit& c);

/// True iff replay(m, c) is the identity.
bool verify_solves(const BitMatrix& m, const Circuit& c);

/// Same gates in reverse order; replaying it undoes the original circuit.
Circuit reversed(const Circuit& c);

Circuit concat(const Circuit& a, const Circuit& b);

/// Text format: header `n=<n>`, then one `CNOT <control> <target>` line per
/// gate. parse(serialize(c)) == c.
std::string serialize(const Circuit& c);
Circuit parse_circuit(const std::string& text);

Circuit load_circuit(const std::string& path);
void save_circuit(const std::string& path, const Circuit& c);

/// OpenQASM-2-style export: one `cx q[c],q[t];` line per gate.
std::string to_qasm(const Circuit& c);

/// One synthesis outcome. verified is true iff the circuit replays the
/// source matrix to the identity.
struct SynthesisResult {
  Circuit circuit;
  std::string method;
  bool verified = false;
  double wall_time = 0.0;
};

}  // namespace cnotsynth
