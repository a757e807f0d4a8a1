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

#include "cnotsynth/circuit.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cnotsynth {

BitMatrix replay(BitMatrix m, const Circuit& c) {
  if (c.n != m.size())
    throw std::invalid_argument("circuit dimension " + std::to_string(c.n) +
                                " does not match matrix dimension " +
                                std::to_string(m.size()));
  for (const CnotGate& g : c.gates) apply_cnot_inplace(m, g.control, g.target);
  return m;
}

bool verify_solves(const BitMatrix& m, const Circuit& c) {
  return replay(m, c).is_identity();
}

Circuit reversed(const Circuit& c) {
  Circuit out{c.n, {c.gates.rbegin(), c.gates.rend()}};
  return out;
}

Circuit concat(const Circuit& a, const Circuit& b) {
  if (a.n != b.n) throw std::invalid_argument("circuit dimension mismatch");
  Circuit out = a;
  out.gates.insert(out.gates.end(), b.gates.begin(), b.gates.end());
  return out;
}

std::string serialize(const Circuit& c) {
  std::ostringstream os;
  os << "n=" << c.n << '\n';
  for (const CnotGate& g : c.gates)
    os << "CNOT " << g.control << ' ' << g.target << '\n';
  return os.str();
}

Circuit parse_circuit(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("circuit text: empty input");
  if (line.rfind("n=", 0) != 0)
    throw std::runtime_error("circuit text: expected header `n=<n>`");
  Circuit c;
  try {
    c.n = std::stoi(line.substr(2));
  } catch (const std::exception&) {
    throw std::runtime_error("circuit text: bad dimension in header");
  }
  if (c.n < 1 || c.n > kMaxDim)
    throw std::runtime_error("circuit text: dimension out of range");
  size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string word;
    int control = -1, target = -1;
    if (!(ls >> word >> control >> target) || word != "CNOT")
      throw std::runtime_error("circuit text: malformed line " +
                               std::to_string(lineno));
    std::string rest;
    if (ls >> rest)
      throw std::runtime_error("circuit text: trailing junk on line " +
                               std::to_string(lineno));
    if (control < 0 || control >= c.n || target < 0 || target >= c.n)
      throw std::runtime_error("circuit text: index out of range on line " +
                               std::to_string(lineno));
    if (control == target)
      throw std::runtime_error("circuit text: control equals target on line " +
                               std::to_string(lineno));
    c.gates.push_back({control, target});
  }
  return c;
}

Circuit load_circuit(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open circuit file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_circuit(buf.str());
}

void save_circuit(const std::string& path, const Circuit& c) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write circuit file: " + path);
  out << serialize(c);
}

std::string to_qasm(const Circuit& c) {
  std::ostringstream os;
  os << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  os << "qreg q[" << c.n << "];\n";
  for (const CnotGate& g : c.gates)
    os << "cx q[" << g.control << "],q[" << g.target << "];\n";
  return os.str();
}

}  // namespace cnotsynth
