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

#include "cnotsynth/bitmatrix.hpp"

#include <bit>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cnotsynth {

namespace {

void check_dim(int n) {
  if (n < 1 || n > kMaxDim)
    throw std::invalid_argument("matrix dimension must be in [1, 64], got " +
                                std::to_string(n));
}

void check_index(const BitMatrix& m, int i, const char* what) {
  if (i < 0 || i >= m.size())
    throw std::invalid_argument(std::string(what) + " index " +
                                std::to_string(i) + " out of range for n=" +
                                std::to_string(m.size()));
}

}  // namespace

BitMatrix::BitMatrix(int n) : n_(n), rows_(static_cast<size_t>(n), 0) {
  check_dim(n);
}

BitMatrix BitMatrix::identity_of(int n) {
  BitMatrix m(n);
  for (int i = 0; i < n; ++i) m.rows_[i] = uint64_t{1} << i;
  return m;
}

bool BitMatrix::is_identity() const {
  for (int i = 0; i < n_; ++i)
    if (rows_[i] != uint64_t{1} << i) return false;
  return true;
}

BitMatrix identity(int n) { return BitMatrix::identity_of(n); }

void apply_cnot_inplace(BitMatrix& m, int control, int target) {
  check_index(m, control, "control");
  check_index(m, target, "target");
  if (control == target)
    throw std::invalid_argument("CNOT with control == target is undefined");
  m.xor_row(target, m.row(control));
}

BitMatrix apply_cnot(const BitMatrix& m, int control, int target) {
  BitMatrix out = m;
  apply_cnot_inplace(out, control, target);
  return out;
}

bool is_invertible(const BitMatrix& m) {
  const int n = m.size();
  std::vector<uint64_t> rows(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) rows[i] = m.row(i);
  for (int col = 0; col < n; ++col) {
    const uint64_t bit = uint64_t{1} << col;
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (rows[r] & bit) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return false;
    std::swap(rows[col], rows[pivot]);
    for (int r = col + 1; r < n; ++r)
      if (rows[r] & bit) rows[r] ^= rows[col];
  }
  return true;
}

int diag_ones(const BitMatrix& m) {
  int count = 0;
  for (int i = 0; i < m.size(); ++i) count += m.get(i, i);
  return count;
}

int total_ones(const BitMatrix& m) {
  int count = 0;
  for (int i = 0; i < m.size(); ++i)
    count += std::popcount(m.row(i));
  return count;
}

int offdiag_ones(const BitMatrix& m) { return total_ones(m) - diag_ones(m); }

int hamming_to_identity(const BitMatrix& m) {
  return (m.size() - diag_ones(m)) + offdiag_ones(m);
}

BitMatrix transpose(const BitMatrix& m) {
  const int n = m.size();
  BitMatrix out(n);
  for (int i = 0; i < n; ++i) {
    uint64_t bits = m.row(i);
    while (bits) {
      int j = std::countr_zero(bits);
      bits &= bits - 1;
      out.set(j, i, true);
    }
  }
  return out;
}

BitMatrix multiply(const BitMatrix& a, const BitMatrix& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("dimension mismatch in multiply");
  const int n = a.size();
  BitMatrix out(n);
  for (int i = 0; i < n; ++i) {
    uint64_t acc = 0;
    uint64_t bits = a.row(i);
    while (bits) {
      int j = std::countr_zero(bits);
      bits &= bits - 1;
      acc ^= b.row(j);
    }
    out.set_row(i, acc);
  }
  return out;
}

BitMatrix inverse(const BitMatrix& m) {
  const int n = m.size();
  std::vector<uint64_t> rows(static_cast<size_t>(n)), inv(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    rows[i] = m.row(i);
    inv[i] = uint64_t{1} << i;
  }
  for (int col = 0; col < n; ++col) {
    const uint64_t bit = uint64_t{1} << col;
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (rows[r] & bit) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) throw std::invalid_argument("matrix is singular");
    std::swap(rows[col], rows[pivot]);
    std::swap(inv[col], inv[pivot]);
    for (int r = 0; r < n; ++r) {
      if (r != col && (rows[r] & bit)) {
        rows[r] ^= rows[col];
        inv[r] ^= inv[col];
      }
    }
  }
  BitMatrix out(n);
  for (int i = 0; i < n; ++i) out.set_row(i, inv[i]);
  return out;
}

std::string to_text(const BitMatrix& m) {
  std::ostringstream os;
  os << m.size() << '\n';
  for (int i = 0; i < m.size(); ++i) {
    for (int j = 0; j < m.size(); ++j) os << (m.get(i, j) ? '1' : '0');
    os << '\n';
  }
  return os.str();
}

BitMatrix matrix_from_text(const std::string& text) {
  std::istringstream is(text);
  int n = 0;
  if (!(is >> n)) throw std::runtime_error("matrix text: missing dimension");
  check_dim(n);
  BitMatrix m(n);
  std::string line;
  std::getline(is, line);  // rest of the header line
  for (int i = 0; i < n; ++i) {
    if (!std::getline(is, line))
      throw std::runtime_error("matrix text: expected " + std::to_string(n) +
                               " rows, got " + std::to_string(i));
    if (static_cast<int>(line.size()) != n)
      throw std::runtime_error("matrix text: row " + std::to_string(i) +
                               " has length " + std::to_string(line.size()) +
                               ", expected " + std::to_string(n));
    for (int j = 0; j < n; ++j) {
      if (line[j] == '1')
        m.set(i, j, true);
      else if (line[j] != '0')
        throw std::runtime_error("matrix text: bad character in row " +
                                 std::to_string(i));
    }
  }
  return m;
}

BitMatrix load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return matrix_from_text(buf.str());
}

void save_matrix(const std::string& path, const BitMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write matrix file: " + path);
  out << to_text(m);
}

uint64_t pack_key(const BitMatrix& m) {
  const int n = m.size();
  if (n > 8) throw std::invalid_argument("pack_key requires n <= 8");
  uint64_t key = 0;
  for (int i = 0; i < n; ++i) key |= m.row(i) << (i * n);
  return key;
}

BitMatrix unpack_key(uint64_t key, int n) {
  if (n < 1 || n > 8) throw std::invalid_argument("unpack_key requires n <= 8");
  BitMatrix m(n);
  const uint64_t mask = (uint64_t{1} << n) - 1;
  for (int i = 0; i < n; ++i) m.set_row(i, (key >> (i * n)) & mask);
  return m;
}

}  // namespace cnotsynth
