// Dense integer matrices (row-major, arbitrary precision).
#pragma once

#include <cstddef>
#include <vector>

#include "nccr/arith.hpp"

namespace nccr {

struct IntMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<Int> entries;  // row-major, rows*cols

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c, Int(0)) {}

  Int& at(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
  const Int& at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(const std::vector<IntVec>& rs) {
    IntMatrix m(rs.size(), rs.empty() ? 0 : rs[0].size());
    for (std::size_t i = 0; i < rs.size(); ++i) {
      if (rs[i].size() != m.cols) throw Error(errc::invalid_input, "ragged matrix rows");
      for (std::size_t j = 0; j < m.cols; ++j) m.at(i, j) = rs[i][j];
    }
    return m;
  }

  IntVec row(std::size_t r) const {
    IntVec v(cols);
    for (std::size_t j = 0; j < cols; ++j) v[j] = at(r, j);
    return v;
  }

  IntVec col(std::size_t c) const {
    IntVec v(rows);
    for (std::size_t i = 0; i < rows; ++i) v[i] = at(i, c);
    return v;
  }

  bool operator==(const IntMatrix& o) const {
    return rows == o.rows && cols == o.cols && entries == o.entries;
  }
};

inline IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols != b.rows) throw Error(errc::internal, "matrix product shape mismatch");
  IntMatrix c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      if (a.at(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) c.at(i, j) += a.at(i, k) * b.at(k, j);
    }
  return c;
}

inline IntVec mat_vec(const IntMatrix& a, const IntVec& x) {
  if (a.cols != x.size()) throw Error(errc::internal, "matrix-vector shape mismatch");
  IntVec y(a.rows, Int(0));
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) y[i] += a.at(i, j) * x[j];
  return y;
}

inline IntMatrix transpose(const IntMatrix& a) {
  IntMatrix t(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) t.at(j, i) = a.at(i, j);
  return t;
}

// Fraction-free Bareiss determinant; exact for any size we meet here.
inline Int det(const IntMatrix& a) {
  if (a.rows != a.cols) throw Error(errc::internal, "determinant of non-square matrix");
  std::size_t n = a.rows;
  if (n == 0) return 1;
  IntMatrix m = a;
  Int sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m.at(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m.at(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) swap(m.at(k, j), m.at(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m.at(i, j) = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / prev;
    prev = m.at(k, k);
  }
  return sign * m.at(n - 1, n - 1);
}

}  // namespace nccr
