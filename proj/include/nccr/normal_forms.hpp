// Hermite and Smith normal forms over Z with unimodular transforms.
//
// Pivot rule everywhere: smallest nonzero magnitude, ties broken by lowest
// index.  This makes every normal form (and everything derived from one:
// kernel bases, class-group presentations, divisor-class coordinates) a pure
// function of the input matrix, which certificate determinism relies on.
#pragma once

#include <cstddef>
#include <optional>

#include "nccr/arith.hpp"
#include "nccr/matrix.hpp"

namespace nccr {

namespace detail {

inline int cmp_abs(const Int& a, const Int& b) {
  return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t());
}

struct RowOps {
  IntMatrix* m;
  IntMatrix* u;  // accumulates the same ops applied to an identity
  void sub(std::size_t dst, std::size_t src, const Int& q) {
    for (std::size_t j = 0; j < m->cols; ++j) m->at(dst, j) -= q * m->at(src, j);
    for (std::size_t j = 0; j < u->cols; ++j) u->at(dst, j) -= q * u->at(src, j);
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < m->cols; ++j) swap(m->at(a, j), m->at(b, j));
    for (std::size_t j = 0; j < u->cols; ++j) swap(u->at(a, j), u->at(b, j));
  }
  void negate(std::size_t r) {
    for (std::size_t j = 0; j < m->cols; ++j) m->at(r, j) = -m->at(r, j);
    for (std::size_t j = 0; j < u->cols; ++j) u->at(r, j) = -u->at(r, j);
  }
  void add(std::size_t dst, std::size_t src) {
    for (std::size_t j = 0; j < m->cols; ++j) m->at(dst, j) += m->at(src, j);
    for (std::size_t j = 0; j < u->cols; ++j) u->at(dst, j) += u->at(src, j);
  }
};

struct ColOps {
  IntMatrix* m;
  IntMatrix* v;
  void sub(std::size_t dst, std::size_t src, const Int& q) {
    for (std::size_t i = 0; i < m->rows; ++i) m->at(i, dst) -= q * m->at(i, src);
    for (std::size_t i = 0; i < v->rows; ++i) v->at(i, dst) -= q * v->at(i, src);
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < m->rows; ++i) swap(m->at(i, a), m->at(i, b));
    for (std::size_t i = 0; i < v->rows; ++i) swap(v->at(i, a), v->at(i, b));
  }
};

}  // namespace detail

struct HnfResult {
  IntMatrix h;  // row echelon, pivots positive, entries above pivots in [0, pivot)
  IntMatrix u;  // unimodular, u * input == h
};

inline HnfResult hnf(const IntMatrix& a) {
  IntMatrix h = a, u = IntMatrix::identity(a.rows);
  detail::RowOps ops{&h, &u};
  std::size_t pr = 0;
  for (std::size_t col = 0; col < h.cols && pr < h.rows; ++col) {
    while (true) {
      std::size_t best = h.rows;
      for (std::size_t r = pr; r < h.rows; ++r) {
        if (h.at(r, col) == 0) continue;
        if (best == h.rows || detail::cmp_abs(h.at(r, col), h.at(best, col)) < 0) best = r;
      }
      if (best == h.rows) break;
      ops.swap_rows(best, pr);
      if (h.at(pr, col) < 0) ops.negate(pr);
      bool residue = false;
      for (std::size_t r = pr + 1; r < h.rows; ++r) {
        if (h.at(r, col) == 0) continue;
        Int q = floor_div(h.at(r, col), h.at(pr, col));
        if (q != 0) ops.sub(r, pr, q);
        if (h.at(r, col) != 0) residue = true;
      }
      if (!residue) break;
    }
    if (h.at(pr, col) == 0) continue;  // no pivot in this column
    for (std::size_t r = 0; r < pr; ++r) {
      Int q = floor_div(h.at(r, col), h.at(pr, col));
      if (q != 0) ops.sub(r, pr, q);
    }
    ++pr;
  }
  return {h, u};
}

struct SnfResult {
  IntMatrix s;  // diagonal, nonnegative, d1 | d2 | ...
  IntMatrix u;  // unimodular row transform
  IntMatrix v;  // unimodular column transform, u * input * v == s
};

inline SnfResult snf(const IntMatrix& a) {
  IntMatrix s = a, u = IntMatrix::identity(a.rows), v = IntMatrix::identity(a.cols);
  detail::RowOps rops{&s, &u};
  detail::ColOps cops{&s, &v};

  auto pick_pivot = [&](std::size_t t) -> bool {
    std::size_t bi = s.rows, bj = s.cols;
    for (std::size_t i = t; i < s.rows; ++i)
      for (std::size_t j = t; j < s.cols; ++j) {
        if (s.at(i, j) == 0) continue;
        if (bi == s.rows || detail::cmp_abs(s.at(i, j), s.at(bi, bj)) < 0) {
          bi = i;
          bj = j;
        }
      }
    if (bi == s.rows) return false;
    rops.swap_rows(bi, t);
    cops.swap_cols(bj, t);
    return true;
  };

  std::size_t n = s.rows < s.cols ? s.rows : s.cols;
  for (std::size_t t = 0; t < n; ++t) {
    if (!pick_pivot(t)) break;
    while (true) {
      if (s.at(t, t) < 0) rops.negate(t);
      bool residue = false;
      for (std::size_t r = t + 1; r < s.rows; ++r) {
        if (s.at(r, t) == 0) continue;
        Int q = floor_div(s.at(r, t), s.at(t, t));
        if (q != 0) rops.sub(r, t, q);
        if (s.at(r, t) != 0) residue = true;
      }
      for (std::size_t c = t + 1; c < s.cols; ++c) {
        if (s.at(t, c) == 0) continue;
        Int q = floor_div(s.at(t, c), s.at(t, t));
        if (q != 0) cops.sub(c, t, q);
        if (s.at(t, c) != 0) residue = true;
      }
      if (residue) {
        pick_pivot(t);
        continue;
      }
      // Row and column are clear; enforce divisibility into the trailing block.
      bool divisible = true;
      for (std::size_t i = t + 1; i < s.rows && divisible; ++i)
        for (std::size_t j = t + 1; j < s.cols; ++j) {
          if (s.at(i, j) % s.at(t, t) != 0) {
            rops.add(t, i);
            divisible = false;
            break;
          }
        }
      if (divisible) break;
    }
  }
  return {s, u, v};
}

inline std::size_t snf_rank(const SnfResult& r) {
  std::size_t n = r.s.rows < r.s.cols ? r.s.rows : r.s.cols;
  std::size_t k = 0;
  while (k < n && r.s.at(k, k) != 0) ++k;
  return k;
}

// Basis of {x : A x = 0} over Z.  Columns of V past the rank of A; since V is
// unimodular the basis spans a saturated sublattice (a direct summand).
inline std::vector<IntVec> kernel_basis(const IntMatrix& a) {
  SnfResult r = snf(a);
  std::size_t rank = snf_rank(r);
  std::vector<IntVec> basis;
  for (std::size_t j = rank; j < a.cols; ++j) basis.push_back(r.v.col(j));
  return basis;
}

// Integral inverse of a unimodular matrix (its HNF is the identity and the
// accumulated transform is the inverse).
inline IntMatrix unimodular_inverse(const IntMatrix& m) {
  if (m.rows != m.cols) throw Error(errc::internal, "inverse of non-square matrix");
  HnfResult r = hnf(m);
  if (!(r.h == IntMatrix::identity(m.rows)))
    throw Error(errc::internal, "matrix is not unimodular");
  return r.u;
}

// One integral solution of A x = b, if any (free coordinates set to zero).
inline std::optional<IntVec> solve_integral(const IntMatrix& a, const IntVec& b) {
  if (b.size() != a.rows) throw Error(errc::internal, "solve_integral shape mismatch");
  SnfResult r = snf(a);
  std::size_t rank = snf_rank(r);
  IntVec c = mat_vec(r.u, b);
  IntVec y(a.cols, Int(0));
  for (std::size_t i = 0; i < a.rows; ++i) {
    if (i < rank) {
      if (c[i] % r.s.at(i, i) != 0) return std::nullopt;
      y[i] = c[i] / r.s.at(i, i);
    } else if (c[i] != 0) {
      return std::nullopt;
    }
  }
  return mat_vec(r.v, y);
}

}  // namespace nccr
