// Exact rational linear systems: feasibility with witnesses via
// Fourier-Motzkin elimination, dense Gaussian solving, and lattice-point
// enumeration of bounded solution sets.
#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "nccr/arith.hpp"

namespace nccr {

struct LinRow {
  RatVec c;
  Rat rhs;
};

// c . x = rhs for every row of eq, c . x >= rhs for every row of ge.
struct LinearSystem {
  std::size_t vars = 0;
  std::vector<LinRow> eq, ge;

  LinearSystem() = default;
  explicit LinearSystem(std::size_t n) : vars(n) {}

  void add_eq(RatVec c, Rat rhs) {
    check(c);
    eq.push_back({std::move(c), std::move(rhs)});
  }
  void add_ge(RatVec c, Rat rhs) {
    check(c);
    ge.push_back({std::move(c), std::move(rhs)});
  }
  void add_le(RatVec c, Rat rhs) {
    check(c);
    for (Rat& x : c) x = -x;
    ge.push_back({std::move(c), -rhs});
  }

private:
  void check(const RatVec& c) const {
    if (c.size() != vars) throw Error(errc::internal, "constraint arity mismatch");
  }
};

struct LpResult {
  bool feasible = false;
  RatVec witness;  // satisfies every constraint when feasible
};

namespace detail {

// Canonical integer form of a >= row (positive scale, content 1); all-zero
// rows are dropped, returning false if one of them is violated.
inline bool normalize_ge(std::vector<LinRow>& rows) {
  std::set<std::pair<std::vector<Int>, Int>> seen;
  std::vector<LinRow> out;
  for (LinRow& r : rows) {
    Int scale = 1;
    for (const Rat& q : r.c) scale = lcm(scale, q.get_den());
    scale = lcm(scale, r.rhs.get_den());
    std::vector<Int> ic(r.c.size());
    bool all_zero = true;
    Int g = 0;
    for (std::size_t i = 0; i < r.c.size(); ++i) {
      Rat s = r.c[i] * scale;
      ic[i] = s.get_num();
      if (ic[i] != 0) all_zero = false;
      g = gcd(g, ic[i]);
    }
    Rat rs = r.rhs * scale;
    Int irhs = rs.get_num();
    if (all_zero) {
      if (irhs > 0) return false;
      continue;
    }
    g = gcd(g, irhs);
    for (Int& x : ic) x /= g;
    irhs /= g;
    if (!seen.insert({ic, irhs}).second) continue;
    LinRow nr;
    nr.c.resize(ic.size());
    for (std::size_t i = 0; i < ic.size(); ++i) nr.c[i] = Rat(ic[i]);
    nr.rhs = Rat(irhs);
    out.push_back(std::move(nr));
  }
  rows = std::move(out);
  return true;
}

// Drops equality rows with zero coefficients; false if one is violated.
inline bool normalize_eq(std::vector<LinRow>& rows) {
  std::vector<LinRow> out;
  for (LinRow& r : rows) {
    bool all_zero = true;
    for (const Rat& q : r.c)
      if (q != 0) {
        all_zero = false;
        break;
      }
    if (all_zero) {
      if (r.rhs != 0) return false;
      continue;
    }
    out.push_back(std::move(r));
  }
  rows = std::move(out);
  return true;
}

inline void shrink_rows(std::vector<LinRow>& rows, std::size_t k) {
  for (LinRow& r : rows) r.c.resize(k);
}

struct ElimStep {
  bool via_eq = false;
  LinRow eq;                           // used when via_eq
  std::vector<LinRow> lowers, uppers;  // rows with nonzero last coefficient
};

// Eliminates the last variable (index k-1) in place; records how it was bound
// when `step` is non-null.  Returns false on detected infeasibility.
inline bool eliminate_last(std::vector<LinRow>& eqs, std::vector<LinRow>& ges, std::size_t k,
                           ElimStep* step) {
  std::size_t j = k - 1;
  std::size_t ei = eqs.size();
  for (std::size_t i = 0; i < eqs.size(); ++i)
    if (eqs[i].c[j] != 0) {
      ei = i;
      break;
    }
  if (ei < eqs.size()) {
    LinRow e = eqs[ei];
    if (step) {
      step->via_eq = true;
      step->eq = e;
    }
    eqs.erase(eqs.begin() + ei);
    auto substitute = [&](LinRow& r) {
      if (r.c[j] == 0) return;
      Rat f = r.c[j] / e.c[j];
      for (std::size_t i = 0; i < k; ++i) r.c[i] -= f * e.c[i];
      r.rhs -= f * e.rhs;
    };
    for (LinRow& r : eqs) substitute(r);
    for (LinRow& r : ges) substitute(r);
  } else {
    std::vector<LinRow> keep, lowers, uppers;
    for (LinRow& r : ges) {
      if (r.c[j] > 0)
        lowers.push_back(std::move(r));
      else if (r.c[j] < 0)
        uppers.push_back(std::move(r));
      else
        keep.push_back(std::move(r));
    }
    for (const LinRow& l : lowers)
      for (const LinRow& u : uppers) {
        // l.c[j] > 0 gives a lower bound, u.c[j] < 0 an upper; the combination
        // l.c[j]*u - u.c[j]*l is valid and free of x_j.
        LinRow nr;
        nr.c.resize(k, Rat(0));
        for (std::size_t i = 0; i < j; ++i) nr.c[i] = l.c[j] * u.c[i] - u.c[j] * l.c[i];
        nr.rhs = l.c[j] * u.rhs - u.c[j] * l.rhs;
        keep.push_back(std::move(nr));
      }
    if (step) {
      step->via_eq = false;
      step->lowers = std::move(lowers);
      step->uppers = std::move(uppers);
    }
    ges = std::move(keep);
  }
  shrink_rows(eqs, j);
  shrink_rows(ges, j);
  if (!normalize_eq(eqs)) return false;
  if (!normalize_ge(ges)) return false;
  return true;
}

}  // namespace detail

inline LpResult lp_feasible(const LinearSystem& sys) {
  std::vector<LinRow> eqs = sys.eq, ges = sys.ge;
  if (!detail::normalize_eq(eqs) || !detail::normalize_ge(ges)) return {};
  std::vector<detail::ElimStep> steps(sys.vars);
  for (std::size_t k = sys.vars; k > 0; --k) {
    if (!detail::eliminate_last(eqs, ges, k, &steps[k - 1])) return {};
  }

  RatVec x(sys.vars);
  for (std::size_t j = 0; j < sys.vars; ++j) {
    const detail::ElimStep& st = steps[j];
    auto partial = [&](const LinRow& r) {
      Rat s = r.rhs;
      for (std::size_t i = 0; i < j; ++i) s -= r.c[i] * x[i];
      return s;  // remaining requirement on r.c[j] * x_j
    };
    if (st.via_eq) {
      x[j] = partial(st.eq) / st.eq.c[j];
      continue;
    }
    bool has_lo = false, has_hi = false;
    Rat lo, hi;
    for (const LinRow& l : st.lowers) {
      Rat b = partial(l) / l.c[j];
      if (!has_lo || b > lo) lo = b;
      has_lo = true;
    }
    for (const LinRow& u : st.uppers) {
      Rat b = partial(u) / u.c[j];
      if (!has_hi || b < hi) hi = b;
      has_hi = true;
    }
    if (has_lo && has_hi && lo > hi) throw Error(errc::internal, "witness interval empty");
    x[j] = has_lo ? lo : (has_hi ? hi : Rat(0));
  }

  // The witness is part of the contract; re-check it before handing it out.
  for (const LinRow& r : sys.eq)
    if (dot(r.c, x) != r.rhs) throw Error(errc::internal, "witness fails an equality");
  for (const LinRow& r : sys.ge)
    if (dot(r.c, x) < r.rhs) throw Error(errc::internal, "witness fails an inequality");
  return {true, std::move(x)};
}

// Particular rational solution plus nullspace basis of rows . x = rhs.
struct RatSolve {
  bool solvable = false;
  RatVec particular;
  std::vector<RatVec> nullspace;
};

inline RatSolve solve_linear(std::vector<RatVec> rows, RatVec rhs) {
  std::size_t m = rows.size();
  std::size_t n = m == 0 ? 0 : rows[0].size();
  if (rhs.size() != m) throw Error(errc::internal, "solve_linear shape mismatch");
  std::vector<std::size_t> pivot_col;
  std::size_t pr = 0;
  for (std::size_t col = 0; col < n && pr < m; ++col) {
    std::size_t p = m;
    for (std::size_t r = pr; r < m; ++r)
      if (rows[r][col] != 0) {
        p = r;
        break;
      }
    if (p == m) continue;
    std::swap(rows[p], rows[pr]);
    std::swap(rhs[p], rhs[pr]);
    Rat inv = rows[pr][col];
    for (Rat& q : rows[pr]) q /= inv;
    rhs[pr] /= inv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == pr || rows[r][col] == 0) continue;
      Rat f = rows[r][col];
      for (std::size_t i = 0; i < n; ++i) rows[r][i] -= f * rows[pr][i];
      rhs[r] -= f * rhs[pr];
    }
    pivot_col.push_back(col);
    ++pr;
  }
  for (std::size_t r = pr; r < m; ++r)
    if (rhs[r] != 0) return {};

  RatSolve out;
  out.solvable = true;
  out.particular.assign(n, Rat(0));
  for (std::size_t i = 0; i < pr; ++i) out.particular[pivot_col[i]] = rhs[i];
  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : pivot_col) is_pivot[c] = true;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    RatVec v(n, Rat(0));
    v[f] = 1;
    for (std::size_t i = 0; i < pr; ++i) v[pivot_col[i]] = -rows[i][f];
    out.nullspace.push_back(std::move(v));
  }
  return out;
}

namespace detail {

// Exact projection of the solution set onto the first variable.  Returns false
// if the slice is empty; throws on a missing bound (callers guarantee a
// bounded solution set).
inline bool first_var_range(std::vector<LinRow> eqs, std::vector<LinRow> ges, std::size_t vars,
                            Rat& lo, Rat& hi) {
  if (!normalize_eq(eqs) || !normalize_ge(ges)) return false;
  for (std::size_t k = vars; k > 1; --k)
    if (!eliminate_last(eqs, ges, k, nullptr)) return false;
  bool has_lo = false, has_hi = false;
  for (const LinRow& e : eqs) {
    Rat v = e.rhs / e.c[0];
    if (!has_lo || v > lo) lo = v;
    if (!has_hi || v < hi) hi = v;
    has_lo = has_hi = true;
  }
  for (const LinRow& g : ges) {
    Rat b = g.rhs / g.c[0];
    if (g.c[0] > 0) {
      if (!has_lo || b > lo) lo = b;
      has_lo = true;
    } else {
      if (!has_hi || b < hi) hi = b;
      has_hi = true;
    }
  }
  if (!has_lo || !has_hi)
    throw Error(errc::internal, "unbounded direction escaped the recession check");
  return lo <= hi;
}

inline void enumerate_rec(const std::vector<LinRow>& eqs, const std::vector<LinRow>& ges,
                          std::size_t vars, IntVec& prefix, std::vector<IntVec>& out) {
  if (vars == 0) {
    for (const LinRow& e : eqs)
      if (e.rhs != 0) return;
    for (const LinRow& g : ges)
      if (g.rhs > 0) return;
    out.push_back(prefix);
    return;
  }
  Rat lo, hi;
  if (!first_var_range(eqs, ges, vars, lo, hi)) return;
  for (Int v = rat_ceil(lo); v <= rat_floor(hi); ++v) {
    std::vector<LinRow> seqs = eqs, sges = ges;
    auto substitute = [&](std::vector<LinRow>& rows) {
      for (LinRow& r : rows) {
        r.rhs -= r.c[0] * v;
        r.c.erase(r.c.begin());
      }
    };
    substitute(seqs);
    substitute(sges);
    prefix.push_back(v);
    enumerate_rec(seqs, sges, vars - 1, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace detail

// All integer points of the solution set, in ascending lexicographic order.
// Throws errc::unbounded when the (nonempty) solution set has a recession ray.
inline std::vector<IntVec> enumerate_lattice_points(const LinearSystem& sys) {
  if (!lp_feasible(sys).feasible) return {};

  // Recession cone: same coefficients, homogeneous right-hand sides.  A
  // nonzero ray has some component of magnitude >= 1 after scaling.
  for (std::size_t i = 0; i < sys.vars; ++i) {
    for (int sgn : {+1, -1}) {
      LinearSystem hom(sys.vars);
      for (const LinRow& r : sys.eq) hom.add_eq(r.c, Rat(0));
      for (const LinRow& r : sys.ge) hom.add_ge(r.c, Rat(0));
      RatVec unit(sys.vars, Rat(0));
      unit[i] = sgn;
      hom.add_ge(std::move(unit), Rat(1));
      if (lp_feasible(hom).feasible)
        throw Error(errc::unbounded, "solution set is unbounded");
    }
  }

  std::vector<IntVec> out;
  IntVec prefix;
  detail::enumerate_rec(sys.eq, sys.ge, sys.vars, prefix, out);
  return out;
}

}  // namespace nccr
