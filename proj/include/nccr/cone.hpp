// Rational polyhedral cones given by primitive ray generators.
#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "nccr/linsys.hpp"
#include "nccr/matrix.hpp"
#include "nccr/normal_forms.hpp"

namespace nccr {

struct ConeT {
  std::size_t ambient_dim = 0;
  std::vector<IntVec> rays;

  ConeT() = default;
  ConeT(std::size_t d, std::vector<IntVec> rs) : ambient_dim(d), rays(std::move(rs)) {
    for (const IntVec& r : rays) {
      if (r.size() != ambient_dim) throw Error(errc::invalid_input, "ray dimension mismatch");
      if (is_zero(r) || content(r) != 1)
        throw Error(errc::invalid_input, "cone rays must be primitive");
    }
    for (std::size_t i = 0; i < rays.size(); ++i)
      for (std::size_t j = i + 1; j < rays.size(); ++j) {
        if (rays[i] == rays[j] || rays[i] == vec_neg(rays[j]))
          throw Error(errc::invalid_input, "cone rays must be pairwise non-parallel");
      }
  }
};

inline IntMatrix rows_matrix(const std::vector<IntVec>& vecs, std::size_t cols) {
  if (vecs.empty()) {
    IntMatrix m;
    m.rows = 0;
    m.cols = cols;
    return m;
  }
  return IntMatrix::from_rows(vecs);
}

inline std::size_t int_rank(const IntMatrix& m) { return snf_rank(snf(m)); }

// Integral basis of the saturation of span(vecs) within Z^d: kill the span
// with functionals, then kill the functionals.
inline std::vector<IntVec> saturated_basis(const std::vector<IntVec>& vecs, std::size_t d) {
  std::vector<IntVec> ann = kernel_basis(rows_matrix(vecs, d));
  return kernel_basis(rows_matrix(ann, d));
}

// Coordinates of v in a saturated basis (integral and unique when v lies in
// the spanned lattice).
inline IntVec saturated_coords(const std::vector<IntVec>& basis, const IntVec& v) {
  IntMatrix bt = transpose(rows_matrix(basis, v.size()));
  std::optional<IntVec> c = solve_integral(bt, v);
  if (!c) throw Error(errc::internal, "vector outside saturated sublattice");
  return *c;
}

// Exact H-representation: x is in the cone iff f.x = 0 for every f in eqs and
// f.x >= 0 for every f in ineqs.  Inequality functionals are primitive and
// irredundant (one per facet).
struct ConeHRep {
  std::vector<IntVec> eqs;
  std::vector<IntVec> ineqs;
};

inline ConeHRep cone_hrep(const ConeT& cone) {
  std::size_t d = cone.ambient_dim;
  ConeHRep out;
  out.eqs = kernel_basis(rows_matrix(cone.rays, d));
  std::vector<IntVec> basis = saturated_basis(cone.rays, d);
  std::size_t s = basis.size();
  if (s == 0) return out;  // the origin; equalities already pin it down

  std::vector<IntVec> intr(cone.rays.size());
  for (std::size_t i = 0; i < cone.rays.size(); ++i)
    intr[i] = saturated_coords(basis, cone.rays[i]);

  // Facet normals of the full-dimensional intrinsic cone, oriented inward.
  std::set<IntVec> normals;
  if (s == 1) {
    IntVec n(1);
    n[0] = intr[0][0] > 0 ? 1 : -1;
    normals.insert(n);
  } else {
    // Candidate hyperplanes through (s-1)-subsets of rays.
    std::vector<std::size_t> sel;
    std::function<void(std::size_t)> walk = [&](std::size_t from) {
      if (sel.size() == s - 1) {
        std::vector<IntVec> sub;
        for (std::size_t i : sel) sub.push_back(intr[i]);
        std::vector<IntVec> ker = kernel_basis(rows_matrix(sub, s));
        if (ker.size() != 1) return;  // subset does not span a hyperplane
        IntVec n = primitive(ker[0]);
        bool pos = false, neg = false;
        for (const IntVec& r : intr) {
          Int v = dot(n, r);
          if (v > 0) pos = true;
          if (v < 0) neg = true;
        }
        if (pos && neg) return;  // not supporting
        if (neg) n = vec_neg(n);
        normals.insert(n);
        return;
      }
      for (std::size_t i = from; i < cone.rays.size(); ++i) {
        sel.push_back(i);
        walk(i + 1);
        sel.pop_back();
      }
    };
    walk(0);
  }

  // Pull intrinsic normals back to ambient functionals: F . basis_j = n_j has
  // an integral solution because the basis is saturated.
  IntMatrix bm = rows_matrix(basis, d);
  for (const IntVec& n : normals) {
    std::optional<IntVec> f = solve_integral(bm, n);
    if (!f) throw Error(errc::internal, "saturated basis pullback failed");
    out.ineqs.push_back(*f);
  }
  return out;
}

inline bool cone_contains(const ConeHRep& h, const IntVec& x) {
  for (const IntVec& f : h.eqs)
    if (dot(f, x) != 0) return false;
  for (const IntVec& f : h.ineqs)
    if (dot(f, x) < 0) return false;
  return true;
}

// Strict interior relative to the cone's linear span.
inline bool cone_contains_interior(const ConeHRep& h, const IntVec& x) {
  for (const IntVec& f : h.eqs)
    if (dot(f, x) != 0) return false;
  for (const IntVec& f : h.ineqs)
    if (dot(f, x) <= 0) return false;
  return true;
}

// A cone is strongly convex iff some functional is strictly positive on all
// rays (scale to >= 1 for the exact LP).
inline bool is_strongly_convex(const ConeT& cone) {
  LinearSystem sys(cone.ambient_dim);
  for (const IntVec& r : cone.rays) sys.add_ge(to_rat(r), Rat(1));
  return lp_feasible(sys).feasible;
}

// Gorenstein witness: integral m with <m, ray> = 1 for every ray.
inline std::optional<IntVec> is_gorenstein(const ConeT& cone) {
  IntVec ones(cone.rays.size(), Int(1));
  return solve_integral(rows_matrix(cone.rays, cone.ambient_dim), ones);
}

// Integral functional vanishing exactly on the face spanned by face_rays and
// strictly positive on the remaining rays.  The zero functional certifies the
// improper face.  Throws when the selection is not a face.
inline IntVec face_supporting_character(const ConeT& cone, const std::vector<int>& face_rays) {
  std::vector<bool> in_face(cone.rays.size(), false);
  for (int i : face_rays) {
    if (i < 0 || static_cast<std::size_t>(i) >= cone.rays.size())
      throw Error(errc::invalid_input, "face ray index out of range");
    in_face[i] = true;
  }
  if (face_rays.size() == cone.rays.size()) return IntVec(cone.ambient_dim, Int(0));
  LinearSystem sys(cone.ambient_dim);
  for (std::size_t i = 0; i < cone.rays.size(); ++i) {
    if (in_face[i])
      sys.add_eq(to_rat(cone.rays[i]), Rat(0));
    else
      sys.add_ge(to_rat(cone.rays[i]), Rat(1));
  }
  LpResult lp = lp_feasible(sys);
  if (!lp.feasible)
    throw Error(errc::verification_failed, "selection does not span a face");
  Int scale = 1;
  for (const Rat& q : lp.witness) scale = lcm(scale, q.get_den());
  IntVec m(cone.ambient_dim);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = Rat(lp.witness[i] * scale).get_num();
  return m;
}

}  // namespace nccr
