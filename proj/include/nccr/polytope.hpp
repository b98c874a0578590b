// Lattice polytopes with exact facet/face enumeration, lattice equivalence
// testing, the wedge construction, and height -1 vertex placement.
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "nccr/cone.hpp"
#include "nccr/linsys.hpp"

namespace nccr {

class LatticePolytope {
public:
  LatticePolytope(std::size_t ambient_dim, std::vector<IntVec> vertices)
      : ambient_(ambient_dim), verts_(std::move(vertices)) {
    if (ambient_ == 0) throw Error(errc::invalid_input, "ambient dimension must be positive");
    if (verts_.empty()) throw Error(errc::invalid_input, "polytope needs at least one vertex");
    if (verts_.size() > 63) throw Error(errc::invalid_input, "vertex count exceeds supported range");
    for (const IntVec& v : verts_)
      if (v.size() != ambient_) throw Error(errc::invalid_input, "vertex dimension mismatch");
    for (std::size_t i = 0; i < verts_.size(); ++i)
      for (std::size_t j = i + 1; j < verts_.size(); ++j)
        if (verts_[i] == verts_[j]) throw Error(errc::invalid_input, "duplicate vertices");
    // Every listed point must be a genuine vertex: not in the hull of the rest.
    for (std::size_t i = 0; i < verts_.size(); ++i) {
      if (verts_.size() == 1) break;
      LinearSystem sys(verts_.size() - 1);
      for (std::size_t c = 0; c < ambient_; ++c) {
        RatVec row;
        for (std::size_t j = 0; j < verts_.size(); ++j)
          if (j != i) row.push_back(Rat(verts_[j][c]));
        sys.add_eq(std::move(row), Rat(verts_[i][c]));
      }
      sys.add_eq(RatVec(verts_.size() - 1, Rat(1)), Rat(1));
      for (std::size_t j = 0; j + 1 < verts_.size(); ++j) {
        RatVec unit(verts_.size() - 1, Rat(0));
        unit[j] = 1;
        sys.add_ge(std::move(unit), Rat(0));
      }
      if (lp_feasible(sys).feasible)
        throw Error(errc::invalid_input, "listed point is not a vertex");
    }
  }

  std::size_t ambient_dim() const { return ambient_; }
  const std::vector<IntVec>& vertices() const { return verts_; }
  const IntVec& vertex(std::size_t i) const { return verts_[i]; }
  std::size_t num_vertices() const { return verts_.size(); }

  // Dimension of the affine hull.
  std::size_t dim() const {
    std::vector<IntVec> diffs;
    for (std::size_t i = 1; i < verts_.size(); ++i) diffs.push_back(vec_sub(verts_[i], verts_[0]));
    return int_rank(rows_matrix(diffs, ambient_));
  }

private:
  std::size_t ambient_;
  std::vector<IntVec> verts_;
};

struct Facet {
  IntVec normal;  // primitive, outward
  Int offset;     // normal . x <= offset on the polytope, with equality on the facet
  std::vector<int> vertex_set;
};

// All facets, sorted by (normal lex, offset).  Requires a full-dimensional
// polytope; candidates are hyperplanes spanned by d-subsets of vertices.
inline std::vector<Facet> facets(const LatticePolytope& p) {
  std::size_t d = p.ambient_dim();
  if (p.dim() != d) throw Error(errc::verification_failed, "polytope is not full-dimensional");
  std::map<std::pair<IntVec, Int>, std::vector<int>> found;
  std::vector<std::size_t> sel;
  std::function<void(std::size_t)> walk = [&](std::size_t from) {
    if (sel.size() == d) {
      std::vector<IntVec> diffs;
      for (std::size_t k = 1; k < d; ++k)
        diffs.push_back(vec_sub(p.vertex(sel[k]), p.vertex(sel[0])));
      std::vector<IntVec> ker = kernel_basis(rows_matrix(diffs, d));
      if (ker.size() != 1) return;  // subset affinely dependent or degenerate
      IntVec n = primitive(ker[0]);
      Int c = dot(n, p.vertex(sel[0]));
      bool above = false, below = false;
      for (std::size_t i = 0; i < p.num_vertices(); ++i) {
        Int s = dot(n, p.vertex(i));
        if (s > c) above = true;
        if (s < c) below = true;
      }
      if (above && below) return;
      if (above) {
        n = vec_neg(n);
        c = -c;
      }
      std::vector<int> vs;
      for (std::size_t i = 0; i < p.num_vertices(); ++i)
        if (dot(n, p.vertex(i)) == c) vs.push_back(static_cast<int>(i));
      found[{n, c}] = vs;
      return;
    }
    for (std::size_t i = from; i < p.num_vertices(); ++i) {
      sel.push_back(i);
      walk(i + 1);
      sel.pop_back();
    }
  };
  walk(0);
  std::vector<Facet> out;
  for (auto& [key, vs] : found) out.push_back({key.first, key.second, vs});
  return out;
}

// Faces of dimension exactly d, as sorted vertex index lists (lex order).
// d == dim(P) yields the improper face, d == -1 the empty face.  Every proper
// face is an intersection of facets, so closing the facet vertex sets under
// intersection enumerates them all.
inline std::vector<std::vector<int>> faces(const LatticePolytope& p, int d) {
  std::size_t dim = p.ambient_dim();
  std::vector<Facet> fs = facets(p);
  std::set<std::uint64_t> masks;
  std::uint64_t full = (p.num_vertices() == 64) ? ~0ull : ((1ull << p.num_vertices()) - 1);
  masks.insert(full);
  masks.insert(0);
  for (const Facet& f : fs) {
    std::uint64_t m = 0;
    for (int v : f.vertex_set) m |= 1ull << v;
    masks.insert(m);
  }
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::uint64_t> cur(masks.begin(), masks.end());
    for (std::size_t i = 0; i < cur.size(); ++i)
      for (std::size_t j = i + 1; j < cur.size(); ++j)
        if (masks.insert(cur[i] & cur[j]).second) grew = true;
  }
  std::vector<std::vector<int>> out;
  for (std::uint64_t m : masks) {
    std::vector<int> vs;
    for (std::size_t i = 0; i < p.num_vertices(); ++i)
      if (m & (1ull << i)) vs.push_back(static_cast<int>(i));
    int fd;
    if (vs.empty()) {
      fd = -1;
    } else {
      std::vector<IntVec> diffs;
      for (std::size_t k = 1; k < vs.size(); ++k)
        diffs.push_back(vec_sub(p.vertex(vs[k]), p.vertex(vs[0])));
      fd = static_cast<int>(int_rank(rows_matrix(diffs, dim)));
    }
    if (fd == d) out.push_back(vs);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline ConeT cone_over(const LatticePolytope& p) {
  std::vector<IntVec> rays;
  for (const IntVec& v : p.vertices()) {
    IntVec r = v;
    r.push_back(1);
    rays.push_back(std::move(r));
  }
  return ConeT(p.ambient_dim() + 1, std::move(rays));
}

// Reflexive: full-dimensional with every primitive outward facet at lattice
// distance one from the origin (which then lies strictly inside).
inline bool is_reflexive(const LatticePolytope& p) {
  if (p.dim() != p.ambient_dim()) return false;
  for (const Facet& f : facets(p))
    if (f.offset != 1) return false;
  return true;
}

// Wedge over a facet (a . x <= b): glue two copies of P along the facet, with
// the second coordinate recording the lattice distance from the facet.
inline LatticePolytope wedge(const LatticePolytope& p, std::size_t facet_index) {
  std::vector<Facet> fs = facets(p);
  if (facet_index >= fs.size()) throw Error(errc::invalid_input, "facet index out of range");
  const Facet& f = fs[facet_index];
  std::vector<IntVec> vs;
  for (const IntVec& v : p.vertices()) {
    IntVec w = v;
    w.push_back(0);
    vs.push_back(std::move(w));
  }
  for (const IntVec& v : p.vertices()) {
    Int h = f.offset - dot(f.normal, v);
    if (h == 0) continue;
    IntVec w = v;
    w.push_back(h);
    vs.push_back(std::move(w));
  }
  return LatticePolytope(p.ambient_dim() + 1, std::move(vs));
}

struct AffineMap {
  IntMatrix a;  // unimodular
  IntVec t;     // x -> a x + t
};

// Searches for a lattice-affine bijection P -> Q.  Deterministic: candidate
// ordered tuples of Q vertices are scanned in lexicographic index order.
inline std::optional<AffineMap> lattice_equivalent(const LatticePolytope& p,
                                                   const LatticePolytope& q,
                                                   std::size_t vertex_cap = 12) {
  if (p.ambient_dim() != q.ambient_dim()) return std::nullopt;
  if (p.num_vertices() != q.num_vertices()) return std::nullopt;
  if (p.num_vertices() > vertex_cap || q.num_vertices() > vertex_cap)
    throw Error(errc::search_exhausted, "lattice equivalence vertex cap exceeded");
  std::size_t d = p.ambient_dim();
  if (p.dim() != d || q.dim() != d)
    throw Error(errc::verification_failed, "lattice equivalence requires full-dimensional input");

  // Affinely independent base tuple of P, greedily by index.
  std::vector<std::size_t> base{0};
  std::vector<IntVec> dirs;
  for (std::size_t i = 1; i < p.num_vertices() && dirs.size() < d; ++i) {
    std::vector<IntVec> trial = dirs;
    trial.push_back(vec_sub(p.vertex(i), p.vertex(0)));
    if (int_rank(rows_matrix(trial, d)) == trial.size()) {
      dirs = std::move(trial);
      base.push_back(i);
    }
  }
  IntMatrix dm(d, d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i) dm.at(i, j) = dirs[j][i];
  Int dd = det(dm);

  // Rational inverse of dm, column by column.
  std::vector<RatVec> dm_rows(d, RatVec(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) dm_rows[i][j] = Rat(dm.at(i, j));
  std::vector<RatVec> inv_cols;
  for (std::size_t j = 0; j < d; ++j) {
    RatVec rhs(d, Rat(0));
    rhs[j] = 1;
    RatSolve s = solve_linear(dm_rows, rhs);
    inv_cols.push_back(s.particular);
  }

  std::set<IntVec> q_set(q.vertices().begin(), q.vertices().end());
  std::vector<std::size_t> tuple;
  std::vector<bool> used(q.num_vertices(), false);
  std::optional<AffineMap> result;
  std::function<void()> walk = [&]() {
    if (result) return;
    if (tuple.size() == d + 1) {
      IntMatrix wm(d, d);
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i)
          wm.at(i, j) = q.vertex(tuple[j + 1])[i] - q.vertex(tuple[0])[i];
      Int wd = det(wm);
      if (abs(wd) != abs(dd)) return;
      // A = W * D^{-1}; must be integral with |det| = 1.
      IntMatrix a(d, d);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
          Rat s = 0;
          for (std::size_t k = 0; k < d; ++k) s += Rat(wm.at(i, k)) * inv_cols[j][k];
          if (s.get_den() != 1) return;
          a.at(i, j) = s.get_num();
        }
      if (abs(det(a)) != 1) return;
      IntVec t = vec_sub(q.vertex(tuple[0]), mat_vec(a, p.vertex(base[0])));
      for (const IntVec& v : p.vertices())
        if (!q_set.count(vec_add(mat_vec(a, v), t))) return;
      result = AffineMap{a, t};
      return;
    }
    for (std::size_t i = 0; i < q.num_vertices(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      tuple.push_back(i);
      walk();
      tuple.pop_back();
      used[i] = false;
      if (result) return;
    }
  };
  walk();
  return result;
}

struct Placement {
  LatticePolytope placed;  // vertices (A (v - w1), -1), input vertex order
  IntMatrix transform;     // the unimodular A
  IntVec u;                // interior direction mapped to e1
};

// Primitive directions of the edges leaving vertex w1.
inline std::vector<IntVec> vertex_edge_directions(const LatticePolytope& p, std::size_t w1) {
  std::vector<IntVec> dirs;
  for (const std::vector<int>& e : faces(p, 1)) {
    if (e.size() != 2) continue;
    std::size_t a = static_cast<std::size_t>(e[0]), b = static_cast<std::size_t>(e[1]);
    if (a == w1)
      dirs.push_back(primitive(vec_sub(p.vertex(b), p.vertex(a))));
    else if (b == w1)
      dirs.push_back(primitive(vec_sub(p.vertex(a), p.vertex(b))));
  }
  return dirs;
}

// Translates w1 to the origin and applies a unimodular A with A u = e1, so the
// polytope sits at height -1 with w1 over -e_{n+1}.  The claimed consequences
// (A unimodular, e1 strictly interior to the image vertex cone) are verified.
inline Placement unimodular_placement(const LatticePolytope& p, std::size_t w1,
                                      std::optional<IntVec> u_override = std::nullopt) {
  std::size_t d = p.ambient_dim();
  std::vector<IntVec> dirs = vertex_edge_directions(p, w1);
  if (dirs.empty()) throw Error(errc::verification_failed, "vertex has no incident edges");
  IntVec u;
  if (u_override) {
    u = *u_override;
  } else {
    IntVec sum(d, Int(0));
    for (const IntVec& e : dirs) sum = vec_add(sum, e);
    u = primitive(sum);
  }

  IntMatrix ucol(d, 1);
  for (std::size_t i = 0; i < d; ++i) ucol.at(i, 0) = u[i];
  SnfResult s = snf(ucol);
  if (s.s.at(0, 0) != 1) throw Error(errc::internal, "interior direction not primitive");
  IntMatrix a = s.u;
  if (s.v.at(0, 0) == -1)
    for (Int& x : a.entries) x = -x;

  IntVec e1(d, Int(0));
  e1[0] = 1;
  if (mat_vec(a, u) != e1) throw Error(errc::internal, "placement transform misses e1");
  if (abs(det(a)) != 1) throw Error(errc::internal, "placement transform not unimodular");
  ConeT image_cone = [&] {
    std::vector<IntVec> image_dirs;
    for (const IntVec& e : dirs) image_dirs.push_back(mat_vec(a, e));
    return ConeT(d, std::move(image_dirs));
  }();
  if (!cone_contains_interior(cone_hrep(image_cone), e1))
    throw Error(errc::verification_failed, "e1 not interior to the placed vertex cone");

  std::vector<IntVec> placed;
  for (const IntVec& v : p.vertices()) {
    IntVec w = mat_vec(a, vec_sub(v, p.vertex(w1)));
    w.push_back(-1);
    placed.push_back(std::move(w));
  }
  return Placement{LatticePolytope(d + 1, std::move(placed)), std::move(a), std::move(u)};
}

// Primitive vectors strictly inside the vertex cone at w1, ordered by
// (squared length, lex); used as fallback interior directions.
inline std::vector<IntVec> interior_direction_candidates(const LatticePolytope& p, std::size_t w1,
                                                         long radius) {
  std::size_t d = p.ambient_dim();
  std::vector<IntVec> dirs = vertex_edge_directions(p, w1);
  ConeHRep h = cone_hrep(ConeT(d, dirs));
  std::vector<IntVec> out;
  IntVec cur(d, Int(0));
  std::function<void(std::size_t)> walk = [&](std::size_t i) {
    if (i == d) {
      if (is_zero(cur) || content(cur) != 1) return;
      if (cone_contains_interior(h, cur)) out.push_back(cur);
      return;
    }
    for (long v = -radius; v <= radius; ++v) {
      cur[i] = v;
      walk(i + 1);
    }
    cur[i] = 0;
  };
  walk(0);
  std::sort(out.begin(), out.end(), [](const IntVec& a, const IntVec& b) {
    Int na = dot(a, a), nb = dot(b, b);
    if (na != nb) return na < nb;
    return lex_less(a, b);
  });
  return out;
}

}  // namespace nccr
