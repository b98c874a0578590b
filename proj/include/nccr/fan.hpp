// Fans presented by primitive rays and maximal cones (ray index sets).
#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <vector>

#include "nccr/polytope.hpp"

namespace nccr {

struct Fan {
  std::size_t ambient_dim = 0;
  std::vector<IntVec> rays;
  std::vector<std::vector<int>> max_cones;

  Fan() = default;
  Fan(std::size_t d, std::vector<IntVec> rs, std::vector<std::vector<int>> mc)
      : ambient_dim(d), rays(std::move(rs)), max_cones(std::move(mc)) {
    for (const IntVec& r : rays) {
      if (r.size() != ambient_dim) throw Error(errc::invalid_input, "ray dimension mismatch");
      if (is_zero(r) || content(r) != 1) throw Error(errc::invalid_input, "fan rays must be primitive");
    }
    for (std::size_t i = 0; i < rays.size(); ++i)
      for (std::size_t j = i + 1; j < rays.size(); ++j)
        if (rays[i] == rays[j]) throw Error(errc::invalid_input, "duplicate fan rays");
    for (std::vector<int>& c : max_cones) {
      if (c.empty()) throw Error(errc::invalid_input, "empty maximal cone");
      std::sort(c.begin(), c.end());
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k] < 0 || static_cast<std::size_t>(c[k]) >= rays.size())
          throw Error(errc::invalid_input, "cone ray index out of range");
        if (k > 0 && c[k] == c[k - 1]) throw Error(errc::invalid_input, "repeated ray in cone");
      }
    }
    for (std::size_t i = 0; i < max_cones.size(); ++i)
      for (std::size_t j = 0; j < max_cones.size(); ++j) {
        if (i == j) continue;
        if (std::includes(max_cones[j].begin(), max_cones[j].end(), max_cones[i].begin(),
                          max_cones[i].end()))
          throw Error(errc::invalid_input, "maximal cone contained in another");
      }
  }

  ConeT cone(std::size_t i) const {
    std::vector<IntVec> rs;
    for (int k : max_cones[i]) rs.push_back(rays[k]);
    return ConeT(ambient_dim, std::move(rs));
  }
};

// Face fan of a polytope with the origin strictly inside: one maximal cone
// per facet, rays the primitivized vertices.
inline Fan face_fan(const LatticePolytope& p) {
  std::vector<Facet> fs = facets(p);
  for (const Facet& f : fs)
    if (f.offset <= 0)
      throw Error(errc::verification_failed, "origin is not interior to the polytope");
  std::vector<IntVec> rays;
  for (const IntVec& v : p.vertices()) rays.push_back(primitive(v));
  std::vector<std::vector<int>> cones;
  for (const Facet& f : fs) cones.push_back(f.vertex_set);
  return Fan(p.ambient_dim(), std::move(rays), std::move(cones));
}

struct FanReport {
  bool simplicial = false;
  bool complete = false;
  bool intersections_are_faces = false;
  bool ok() const { return simplicial && complete && intersections_are_faces; }
};

namespace detail {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace detail

// Structural checks: simpliciality, completeness (every wall shared by exactly
// two full-dimensional maximal cones and the wall graph connected), and the
// fan condition that pairwise intersections are common faces.
inline FanReport verify_fan(const Fan& f) {
  FanReport rep;
  if (f.max_cones.empty()) return rep;

  rep.simplicial = true;
  bool all_full = true;
  for (std::size_t i = 0; i < f.max_cones.size(); ++i) {
    std::vector<IntVec> rs;
    for (int k : f.max_cones[i]) rs.push_back(f.rays[k]);
    std::size_t rk = int_rank(rows_matrix(rs, f.ambient_dim));
    if (rk != rs.size()) rep.simplicial = false;
    if (rk != f.ambient_dim) all_full = false;
  }

  if (all_full) {
    // Wall = facet of a maximal cone, keyed by its incident ray index set.
    std::map<std::vector<int>, std::vector<std::size_t>> walls;
    for (std::size_t i = 0; i < f.max_cones.size(); ++i) {
      const std::vector<int>& c = f.max_cones[i];
      std::vector<IntVec> rs;
      for (int k : c) rs.push_back(f.rays[k]);
      std::size_t rk = int_rank(rows_matrix(rs, f.ambient_dim));
      if (rk == rs.size()) {
        for (std::size_t drop = 0; drop < c.size(); ++drop) {
          std::vector<int> w;
          for (std::size_t k = 0; k < c.size(); ++k)
            if (k != drop) w.push_back(c[k]);
          walls[w].push_back(i);
        }
      } else {
        ConeHRep h = cone_hrep(f.cone(i));
        for (const IntVec& fn : h.ineqs) {
          std::vector<int> w;
          for (int k : c)
            if (dot(fn, f.rays[k]) == 0) w.push_back(k);
          walls[w].push_back(i);
        }
      }
    }
    bool two_sided = true;
    detail::UnionFind uf(f.max_cones.size());
    for (const auto& [key, owners] : walls) {
      if (owners.size() != 2) {
        two_sided = false;
        continue;
      }
      uf.unite(owners[0], owners[1]);
    }
    bool connected = true;
    for (std::size_t i = 1; i < f.max_cones.size(); ++i)
      if (uf.find(i) != uf.find(0)) connected = false;
    rep.complete = two_sided && connected;
  }

  rep.intersections_are_faces = true;
  std::vector<ConeHRep> hreps;
  for (std::size_t i = 0; i < f.max_cones.size(); ++i) hreps.push_back(cone_hrep(f.cone(i)));
  for (std::size_t i = 0; i < f.max_cones.size() && rep.intersections_are_faces; ++i)
    for (std::size_t j = i + 1; j < f.max_cones.size(); ++j) {
      std::vector<int> common;
      std::set_intersection(f.max_cones[i].begin(), f.max_cones[i].end(), f.max_cones[j].begin(),
                            f.max_cones[j].end(), std::back_inserter(common));
      // A functional vanishing on the common rays and strictly positive on the
      // rest of cone i certifies Cone(common) as a face of cone i.
      auto support = [&](std::size_t ci) -> std::optional<IntVec> {
        LinearSystem sys(f.ambient_dim);
        for (int k : f.max_cones[ci]) {
          bool in_common = std::binary_search(common.begin(), common.end(), k);
          if (in_common)
            sys.add_eq(to_rat(f.rays[k]), Rat(0));
          else
            sys.add_ge(to_rat(f.rays[k]), Rat(1));
        }
        LpResult lp = lp_feasible(sys);
        if (!lp.feasible) return std::nullopt;
        Int scale = 1;
        for (const Rat& q : lp.witness) scale = lcm(scale, q.get_den());
        IntVec m(f.ambient_dim);
        for (std::size_t k = 0; k < m.size(); ++k) m[k] = Rat(lp.witness[k] * scale).get_num();
        return m;
      };
      std::optional<IntVec> m1 = support(i), m2 = support(j);
      if (!m1 || !m2) {
        rep.intersections_are_faces = false;
        break;
      }
      // Any point of the geometric intersection off the common face would have
      // m1 . x > 0; scale-invariance lets us demand >= 1.
      LinearSystem overlap(f.ambient_dim);
      for (const ConeHRep* h : {&hreps[i], &hreps[j]}) {
        for (const IntVec& e : h->eqs) overlap.add_eq(to_rat(e), Rat(0));
        for (const IntVec& e : h->ineqs) overlap.add_ge(to_rat(e), Rat(0));
      }
      overlap.add_ge(to_rat(*m1), Rat(1));
      if (lp_feasible(overlap).feasible) {
        rep.intersections_are_faces = false;
        break;
      }
    }
  return rep;
}

// |det| of the ray matrix of a full-dimensional simplicial maximal cone.
inline Int multiplicity(const Fan& f, std::size_t cone_index) {
  const std::vector<int>& c = f.max_cones.at(cone_index);
  if (c.size() != f.ambient_dim)
    throw Error(errc::verification_failed, "multiplicity needs a full-dimensional simplicial cone");
  IntMatrix m(f.ambient_dim, f.ambient_dim);
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < f.ambient_dim; ++j) m.at(i, j) = f.rays[c[i]][j];
  Int d = det(m);
  if (d == 0)
    throw Error(errc::verification_failed, "multiplicity needs a full-dimensional simplicial cone");
  return abs(d);
}

}  // namespace nccr
