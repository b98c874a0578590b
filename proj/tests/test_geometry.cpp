#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "nccr/class_group.hpp"
#include "nccr/fan.hpp"
#include "nccr/polytope.hpp"
#include "oracles.hpp"

using namespace nccr;

namespace {

LatticePolytope unit_square() { return LatticePolytope(2, {{0, 0}, {1, 0}, {0, 1}, {1, 1}}); }

LatticePolytope reflexive_triangle() {
  return LatticePolytope(2, {{-1, -1}, {2, -1}, {-1, 2}});
}

LatticePolytope cube() {
  std::vector<IntVec> v;
  for (int x : {0, 1})
    for (int y : {0, 1})
      for (int z : {0, 1}) v.push_back(IntVec{x, y, z});
  return LatticePolytope(3, v);
}

bool code_is(const Error& e, errc c) { return e.code() == c; }

}  // namespace

TEST_CASE("polytope validation") {
  REQUIRE_THROWS_AS(LatticePolytope(2, {}), Error);
  REQUIRE_THROWS_AS(LatticePolytope(0, {{}}), Error);
  REQUIRE_THROWS_AS(LatticePolytope(2, {{0, 0}, {0, 0}}), Error);          // duplicate
  REQUIRE_THROWS_AS(LatticePolytope(2, {{0, 0}, {1}}), Error);             // ragged
  REQUIRE_THROWS_AS(LatticePolytope(1, {{0}, {2}, {1}}), Error);           // midpoint
  REQUIRE_THROWS_AS(LatticePolytope(2, {{0, 0}, {2, 0}, {1, 0}}), Error);  // collinear middle
  // centroid of a triangle is not a vertex
  bool threw = false;
  try {
    LatticePolytope(2, {{0, 0}, {3, 0}, {0, 3}, {1, 1}});
  } catch (const Error& e) {
    threw = code_is(e, errc::invalid_input);
  }
  REQUIRE(threw);

  LatticePolytope sq = unit_square();
  REQUIRE(sq.num_vertices() == 4);
  REQUIRE(sq.dim() == 2);
  LatticePolytope seg(2, {{1, 1}, {3, 2}});
  REQUIRE(seg.dim() == 1);  // valid but not full-dimensional
}

TEST_CASE("facets of standard polytopes") {
  LatticePolytope sq = unit_square();
  std::vector<Facet> fs = facets(sq);
  REQUIRE(fs.size() == 4);
  for (const Facet& f : fs) {
    REQUIRE(content(f.normal) == 1);
    REQUIRE(f.vertex_set.size() == 2);
    // outward: every vertex satisfies normal . v <= offset, facet vertices with equality
    for (std::size_t i = 0; i < sq.num_vertices(); ++i) {
      Int s = dot(f.normal, sq.vertex(i));
      REQUIRE(s <= f.offset);
      bool on = std::find(f.vertex_set.begin(), f.vertex_set.end(), static_cast<int>(i)) !=
                f.vertex_set.end();
      REQUIRE((s == f.offset) == on);
    }
  }
  REQUIRE(facets(cube()).size() == 6);
  REQUIRE(facets(reflexive_triangle()).size() == 3);

  LatticePolytope seg(2, {{0, 0}, {1, 0}});
  REQUIRE_THROWS_AS(facets(seg), Error);  // not full-dimensional
}

TEST_CASE("face lattice") {
  LatticePolytope sq = unit_square();
  REQUIRE(faces(sq, -1) == std::vector<std::vector<int>>{{}});
  REQUIRE(faces(sq, 0).size() == 4);
  REQUIRE(faces(sq, 1).size() == 4);
  REQUIRE(faces(sq, 2) == std::vector<std::vector<int>>{{0, 1, 2, 3}});

  LatticePolytope c = cube();
  REQUIRE(faces(c, 0).size() == 8);
  REQUIRE(faces(c, 1).size() == 12);
  REQUIRE(faces(c, 2).size() == 6);

  // edges of the square avoid the diagonals
  std::set<std::vector<int>> edges;
  for (const auto& e : faces(sq, 1)) edges.insert(e);
  REQUIRE(edges.count({0, 1}) == 1);
  REQUIRE(edges.count({0, 2}) == 1);
  REQUIRE(edges.count({1, 3}) == 1);
  REQUIRE(edges.count({2, 3}) == 1);
  REQUIRE(edges.count({0, 3}) == 0);
  REQUIRE(edges.count({1, 2}) == 0);
}

TEST_CASE("reflexivity") {
  REQUIRE(!is_reflexive(unit_square()));  // origin is a vertex, not interior
  REQUIRE(is_reflexive(reflexive_triangle()));
  LatticePolytope sq2(2, {{1, 1}, {-1, 1}, {1, -1}, {-1, -1}});
  REQUIRE(is_reflexive(sq2));
  LatticePolytope big(2, {{2, 2}, {-2, 2}, {2, -2}, {-2, -2}});
  REQUIRE(!is_reflexive(big));
}

TEST_CASE("cones over polytopes") {
  ConeT c = cone_over(unit_square());
  REQUIRE(c.ambient_dim == 3);
  REQUIRE(c.rays.size() == 4);
  REQUIRE(is_strongly_convex(c));
  std::optional<IntVec> w = is_gorenstein(c);
  REQUIRE(w.has_value());
  REQUIRE(*w == (IntVec{0, 0, 1}));

  // a non-Gorenstein example: rays of a cone whose generators sit at
  // different heights against every candidate functional
  ConeT ng(2, {IntVec{1, 0}, IntVec{1, 3}});
  std::optional<IntVec> nw = is_gorenstein(ng);
  // primitive generators (1,0),(1,3): m=(1,0) gives 1 and 1 -> Gorenstein
  REQUIRE(nw.has_value());
  ConeT ng2(2, {IntVec{2, -1}, IntVec{0, 1}});
  // <m,(2,-1)> = 1, <m,(0,1)> = 1 forces m = (1,1)/... 2a - b = 1, b = 1 -> a = 1
  REQUIRE(is_gorenstein(ng2).has_value());

  // antipodal generators are rejected at construction
  REQUIRE_THROWS_AS(ConeT(2, {IntVec{1, 0}, IntVec{-1, 0}}), Error);
  // pairwise non-parallel rays spanning the whole plane: not strongly convex
  ConeT whole(2, {IntVec{1, 0}, IntVec{-1, 1}, IntVec{-1, -1}});
  REQUIRE(!is_strongly_convex(whole));
}

TEST_CASE("cone h-representation and membership") {
  ConeT c = cone_over(unit_square());
  ConeHRep h = cone_hrep(c);
  REQUIRE(h.eqs.empty());
  REQUIRE(h.ineqs.size() == 4);
  REQUIRE(cone_contains(h, IntVec{0, 0, 0}));
  REQUIRE(cone_contains(h, IntVec{1, 1, 2}));
  REQUIRE(cone_contains_interior(h, IntVec{1, 1, 2}));
  REQUIRE(cone_contains(h, IntVec{1, 0, 1}));
  REQUIRE(!cone_contains_interior(h, IntVec{1, 0, 1}));
  REQUIRE(!cone_contains(h, IntVec{0, 0, -1}));
  REQUIRE(!cone_contains(h, IntVec{2, 0, 1}));

  // lower-dimensional cone: one span equality
  ConeT ray(2, {IntVec{1, 1}});
  ConeHRep hr = cone_hrep(ray);
  REQUIRE(hr.eqs.size() == 1);
  REQUIRE(cone_contains(hr, IntVec{3, 3}));
  REQUIRE(!cone_contains(hr, IntVec{3, 2}));
  REQUIRE(!cone_contains(hr, IntVec{-1, -1}));
}

TEST_CASE("face supporting characters") {
  ConeT c = cone_over(unit_square());
  // {0,1} spans the x-edge face of the square cone
  IntVec m = face_supporting_character(c, {0, 1});
  REQUIRE(dot(m, c.rays[0]) == 0);
  REQUIRE(dot(m, c.rays[1]) == 0);
  REQUIRE(dot(m, c.rays[2]) > 0);
  REQUIRE(dot(m, c.rays[3]) > 0);
  // improper face: zero functional
  REQUIRE(face_supporting_character(c, {0, 1, 2, 3}) == (IntVec{0, 0, 0}));
  // the diagonal pair spans no face
  bool threw = false;
  try {
    face_supporting_character(c, {0, 3});
  } catch (const Error& e) {
    threw = code_is(e, errc::verification_failed);
  }
  REQUIRE(threw);
}

TEST_CASE("wedge construction") {
  LatticePolytope tri(2, {{0, 0}, {1, 0}, {0, 1}});
  std::vector<Facet> fs = facets(tri);
  // wedge over each facet has 4 vertices in one higher dimension and a
  // Gorenstein cone when the input cone is Gorenstein
  for (std::size_t i = 0; i < fs.size(); ++i) {
    LatticePolytope w = wedge(tri, i);
    REQUIRE(w.ambient_dim() == 3);
    REQUIRE(w.num_vertices() == 4);
    REQUIRE(w.dim() == 3);
    for (std::size_t k = 0; k < tri.num_vertices(); ++k) {
      bool on_facet = std::find(fs[i].vertex_set.begin(), fs[i].vertex_set.end(),
                                static_cast<int>(k)) != fs[i].vertex_set.end();
      // base copy at height 0 always present
      IntVec base = tri.vertex(k);
      base.push_back(0);
      bool found_base = false, found_lift = false;
      for (const IntVec& v : w.vertices()) {
        if (v == base) found_base = true;
        IntVec lift = tri.vertex(k);
        lift.push_back(fs[i].offset - dot(fs[i].normal, tri.vertex(k)));
        if (!on_facet && v == lift) found_lift = true;
      }
      REQUIRE(found_base);
      if (!on_facet) REQUIRE(found_lift);
    }
  }
}

TEST_CASE("lattice equivalence") {
  LatticePolytope sq = unit_square();
  // GL(2,Z) shear plus a shift
  IntMatrix a = IntMatrix::from_rows({{1, 1}, {0, 1}});
  std::vector<IntVec> imgs;
  for (const IntVec& v : sq.vertices()) {
    IntVec w = mat_vec(a, v);
    w[0] += 5;
    w[1] -= 2;
    imgs.push_back(w);
  }
  LatticePolytope sheared(2, imgs);
  std::optional<AffineMap> map = lattice_equivalent(sq, sheared);
  REQUIRE(map.has_value());
  // the returned map carries P onto Q
  std::set<IntVec> want(imgs.begin(), imgs.end());
  std::set<IntVec> got;
  for (const IntVec& v : sq.vertices()) got.insert(vec_add(mat_vec(map->a, v), map->t));
  REQUIRE(got == want);
  REQUIRE(abs(det(map->a)) == 1);

  // scaling is not an equivalence
  LatticePolytope dbl(2, {{0, 0}, {2, 0}, {0, 2}, {2, 2}});
  REQUIRE(!lattice_equivalent(sq, dbl).has_value());
  // vertex-count mismatch
  LatticePolytope tri(2, {{0, 0}, {1, 0}, {0, 1}});
  REQUIRE(!lattice_equivalent(sq, tri).has_value());
  // cap exhaustion reported as a search failure
  bool threw = false;
  try {
    lattice_equivalent(sq, sheared, 3);
  } catch (const Error& e) {
    threw = code_is(e, errc::search_exhausted);
  }
  REQUIRE(threw);
}

TEST_CASE("unimodular placement at height minus one") {
  LatticePolytope sq = unit_square();
  Placement pl = unimodular_placement(sq, 0);
  REQUIRE(pl.u == (IntVec{1, 1}));
  REQUIRE(pl.transform == IntMatrix::from_rows({{1, 0}, {-1, 1}}));
  REQUIRE(abs(det(pl.transform)) == 1);
  REQUIRE(mat_vec(pl.transform, pl.u) == (IntVec{1, 0}));
  REQUIRE(pl.placed.vertex(0) == (IntVec{0, 0, -1}));
  REQUIRE(pl.placed.vertex(1) == (IntVec{1, -1, -1}));
  REQUIRE(pl.placed.vertex(2) == (IntVec{0, 1, -1}));
  REQUIRE(pl.placed.vertex(3) == (IntVec{1, 0, -1}));

  // override with another interior direction
  Placement pl2 = unimodular_placement(sq, 0, IntVec{1, 2});
  REQUIRE(pl2.u == (IntVec{1, 2}));
  REQUIRE(mat_vec(pl2.transform, pl2.u) == (IntVec{1, 0}));

  // direction along an edge is rejected
  bool threw = false;
  try {
    unimodular_placement(sq, 0, IntVec{1, 0});
  } catch (const Error& e) {
    threw = code_is(e, errc::verification_failed);
  }
  REQUIRE(threw);

  std::vector<IntVec> dirs = interior_direction_candidates(sq, 0, 2);
  REQUIRE(!dirs.empty());
  REQUIRE(dirs[0] == (IntVec{1, 1}));  // smallest norm, lex least
  for (const IntVec& d : dirs) {
    REQUIRE(d[0] > 0);
    REQUIRE(d[1] > 0);
    REQUIRE(content(d) == 1);
  }
}

TEST_CASE("fan construction and verification") {
  // face fan over conv{(-1,-1),(2,-1),(-1,2)}: the 1/3(1,1) quotient fan,
  // complete and simplicial with every cone of index 3
  Fan quot = face_fan(reflexive_triangle());
  REQUIRE(quot.rays.size() == 3);
  REQUIRE(quot.max_cones.size() == 3);
  FanReport rep = verify_fan(quot);
  REQUIRE(rep.simplicial);
  REQUIRE(rep.complete);
  REQUIRE(rep.intersections_are_faces);
  REQUIRE(rep.ok());
  for (std::size_t i = 0; i < 3; ++i) REQUIRE(multiplicity(quot, i) == 3);

  // cube face fan: complete but not simplicial
  LatticePolytope cc(3, {{1, 1, 1},  {-1, 1, 1},  {1, -1, 1},  {-1, -1, 1},
                         {1, 1, -1}, {-1, 1, -1}, {1, -1, -1}, {-1, -1, -1}});
  Fan cf = face_fan(cc);
  REQUIRE(cf.max_cones.size() == 6);
  FanReport crep = verify_fan(cf);
  REQUIRE(!crep.simplicial);
  REQUIRE(crep.complete);
  REQUIRE(crep.intersections_are_faces);

  // a fan missing one cone is not complete
  Fan partial(2, quot.rays, {{0, 1}, {1, 2}});
  FanReport prep = verify_fan(partial);
  REQUIRE(prep.simplicial);
  REQUIRE(!prep.complete);

  // face fan needs the origin strictly inside
  bool threw = false;
  try {
    face_fan(unit_square());
  } catch (const Error& e) {
    threw = code_is(e, errc::verification_failed);
  }
  REQUIRE(threw);

  // invalid fans: repeated ray, non-primitive ray, nested cones
  REQUIRE_THROWS_AS(Fan(2, {IntVec{1, 0}, IntVec{1, 0}}, {{0, 1}}), Error);
  REQUIRE_THROWS_AS(Fan(2, {IntVec{2, 0}, IntVec{0, 1}}, {{0, 1}}), Error);
  REQUIRE_THROWS_AS(Fan(2, {IntVec{1, 0}, IntVec{0, 1}}, {{0, 1}, {0}}), Error);

  // multiplicity: the P(1,1,2) cone has index 2
  Fan wp(2, {IntVec{1, 0}, IntVec{0, 1}, IntVec{-1, -2}}, {{0, 1}, {1, 2}, {0, 2}});
  REQUIRE(verify_fan(wp).ok());
  REQUIRE(multiplicity(wp, 0) == 1);
  REQUIRE(multiplicity(wp, 1) == 1);
  REQUIRE(multiplicity(wp, 2) == 2);
}

TEST_CASE("class groups") {
  // projective plane: rank 1, no torsion, all rays in one class
  Fan p2(2, {IntVec{1, 0}, IntVec{0, 1}, IntVec{-1, -1}}, {{0, 1}, {1, 2}, {0, 2}});
  ClassGroup cl(p2.rays);
  REQUIRE(cl.rank() == 1);
  REQUIRE(cl.torsion().empty());
  DivisorClass a = cl.ray_class(0);
  REQUIRE(a == cl.ray_class(1));
  REQUIRE(a == cl.ray_class(2));
  REQUIRE(!cl.is_zero(a));
  // the anticanonical class is three times a ray class
  DivisorClass anti = cl.project(IntVec{1, 1, 1});
  REQUIRE(anti == cl.add(a, cl.add(a, a)));
  // principal divisors project to zero
  for (int k = 0; k < 2; ++k) {
    IntVec principal;
    for (const IntVec& r : p2.rays) principal.push_back(r[k]);
    REQUIRE(cl.is_zero(cl.project(principal)));
  }
  // representative round trip
  std::mt19937_64 g(5);
  for (int t = 0; t < 30; ++t) {
    DivisorClass c{IntVec{oracle::rnd(g, -8, 8)}, {}};
    REQUIRE(cl.project(cl.representative(c)) == c);
  }

  // pure torsion: the quadric cone quotient
  ClassGroup tor({IntVec{1, 0}, IntVec{1, 2}});
  REQUIRE(tor.rank() == 0);
  REQUIRE(tor.torsion() == std::vector<Int>{2});
  DivisorClass t0 = tor.ray_class(0);
  REQUIRE(!tor.is_zero(t0));
  REQUIRE(tor.is_zero(tor.add(t0, t0)));
  REQUIRE(tor.project(tor.representative(t0)) == t0);

  // conifold cone: rank 1, opposite ray-class pairs
  ClassGroup conifold(
      {IntVec{0, 0, 1}, IntVec{1, 0, 1}, IntVec{1, -1, 1}, IntVec{0, 1, 1}});
  REQUIRE(conifold.rank() == 1);
  REQUIRE(conifold.torsion().empty());
  REQUIRE(conifold.ray_class(0) == conifold.ray_class(1));
  REQUIRE(conifold.ray_class(2) == conifold.ray_class(3));
  REQUIRE(conifold.is_zero(conifold.add(conifold.ray_class(0), conifold.ray_class(2))));
  REQUIRE(!conifold.is_zero(conifold.ray_class(0)));

  // structure agrees with the minor-gcd smith oracle on random ray sets
  for (int t = 0; t < 25; ++t) {
    std::size_t d = static_cast<std::size_t>(oracle::rnd(g, 1, 3));
    // in one dimension only two distinct primitive rays exist
    std::size_t nr = static_cast<std::size_t>(oracle::rnd(g, 2, d == 1 ? 2 : 4));
    std::vector<IntVec> rays;
    std::set<IntVec> seen;
    for (std::size_t i = 0; i < nr; ++i) {
      IntVec r(d);
      do {
        for (std::size_t j = 0; j < d; ++j) r[j] = oracle::rnd(g, -4, 4);
      } while (is_zero(r) || !seen.insert(primitive(r)).second);
      rays.push_back(primitive(r));
    }
    ClassGroup c(rays);
    IntMatrix m(nr, d);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < d; ++j) m.at(i, j) = rays[i][j];
    std::vector<Int> diag = oracle::smith_diagonal(m);
    std::vector<Int> nontrivial;
    for (const Int& x : diag)
      if (x > 1) nontrivial.push_back(x);
    REQUIRE(c.torsion() == nontrivial);
    REQUIRE(c.rank() == nr - diag.size());
    // random project/representative round trips
    for (int tt = 0; tt < 5; ++tt) {
      IntVec dv(nr);
      for (std::size_t i = 0; i < nr; ++i) dv[i] = oracle::rnd(g, -6, 6);
      DivisorClass cls = c.project(dv);
      REQUIRE(c.project(c.representative(cls)) == cls);
    }
  }
}
