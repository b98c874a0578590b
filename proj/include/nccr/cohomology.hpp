// Line bundle cohomology on toric stacks from complete simplicial fans.
//
// H^i of the bundle attached to a divisor class decomposes over character
// supports: each support S contributes its lattice-point count times the
// reduced homology of the ray complex C_S in degree i-1.  Supports with
// nonvanishing homology are unions of primitive collections, which keeps the
// sweep finite; each such support also defines a forbidden region in divisor
// space (apex -sum_{rho in S} D_rho, minus directions on S, plus directions
// off S) whose lattice classes are exactly those with a character of support
// S, giving the acyclicity test.
#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <vector>

#include "nccr/class_group.hpp"
#include "nccr/simplicial.hpp"

namespace nccr {

// Minimal non-faces of the fan's ray complex, sorted by (size, lex).
inline std::vector<std::vector<int>> primitive_collections(const Fan& f) {
  std::size_t n = f.rays.size();
  if (n > 25) throw Error(errc::invalid_input, "too many rays for subset sweep");
  std::vector<std::uint64_t> cones;
  for (const std::vector<int>& c : f.max_cones) {
    std::uint64_t m = 0;
    for (int k : c) m |= 1ull << k;
    cones.push_back(m);
  }
  auto is_face = [&](std::uint64_t s) {
    for (std::uint64_t c : cones)
      if ((s & ~c) == 0) return true;
    return false;
  };
  std::vector<std::vector<int>> out;
  for (std::uint64_t s = 1; s < (1ull << n); ++s) {
    if (is_face(s)) continue;
    bool minimal = true;
    for (std::size_t v = 0; v < n && minimal; ++v)
      if ((s & (1ull << v)) && !is_face(s & ~(1ull << v))) minimal = false;
    if (!minimal) continue;
    std::vector<int> vs;
    for (std::size_t v = 0; v < n; ++v)
      if (s & (1ull << v)) vs.push_back(static_cast<int>(v));
    out.push_back(std::move(vs));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

// Nonempty supports with nonvanishing reduced homology.  Candidates are the
// unions of primitive collections; full_sweep checks every nonempty subset
// instead (small fans only), which the tests use to confirm the union rule.
inline std::vector<std::vector<int>> nonvanishing_supports(const Fan& f, bool full_sweep = false) {
  std::set<std::uint64_t> candidates;
  std::size_t n = f.rays.size();
  if (full_sweep) {
    if (n > 20) throw Error(errc::invalid_input, "too many rays for full sweep");
    for (std::uint64_t s = 1; s < (1ull << n); ++s) candidates.insert(s);
  } else {
    std::vector<std::vector<int>> pcs = primitive_collections(f);
    if (pcs.size() > 20) throw Error(errc::invalid_input, "too many primitive collections");
    std::vector<std::uint64_t> masks;
    for (const auto& pc : pcs) {
      std::uint64_t m = 0;
      for (int v : pc) m |= 1ull << v;
      masks.push_back(m);
    }
    for (std::uint64_t pick = 1; pick < (1ull << masks.size()); ++pick) {
      std::uint64_t u = 0;
      for (std::size_t k = 0; k < masks.size(); ++k)
        if (pick & (1ull << k)) u |= masks[k];
      candidates.insert(u);
    }
  }
  std::vector<std::vector<int>> out;
  for (std::uint64_t s : candidates) {
    std::vector<int> vs;
    for (std::size_t v = 0; v < n; ++v)
      if (s & (1ull << v)) vs.push_back(static_cast<int>(v));
    if (!reduced_homology(complex_restrict(f, vs)).all_zero()) out.push_back(std::move(vs));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

struct ForbiddenCone {
  std::vector<int> support;  // ascending ray indices
  IntVec apex;               // divisor vector -indicator(support)
};

inline ForbiddenCone forbidden_cone(const Fan& f, std::vector<int> support) {
  std::sort(support.begin(), support.end());
  if (reduced_homology(complex_restrict(f, support)).all_zero())
    throw Error(errc::verification_failed, "support has vanishing homology");
  IntVec apex(f.rays.size(), Int(0));
  for (int i : support) apex[i] = -1;
  return ForbiddenCone{std::move(support), std::move(apex)};
}

// Membership of a class in the forbidden region, tested in Cl tensor R: does
// some real character shift of a representative land on the apex plus
// nonnegative ray moves (negative on the support, positive off it)?
inline bool class_in_forbidden(const Fan& f, const ClassGroup& cl, const DivisorClass& c,
                               const ForbiddenCone& fc) {
  IntVec rep = cl.representative(c);
  std::size_t d = f.ambient_dim, nr = f.rays.size();
  std::vector<bool> in_s(nr, false);
  for (int i : fc.support) in_s[i] = true;
  // variables: character m (d), then one slack per ray
  LinearSystem sys(d + nr);
  for (std::size_t i = 0; i < nr; ++i) {
    RatVec row(d + nr, Rat(0));
    for (std::size_t j = 0; j < d; ++j) row[j] = Rat(f.rays[i][j]);
    row[d + i] = in_s[i] ? Rat(1) : Rat(-1);
    sys.add_eq(std::move(row), Rat(fc.apex[i] - rep[i]));
  }
  for (std::size_t i = 0; i < nr; ++i) {
    RatVec unit(d + nr, Rat(0));
    unit[d + i] = 1;
    sys.add_ge(std::move(unit), Rat(0));
  }
  return lp_feasible(sys).feasible;
}

struct Acyclicity {
  bool acyclic = true;
  std::vector<int> witness;  // offending support when not acyclic
};

// Vanishing of all higher cohomology: no support with homology in degree >= 0
// may capture the class in its forbidden region.
inline Acyclicity is_acyclic(const Fan& f, const ClassGroup& cl, const DivisorClass& c) {
  for (const std::vector<int>& s : nonvanishing_supports(f)) {
    if (!reduced_homology(complex_restrict(f, s)).nonzero_from_degree_zero()) continue;
    if (class_in_forbidden(f, cl, c, forbidden_cone(f, s))) return {false, s};
  }
  return {};
}

struct RayAcyclicity {
  bool acyclic = true;
  std::vector<int> witness;
  Rat witness_l;
};

// Acyclicity of c + l*dir for every real l >= from_l, by a joint LP with l as
// an extra variable per forbidden region.
inline RayAcyclicity ray_acyclic(const Fan& f, const ClassGroup& cl, const DivisorClass& c,
                                 const DivisorClass& dir, const Rat& from_l) {
  IntVec rep_c = cl.representative(c);
  IntVec rep_d = cl.representative(dir);
  std::size_t d = f.ambient_dim, nr = f.rays.size();
  for (const std::vector<int>& s : nonvanishing_supports(f)) {
    if (!reduced_homology(complex_restrict(f, s)).nonzero_from_degree_zero()) continue;
    ForbiddenCone fc = forbidden_cone(f, s);
    std::vector<bool> in_s(nr, false);
    for (int i : fc.support) in_s[i] = true;
    // variables: m (d), slacks (nr), l
    LinearSystem sys(d + nr + 1);
    for (std::size_t i = 0; i < nr; ++i) {
      RatVec row(d + nr + 1, Rat(0));
      for (std::size_t j = 0; j < d; ++j) row[j] = Rat(f.rays[i][j]);
      row[d + i] = in_s[i] ? Rat(1) : Rat(-1);
      row[d + nr] = Rat(rep_d[i]);
      sys.add_eq(std::move(row), Rat(fc.apex[i] - rep_c[i]));
    }
    for (std::size_t i = 0; i < nr; ++i) {
      RatVec unit(d + nr + 1, Rat(0));
      unit[d + i] = 1;
      sys.add_ge(std::move(unit), Rat(0));
    }
    RatVec lrow(d + nr + 1, Rat(0));
    lrow[d + nr] = 1;
    sys.add_ge(std::move(lrow), from_l);
    LpResult lp = lp_feasible(sys);
    if (lp.feasible) return {false, s, lp.witness[d + nr]};
  }
  return {};
}

// Cohomology dimensions H^0 .. H^ambient by direct character counting.
// Throws errc::unbounded when a support region is unbounded (non-complete fan).
inline std::vector<Int> cohomology_dims(const Fan& f, const ClassGroup& cl,
                                        const DivisorClass& c) {
  IntVec rep = cl.representative(c);
  std::size_t d = f.ambient_dim;
  std::vector<Int> h(d + 1, Int(0));

  std::vector<std::vector<int>> supports = nonvanishing_supports(f);
  supports.insert(supports.begin(), std::vector<int>{});  // global sections
  for (const std::vector<int>& s : supports) {
    BettiVector betti = reduced_homology(complex_restrict(f, s));
    if (betti.all_zero()) continue;
    std::vector<bool> in_s(f.rays.size(), false);
    for (int i : s) in_s[i] = true;
    LinearSystem sys(d);
    for (std::size_t i = 0; i < f.rays.size(); ++i) {
      if (in_s[i])
        sys.add_le(to_rat(f.rays[i]), Rat(-1) - Rat(rep[i]));
      else
        sys.add_ge(to_rat(f.rays[i]), -Rat(rep[i]));
    }
    Int count = static_cast<long>(enumerate_lattice_points(sys).size());
    if (count == 0) continue;
    for (std::size_t i = 0; i <= d; ++i)
      h[i] += count * betti.reduced(static_cast<int>(i) - 1);
  }
  return h;
}

}  // namespace nccr
