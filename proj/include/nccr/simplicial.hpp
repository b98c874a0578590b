// Simplicial complexes on fan rays and their reduced rational homology.
//
// The complex attached to a ray subset I has a face for every subset of I
// whose rays span a cone of the fan (for a simplicial fan: every subset of a
// maximal cone).  The empty face is always present; reduced homology of the
// empty complex is one unit in degree -1.
#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <vector>

#include "nccr/fan.hpp"

namespace nccr {

struct RaySubcomplex {
  std::vector<int> vertices;             // the ray subset I, ascending
  std::vector<std::vector<int>> faces;   // every face, sorted by (size, lex)
};

inline RaySubcomplex complex_restrict(const Fan& f, std::vector<int> I) {
  std::sort(I.begin(), I.end());
  I.erase(std::unique(I.begin(), I.end()), I.end());
  for (int i : I)
    if (i < 0 || static_cast<std::size_t>(i) >= f.rays.size())
      throw Error(errc::invalid_input, "ray index out of range");
  std::set<std::vector<int>> faces;
  faces.insert(std::vector<int>{});
  for (const std::vector<int>& c : f.max_cones) {
    std::vector<int> j;
    std::set_intersection(c.begin(), c.end(), I.begin(), I.end(), std::back_inserter(j));
    if (j.size() > 25) throw Error(errc::invalid_input, "cone too large for subset sweep");
    for (std::size_t m = 1; m < (1ull << j.size()); ++m) {
      std::vector<int> sub;
      for (std::size_t k = 0; k < j.size(); ++k)
        if (m & (1ull << k)) sub.push_back(j[k]);
      faces.insert(std::move(sub));
    }
  }
  RaySubcomplex out;
  out.vertices = std::move(I);
  out.faces.assign(faces.begin(), faces.end());
  std::sort(out.faces.begin(), out.faces.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

struct BettiVector {
  // b[0] is the reduced Betti number in degree -1, b[k] in degree k-1.
  std::vector<long> b;

  long reduced(int degree) const {
    std::size_t i = static_cast<std::size_t>(degree + 1);
    return i < b.size() ? b[i] : 0;
  }
  bool all_zero() const {
    for (long x : b)
      if (x != 0) return false;
    return true;
  }
  bool nonzero_from_degree_zero() const {
    for (std::size_t i = 1; i < b.size(); ++i)
      if (b[i] != 0) return true;
    return false;
  }
};

inline BettiVector reduced_homology(const RaySubcomplex& c) {
  // Group faces by dimension; index 0 holds the empty face (dimension -1).
  std::map<std::vector<int>, std::size_t> index;
  std::vector<std::vector<std::vector<int>>> by_dim;
  for (const std::vector<int>& f : c.faces) {
    std::size_t d = f.size();  // dimension + 1
    if (by_dim.size() <= d) by_dim.resize(d + 1);
    index[f] = by_dim[d].size();
    by_dim[d].push_back(f);
  }
  if (by_dim.empty() || by_dim[0].empty())
    throw Error(errc::internal, "complex misses the empty face");

  // rank of the boundary map from dimension k-1 faces (size k) down.
  auto boundary_rank = [&](std::size_t k) -> std::size_t {
    if (k == 0 || k >= by_dim.size() || by_dim[k].empty()) return 0;
    IntMatrix m(by_dim[k - 1].size(), by_dim[k].size());
    for (std::size_t j = 0; j < by_dim[k].size(); ++j) {
      const std::vector<int>& f = by_dim[k][j];
      int sign = 1;
      for (std::size_t drop = 0; drop < f.size(); ++drop) {
        std::vector<int> sub;
        for (std::size_t t = 0; t < f.size(); ++t)
          if (t != drop) sub.push_back(f[t]);
        m.at(index.at(sub), j) = sign;
        sign = -sign;
      }
    }
    return int_rank(m);
  };

  BettiVector out;
  out.b.resize(by_dim.size());
  for (std::size_t k = 0; k < by_dim.size(); ++k) {
    long dim_k = static_cast<long>(by_dim[k].size());
    long rk = static_cast<long>(boundary_rank(k));
    long rk1 = static_cast<long>(boundary_rank(k + 1));
    out.b[k] = dim_k - rk - rk1;
    if (out.b[k] < 0) throw Error(errc::internal, "negative Betti number");
  }
  return out;
}

}  // namespace nccr
