// Divisor class groups: the cokernel of M -> Z^{rays}, presented through the
// Smith normal form of the ray matrix.  Classes are recorded as a free part
// plus torsion residues; both directions (project a divisor, lift a class to a
// canonical representative divisor) are exact.
#pragma once

#include <cstddef>
#include <vector>

#include "nccr/fan.hpp"
#include "nccr/normal_forms.hpp"

namespace nccr {

struct DivisorClass {
  IntVec free;
  IntVec torsion;  // residue i lies in [0, factor_i)

  bool operator==(const DivisorClass& o) const { return free == o.free && torsion == o.torsion; }
  bool operator<(const DivisorClass& o) const {
    if (free != o.free) return lex_less(free, o.free);
    return lex_less(torsion, o.torsion);
  }
};

class ClassGroup {
public:
  explicit ClassGroup(const std::vector<IntVec>& rays) {
    if (rays.empty()) throw Error(errc::invalid_input, "class group of empty ray set");
    nrays_ = rays.size();
    ambient_ = rays[0].size();
    SnfResult r = snf(rows_matrix(rays, ambient_));
    arank_ = snf_rank(r);
    u_ = r.u;
    for (std::size_t i = 0; i < arank_; ++i) {
      if (r.s.at(i, i) > 1) {
        torsion_rows_.push_back(i);
        torsion_.push_back(r.s.at(i, i));
      }
    }
    for (std::size_t i = arank_; i < nrays_; ++i) free_rows_.push_back(i);
    // Free coordinates are only defined up to sign by the normal form; fix the
    // sign so the first nonzero entry of each defining row is positive.
    for (std::size_t i : free_rows_) {
      for (std::size_t j = 0; j < u_.cols; ++j) {
        if (u_.at(i, j) == 0) continue;
        if (u_.at(i, j) < 0)
          for (std::size_t k = 0; k < u_.cols; ++k) u_.at(i, k) = -u_.at(i, k);
        break;
      }
    }
    uinv_ = unimodular_inverse(u_);
  }

  std::size_t num_rays() const { return nrays_; }
  std::size_t rank() const { return free_rows_.size(); }
  const std::vector<Int>& torsion() const { return torsion_; }

  DivisorClass project(const IntVec& divisor) const {
    if (divisor.size() != nrays_) throw Error(errc::internal, "divisor length mismatch");
    IntVec w = mat_vec(u_, divisor);
    DivisorClass c;
    for (std::size_t i : free_rows_) c.free.push_back(w[i]);
    for (std::size_t k = 0; k < torsion_rows_.size(); ++k)
      c.torsion.push_back(floor_mod(w[torsion_rows_[k]], torsion_[k]));
    return c;
  }

  // Canonical divisor representing the class; project(representative(c)) == c.
  IntVec representative(const DivisorClass& c) const {
    checked(c);
    IntVec y(nrays_, Int(0));
    for (std::size_t k = 0; k < free_rows_.size(); ++k) y[free_rows_[k]] = c.free[k];
    for (std::size_t k = 0; k < torsion_rows_.size(); ++k)
      y[torsion_rows_[k]] = floor_mod(c.torsion[k], torsion_[k]);
    return mat_vec(uinv_, y);
  }

  DivisorClass zero() const {
    return DivisorClass{IntVec(rank(), Int(0)), IntVec(torsion_.size(), Int(0))};
  }

  bool is_zero(const DivisorClass& c) const {
    checked(c);
    return nccr::is_zero(c.free) && nccr::is_zero(c.torsion);
  }

  DivisorClass sub(const DivisorClass& a, const DivisorClass& b) const {
    checked(a);
    checked(b);
    DivisorClass c;
    c.free = vec_sub(a.free, b.free);
    for (std::size_t k = 0; k < torsion_.size(); ++k)
      c.torsion.push_back(floor_mod(a.torsion[k] - b.torsion[k], torsion_[k]));
    return c;
  }

  DivisorClass add(const DivisorClass& a, const DivisorClass& b) const {
    checked(a);
    checked(b);
    DivisorClass c;
    c.free = vec_add(a.free, b.free);
    for (std::size_t k = 0; k < torsion_.size(); ++k)
      c.torsion.push_back(floor_mod(a.torsion[k] + b.torsion[k], torsion_[k]));
    return c;
  }

  DivisorClass neg(const DivisorClass& a) const { return sub(zero(), a); }

  // Class of the ray divisor D_i.
  DivisorClass ray_class(std::size_t i) const {
    IntVec d(nrays_, Int(0));
    d[i] = 1;
    return project(d);
  }

private:
  static Int floor_mod(const Int& a, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
  }

  void checked(const DivisorClass& c) const {
    if (c.free.size() != rank() || c.torsion.size() != torsion_.size())
      throw Error(errc::internal, "class shape mismatch");
  }

  std::size_t nrays_ = 0, ambient_ = 0, arank_ = 0;
  IntMatrix u_, uinv_;
  std::vector<std::size_t> free_rows_, torsion_rows_;
  std::vector<Int> torsion_;
};

inline ClassGroup class_group(const Fan& f) { return ClassGroup(f.rays); }

// Class of an arbitrary integer divisor vector.
inline DivisorClass divisor_class(const ClassGroup& cl, const IntVec& divisor) {
  return cl.project(divisor);
}

}  // namespace nccr
