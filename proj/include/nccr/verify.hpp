// Re-checks a stored certificate: every constructed object is rebuilt from
// the input polytope and seed, compared field-by-field against the stored
// data, and every verdict is recomputed.  A certificate passes only if all
// fields reproduce and every verdict is true.
#pragma once

#include <string>

#include "nccr/json_io.hpp"

namespace nccr {

struct VerifyResult {
  bool ok = true;
  std::string detail;  // first mismatch or failure, empty when ok
};

namespace detail {

inline bool same_classes(const std::vector<DivisorClass>& a,
                         const std::vector<DivisorClass>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

}  // namespace detail

inline VerifyResult verify_certificate(const ParsedCertificate& pc) {
  auto fail = [](std::string msg) { return VerifyResult{false, std::move(msg)}; };
  try {
    const LatticePolytope& input = pc.input;

    // the stored pair must be among the admissible radon candidates, with the
    // stored crossing point
    std::vector<PlacementData> cands = radon_pair(input);
    const PlacementData* match = nullptr;
    for (const PlacementData& c : cands)
      if (c.w1_index == pc.placement.w1_index && c.w2_index == pc.placement.w2_index) {
        match = &c;
        break;
      }
    if (!match) return fail("stored vertex pair is not an admissible radon pair");
    if (match->hyperplane != pc.placement.hyperplane)
      return fail("stored hyperplane indices do not match");
    if (match->z != pc.placement.z) return fail("stored crossing point does not match");

    PlacementData pd = *match;
    complete_placement(input, pd, pc.placement.u);
    if (!(pd.transform == pc.placement.transform)) return fail("stored transform does not match");
    if (pd.corrected != pc.placement.corrected)
      return fail("stored placement_corrected flag does not match");
    if (pd.placed != pc.placement.placed) return fail("stored placed vertices do not match");

    PipelineConfig cfg;
    cfg.seed = pc.seed;
    QConstruction qc = construct_Q(input, pd, cfg);
    if (qc.k0 != pc.k0) return fail("stored k0 does not match the minimal k0");
    if (qc.q.ambient_dim() != pc.q.ambient_dim() || qc.q.vertices() != pc.q.vertices())
      return fail("stored Q does not match");

    Fan sigma = build_sigma(qc, input);
    if (sigma.ambient_dim != pc.sigma.ambient_dim || sigma.rays != pc.sigma.rays ||
        sigma.max_cones != pc.sigma.max_cones)
      return fail("stored fan does not match");

    WeightData w = weights(sigma);
    if (w.r != pc.r) return fail("stored r does not match");
    if (w.alpha != pc.alpha) return fail("stored alpha does not match");

    ClassGroup cl(sigma.rays);
    ImageMap imap(cl, w);
    RatVec off = choose_generic_p(imap, cfg);
    if (off != pc.p) return fail("stored offset p does not match");

    ExceptionalSet s = enumerate_S(cl, imap, off);
    if (!detail::same_classes(s.classes, pc.collection))
      return fail("stored collection does not match");

    Verdicts vd;
    FanReport rep = verify_fan(sigma);
    vd.fan_ok = rep.ok() && sigma.max_cones.size() == 2 * input.ambient_dim() + 2;
    std::vector<std::vector<int>> pcs = primitive_collections(sigma);
    std::vector<int> iplus{0, 1}, iminus;
    for (int i = 2; i <= static_cast<int>(input.ambient_dim()) + 2; ++i) iminus.push_back(i);
    vd.primitive_collections_ok = pcs.size() == 2 && pcs[0] == iplus && pcs[1] == iminus;
    vd.weights_ok = verify_weights(sigma, w);
    vd.strong_exceptional_ok = check_strong_exceptional(sigma, cl, pc.collection).ok;
    Int mult_sum = 0;
    for (std::size_t i = 0; i < sigma.max_cones.size(); ++i) mult_sum += multiplicity(sigma, i);
    vd.k0_rank_ok = Int(static_cast<long>(pc.collection.size())) == mult_sum;
    vd.koszul_window_ok =
        koszul_window_check(sigma, cl, imap, off, pc.collection, cfg.koszul_radius);
    vd.tilting_vanishing_ok = check_tilting_vanishing(sigma, cl, pc.collection).ok;

    if (vd.fan_ok != pc.verdicts.fan_ok ||
        vd.primitive_collections_ok != pc.verdicts.primitive_collections_ok ||
        vd.weights_ok != pc.verdicts.weights_ok ||
        vd.strong_exceptional_ok != pc.verdicts.strong_exceptional_ok ||
        vd.k0_rank_ok != pc.verdicts.k0_rank_ok ||
        vd.koszul_window_ok != pc.verdicts.koszul_window_ok ||
        vd.tilting_vanishing_ok != pc.verdicts.tilting_vanishing_ok ||
        vd.certified() != pc.stored_certified)
      return fail("stored verdicts do not reproduce");
    if (!vd.certified()) return fail("certificate is not certified");

    std::vector<int> bottom;
    for (int i = 0; i <= static_cast<int>(input.ambient_dim()) + 1; ++i) bottom.push_back(i);
    DescentData desc =
        descend_classes(qc.q, sigma, cl, pc.collection, bottom, input, cfg.vertex_cap);
    if (!detail::same_classes(desc.classes, pc.descended))
      return fail("stored descended classes do not match");
  } catch (const Error& e) {
    if (e.code() == errc::invalid_input) throw;
    return fail(std::string("recheck failed: ") + e.what());
  }
  return VerifyResult{};
}

}  // namespace nccr
