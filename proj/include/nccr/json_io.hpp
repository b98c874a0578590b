// JSON schemas and canonical serialization.  Output objects rely on the
// library's sorted-key representation and rationals are always reduced
// "numerator/denominator" strings, so equal data serializes byte-identically.
// Parsers are strict: every object must carry exactly the expected keys.
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "nccr/pipeline.hpp"

namespace nccr {

using Json = nlohmann::json;

namespace detail {

inline void require_keys(const Json& j, std::initializer_list<const char*> keys,
                         const char* what) {
  if (!j.is_object())
    throw Error(errc::invalid_input, std::string(what) + ": expected an object");
  std::size_t found = 0;
  for (const char* k : keys) {
    if (!j.contains(k))
      throw Error(errc::invalid_input, std::string(what) + ": missing key " + k);
    ++found;
  }
  if (j.size() != found)
    throw Error(errc::invalid_input, std::string(what) + ": unexpected extra keys");
}

}  // namespace detail

inline Json int_to_json(const Int& v) {
  if (!v.fits_slong_p()) throw Error(errc::internal, "integer exceeds certificate range");
  return v.get_si();
}

inline Int json_to_int(const Json& j, const char* what = "integer") {
  if (!j.is_number_integer())
    throw Error(errc::invalid_input, std::string(what) + ": expected an integer");
  return Int(j.get<long>());
}

inline Json ivec_to_json(const IntVec& v) {
  Json a = Json::array();
  for (const Int& x : v) a.push_back(int_to_json(x));
  return a;
}

inline IntVec json_to_ivec(const Json& j, const char* what = "integer vector") {
  if (!j.is_array())
    throw Error(errc::invalid_input, std::string(what) + ": expected an array");
  IntVec v;
  for (const Json& x : j) v.push_back(json_to_int(x, what));
  return v;
}

inline Json rvec_to_json(const RatVec& v) {
  Json a = Json::array();
  for (const Rat& x : v) a.push_back(rat_str(x));
  return a;
}

inline RatVec json_to_rvec(const Json& j, const char* what = "rational vector") {
  if (!j.is_array())
    throw Error(errc::invalid_input, std::string(what) + ": expected an array");
  RatVec v;
  for (const Json& x : j) {
    if (!x.is_string())
      throw Error(errc::invalid_input, std::string(what) + ": expected rational strings");
    v.push_back(parse_rat(x.get<std::string>()));
  }
  return v;
}

inline Json polytope_to_json(const LatticePolytope& p) {
  Json j;
  j["ambient_dim"] = p.ambient_dim();
  Json verts = Json::array();
  for (const IntVec& v : p.vertices()) verts.push_back(ivec_to_json(v));
  j["vertices"] = verts;
  return j;
}

inline LatticePolytope json_to_polytope(const Json& j) {
  detail::require_keys(j, {"ambient_dim", "vertices"}, "polytope");
  Int amb = json_to_int(j["ambient_dim"], "polytope.ambient_dim");
  if (amb <= 0 || amb > 64)
    throw Error(errc::invalid_input, "polytope.ambient_dim out of range");
  if (!j["vertices"].is_array())
    throw Error(errc::invalid_input, "polytope.vertices: expected an array");
  std::vector<IntVec> verts;
  for (const Json& v : j["vertices"]) verts.push_back(json_to_ivec(v, "polytope.vertices"));
  return LatticePolytope(static_cast<std::size_t>(amb.get_si()), verts);
}

inline Json fan_to_json(const Fan& f) {
  Json j;
  j["ambient_dim"] = f.ambient_dim;
  Json rays = Json::array();
  for (const IntVec& r : f.rays) rays.push_back(ivec_to_json(r));
  j["rays"] = rays;
  Json cones = Json::array();
  for (const std::vector<int>& c : f.max_cones) cones.push_back(c);
  j["max_cones"] = cones;
  return j;
}

inline Fan json_to_fan(const Json& j) {
  detail::require_keys(j, {"ambient_dim", "max_cones", "rays"}, "fan");
  Int amb = json_to_int(j["ambient_dim"], "fan.ambient_dim");
  if (amb <= 0 || amb > 64) throw Error(errc::invalid_input, "fan.ambient_dim out of range");
  if (!j["rays"].is_array() || !j["max_cones"].is_array())
    throw Error(errc::invalid_input, "fan: rays and max_cones must be arrays");
  std::vector<IntVec> rays;
  for (const Json& r : j["rays"]) rays.push_back(json_to_ivec(r, "fan.rays"));
  std::vector<std::vector<int>> cones;
  for (const Json& c : j["max_cones"]) {
    if (!c.is_array()) throw Error(errc::invalid_input, "fan.max_cones: expected arrays");
    std::vector<int> cone;
    for (const Json& x : c) {
      Int v = json_to_int(x, "fan.max_cones");
      if (v < 0 || v >= Int(static_cast<long>(rays.size())))
        throw Error(errc::invalid_input, "fan.max_cones: ray index out of range");
      cone.push_back(static_cast<int>(v.get_si()));
    }
    cones.push_back(cone);
  }
  return Fan(static_cast<std::size_t>(amb.get_si()), rays, cones);
}

inline Json class_to_json(const DivisorClass& c) {
  Json j;
  j["free"] = ivec_to_json(c.free);
  j["torsion"] = ivec_to_json(c.torsion);
  return j;
}

inline DivisorClass json_to_class(const Json& j) {
  detail::require_keys(j, {"free", "torsion"}, "class");
  return DivisorClass{json_to_ivec(j["free"], "class.free"),
                      json_to_ivec(j["torsion"], "class.torsion")};
}

inline Json classes_to_json(const std::vector<DivisorClass>& cs) {
  Json a = Json::array();
  for (const DivisorClass& c : cs) a.push_back(class_to_json(c));
  return a;
}

inline std::vector<DivisorClass> json_to_classes(const Json& j, const char* what) {
  if (!j.is_array())
    throw Error(errc::invalid_input, std::string(what) + ": expected an array");
  std::vector<DivisorClass> cs;
  for (const Json& c : j) cs.push_back(json_to_class(c));
  return cs;
}

inline Json matrix_to_json(const IntMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows; ++i) a.push_back(ivec_to_json(m.row(i)));
  return a;
}

inline IntMatrix json_to_matrix(const Json& j, const char* what) {
  if (!j.is_array() || j.empty())
    throw Error(errc::invalid_input, std::string(what) + ": expected a nonempty array");
  std::vector<IntVec> rows;
  for (const Json& r : j) rows.push_back(json_to_ivec(r, what));
  for (const IntVec& r : rows)
    if (r.size() != rows[0].size())
      throw Error(errc::invalid_input, std::string(what) + ": ragged matrix");
  return IntMatrix::from_rows(rows);
}

inline Json certificate_to_json(const Certificate& cert) {
  Json j;
  j["input"] = polytope_to_json(cert.input);

  Json pl;
  Json hyp = Json::array();
  for (std::size_t k : cert.placement.hyperplane) hyp.push_back(k);
  pl["hyperplane"] = hyp;
  pl["k0"] = cert.qc.k0;
  Json placed = Json::array();
  for (const IntVec& v : cert.placement.placed) placed.push_back(ivec_to_json(v));
  pl["placed_vertices"] = placed;
  pl["placement_corrected"] = cert.placement.corrected;
  pl["transform"] = matrix_to_json(cert.placement.transform);
  pl["u"] = ivec_to_json(cert.placement.u);
  pl["w1_index"] = cert.placement.w1_index;
  pl["w2_index"] = cert.placement.w2_index;
  pl["z"] = rvec_to_json(cert.placement.z);
  j["placement"] = pl;

  j["q"] = polytope_to_json(cert.qc.q);
  j["sigma"] = fan_to_json(cert.sigma);
  j["r"] = rvec_to_json(cert.w.r);
  j["alpha"] = rvec_to_json(cert.w.alpha);
  j["p"] = rvec_to_json(cert.p);
  j["collection"] = classes_to_json(cert.collection.classes);

  Json v;
  v["certified"] = cert.verdicts.certified();
  v["fan_ok"] = cert.verdicts.fan_ok;
  v["k0_rank_ok"] = cert.verdicts.k0_rank_ok;
  v["koszul_window_ok"] = cert.verdicts.koszul_window_ok;
  v["primitive_collections_ok"] = cert.verdicts.primitive_collections_ok;
  v["strong_exceptional_ok"] = cert.verdicts.strong_exceptional_ok;
  v["tilting_vanishing_ok"] = cert.verdicts.tilting_vanishing_ok;
  v["weights_ok"] = cert.verdicts.weights_ok;
  j["verdicts"] = v;

  j["descended"] = classes_to_json(cert.descended.classes);
  j["seed"] = cert.seed;
  return j;
}

// The parsed form used by the re-checker: raw fields, no derived data.
struct ParsedCertificate {
  LatticePolytope input;
  PlacementData placement;
  long k0 = 0;
  LatticePolytope q;
  Fan sigma;
  RatVec r, alpha, p;
  std::vector<DivisorClass> collection;
  Verdicts verdicts;
  bool stored_certified = false;
  std::vector<DivisorClass> descended;
  std::uint64_t seed = 0;
};

inline ParsedCertificate certificate_from_json(const Json& j) {
  detail::require_keys(j,
                       {"alpha", "collection", "descended", "input", "p", "placement", "q",
                        "r", "seed", "sigma", "verdicts"},
                       "certificate");
  LatticePolytope input = json_to_polytope(j["input"]);

  const Json& pl = j["placement"];
  detail::require_keys(pl,
                       {"hyperplane", "k0", "placed_vertices", "placement_corrected",
                        "transform", "u", "w1_index", "w2_index", "z"},
                       "placement");
  PlacementData pd;
  auto idx = [&](const Json& x, const char* what) {
    Int v = json_to_int(x, what);
    if (v < 0 || v >= Int(static_cast<long>(input.num_vertices())))
      throw Error(errc::invalid_input, std::string(what) + ": vertex index out of range");
    return static_cast<std::size_t>(v.get_si());
  };
  pd.w1_index = idx(pl["w1_index"], "placement.w1_index");
  pd.w2_index = idx(pl["w2_index"], "placement.w2_index");
  if (!pl["hyperplane"].is_array())
    throw Error(errc::invalid_input, "placement.hyperplane: expected an array");
  for (const Json& x : pl["hyperplane"]) pd.hyperplane.push_back(idx(x, "placement.hyperplane"));
  pd.z = json_to_rvec(pl["z"], "placement.z");
  pd.transform = json_to_matrix(pl["transform"], "placement.transform");
  pd.u = json_to_ivec(pl["u"], "placement.u");
  if (!pl["placement_corrected"].is_boolean())
    throw Error(errc::invalid_input, "placement.placement_corrected: expected a boolean");
  pd.corrected = pl["placement_corrected"].get<bool>();
  if (!pl["placed_vertices"].is_array())
    throw Error(errc::invalid_input, "placement.placed_vertices: expected an array");
  for (const Json& v : pl["placed_vertices"])
    pd.placed.push_back(json_to_ivec(v, "placement.placed_vertices"));
  pd.order.push_back(pd.w1_index);
  pd.order.push_back(pd.w2_index);
  for (std::size_t k : pd.hyperplane) pd.order.push_back(k);

  Int k0 = json_to_int(pl["k0"], "placement.k0");
  if (k0 <= 0) throw Error(errc::invalid_input, "placement.k0: must be positive");

  const Json& v = j["verdicts"];
  detail::require_keys(v,
                       {"certified", "fan_ok", "k0_rank_ok", "koszul_window_ok",
                        "primitive_collections_ok", "strong_exceptional_ok",
                        "tilting_vanishing_ok", "weights_ok"},
                       "verdicts");
  auto vb = [&](const char* key) {
    if (!v[key].is_boolean())
      throw Error(errc::invalid_input, std::string("verdicts.") + key + ": expected a boolean");
    return v[key].get<bool>();
  };
  Verdicts verdicts;
  verdicts.fan_ok = vb("fan_ok");
  verdicts.primitive_collections_ok = vb("primitive_collections_ok");
  verdicts.weights_ok = vb("weights_ok");
  verdicts.strong_exceptional_ok = vb("strong_exceptional_ok");
  verdicts.k0_rank_ok = vb("k0_rank_ok");
  verdicts.koszul_window_ok = vb("koszul_window_ok");
  verdicts.tilting_vanishing_ok = vb("tilting_vanishing_ok");

  if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
    throw Error(errc::invalid_input, "seed: expected an integer");
  if (j["seed"].is_number_integer() && !j["seed"].is_number_unsigned() &&
      j["seed"].get<long long>() < 0)
    throw Error(errc::invalid_input, "seed: must be non-negative");

  return ParsedCertificate{std::move(input),
                           std::move(pd),
                           static_cast<long>(k0.get_si()),
                           json_to_polytope(j["q"]),
                           json_to_fan(j["sigma"]),
                           json_to_rvec(j["r"], "r"),
                           json_to_rvec(j["alpha"], "alpha"),
                           json_to_rvec(j["p"], "p"),
                           json_to_classes(j["collection"], "collection"),
                           verdicts,
                           vb("certified"),
                           json_to_classes(j["descended"], "descended"),
                           j["seed"].get<std::uint64_t>()};
}

inline std::string certificate_text(const Certificate& cert) {
  return certificate_to_json(cert).dump(2) + "\n";
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(errc::invalid_input, "cannot open " + path);
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(errc::invalid_input, "malformed JSON in " + path);
  return j;
}

// Write-then-rename so readers never observe a partial file.
inline void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(errc::invalid_input, "cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw Error(errc::invalid_input, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw Error(errc::invalid_input, "cannot rename into " + path);
}

}  // namespace nccr
