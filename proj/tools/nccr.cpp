// nccr: certify toric crepant-resolution data for lattice polytopes with
// dim + 2 vertices, and inspect the geometry it is built from.
//
// Exit codes: 0 success/certified, 2 verification failed, 3 search cap
// exhausted, 4 invalid input, 1 internal error.
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nccr/verify.hpp"

namespace {

int exit_code_for(const nccr::Error& e) {
  switch (e.code()) {
    case nccr::errc::invalid_input:
      return 4;
    case nccr::errc::search_exhausted:
      return 3;
    case nccr::errc::verification_failed:
    case nccr::errc::unbounded:
      return 2;
    default:
      return 1;
  }
}

std::string vec_str(const nccr::IntVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v[i].get_str();
  }
  return s + ")";
}

nccr::IntVec parse_divisor(const std::string& text) {
  std::string cleaned;
  for (char c : text) {
    if (c == '(' || c == ')' || c == '[' || c == ']' || c == ' ' || c == '\t') continue;
    cleaned += c;
  }
  if (cleaned.empty()) throw nccr::Error(nccr::errc::invalid_input, "empty divisor");
  nccr::IntVec out;
  std::size_t start = 0;
  while (start <= cleaned.size()) {
    std::size_t comma = cleaned.find(',', start);
    std::string tok = cleaned.substr(start, comma == std::string::npos ? std::string::npos
                                                                       : comma - start);
    try {
      out.emplace_back(tok);  // mpz parse, throws std::invalid_argument
    } catch (const std::exception&) {
      throw nccr::Error(nccr::errc::invalid_input, "bad divisor entry: " + tok);
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

int run_info(const std::string& path) {
  nccr::LatticePolytope p = nccr::json_to_polytope(nccr::load_json_file(path));
  bool full_dim = p.dim() == p.ambient_dim();
  bool simplicial = false, reflexive = false;
  if (full_dim) {
    simplicial = true;
    for (const nccr::Facet& f : nccr::facets(p))
      if (f.vertex_set.size() != p.ambient_dim()) simplicial = false;
    reflexive = nccr::is_reflexive(p);
  }
  std::optional<nccr::IntVec> witness = nccr::is_gorenstein(nccr::cone_over(p));
  std::cout << "vertices: " << p.num_vertices() << "\n";
  std::cout << "dim: " << p.dim() << " (ambient " << p.ambient_dim() << ")\n";
  std::cout << "simplicial: " << (simplicial ? "true" : "false") << "\n";
  std::cout << "reflexive: " << (reflexive ? "true" : "false") << "\n";
  std::cout << "gorenstein witness: " << (witness ? vec_str(*witness) : "none") << "\n";
  return 0;
}

int run_cohomology(const std::string& path, const std::string& divisor_text) {
  nccr::Fan f = nccr::json_to_fan(nccr::load_json_file(path));
  nccr::FanReport rep = nccr::verify_fan(f);
  if (!rep.ok()) {
    std::cerr << "fan verification failed (simplicial=" << rep.simplicial
              << " complete=" << rep.complete
              << " intersections=" << rep.intersections_are_faces << ")\n";
    return 2;
  }
  nccr::IntVec divisor = parse_divisor(divisor_text);
  if (divisor.size() != f.rays.size())
    throw nccr::Error(nccr::errc::invalid_input, "divisor length must equal the ray count");
  nccr::ClassGroup cl(f.rays);
  nccr::DivisorClass c = cl.project(divisor);
  std::vector<nccr::Int> dims = nccr::cohomology_dims(f, cl, c);
  for (std::size_t i = 0; i < dims.size(); ++i) std::cout << (i ? " " : "") << dims[i];
  std::cout << "\n";
  return 0;
}

int run_certify(const std::string& path, const nccr::PipelineConfig& cfg,
                const std::string& out_path) {
  nccr::LatticePolytope p = nccr::json_to_polytope(nccr::load_json_file(path));
  nccr::Certificate cert = nccr::certify(p, cfg);
  nccr::write_text_atomic(out_path, nccr::certificate_text(cert));
  std::cout << "certificate: " << out_path << "\n";
  std::cout << "k0: " << cert.qc.k0 << "\n";
  std::cout << "maximal cones: " << cert.sigma.max_cones.size() << "\n";
  std::cout << "collection size: " << cert.collection.classes.size() << "\n";
  std::cout << "certified: " << (cert.verdicts.certified() ? "true" : "false") << "\n";
  if (!cert.verdicts.certified()) {
    auto flag = [](const char* name, bool v) {
      if (!v) std::cout << "failed: " << name << "\n";
    };
    flag("fan_ok", cert.verdicts.fan_ok);
    flag("primitive_collections_ok", cert.verdicts.primitive_collections_ok);
    flag("weights_ok", cert.verdicts.weights_ok);
    flag("strong_exceptional_ok", cert.verdicts.strong_exceptional_ok);
    flag("k0_rank_ok", cert.verdicts.k0_rank_ok);
    flag("koszul_window_ok", cert.verdicts.koszul_window_ok);
    flag("tilting_vanishing_ok", cert.verdicts.tilting_vanishing_ok);
    return 2;
  }
  return 0;
}

int run_verify(const std::string& path) {
  nccr::ParsedCertificate pc = nccr::certificate_from_json(nccr::load_json_file(path));
  nccr::VerifyResult res = nccr::verify_certificate(pc);
  if (!res.ok) {
    std::cerr << "verification failed: " << res.detail << "\n";
    return 2;
  }
  std::cout << "certificate verified\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact certification of toric crepant-resolution data"};
  app.require_subcommand(1);

  std::string info_file;
  CLI::App* info = app.add_subcommand("info", "geometric report for a polytope file");
  info->add_option("file", info_file, "polytope JSON file")->required();

  std::string coh_file, divisor_text;
  CLI::App* coh =
      app.add_subcommand("cohomology", "line-bundle cohomology dimensions on a fan");
  coh->add_option("file", coh_file, "fan JSON file")->required();
  coh->add_option("--divisor", divisor_text, "divisor coefficients, one per ray (a,b,...)")
      ->required();

  std::string cert_file, out_path = "certificate.json";
  nccr::PipelineConfig cfg;
  CLI::App* certc = app.add_subcommand("certify", "run the full certification pipeline");
  certc->add_option("file", cert_file, "polytope JSON file")->required();
  CLI::Option* seed_opt = certc->add_option("--seed", cfg.seed, "offset sampler seed");
  certc->add_option("--k0-cap", cfg.k0_cap, "apex height search bound");
  certc->add_option("--rejection-cap", cfg.rejection_cap, "offset sampler attempt bound");
  certc->add_option("--koszul-radius", cfg.koszul_radius, "saturation window radius");
  certc->add_option("--vertex-cap", cfg.vertex_cap, "lattice-equivalence search bound");
  certc->add_option("--out", out_path, "certificate output path");
  certc->add_flag("--oracle", cfg.oracle_crosscheck,
                  "cross-check vanishing verdicts against direct cohomology");

  std::string verify_file;
  CLI::App* ver = app.add_subcommand("verify", "re-check a stored certificate");
  ver->add_option("file", verify_file, "certificate JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 4;
  }

  try {
    if (app.got_subcommand(info)) return run_info(info_file);
    if (app.got_subcommand(coh)) return run_cohomology(coh_file, divisor_text);
    if (app.got_subcommand(certc)) {
      if (seed_opt->count() == 0) {
        if (const char* env = std::getenv("NCCR_SEED")) {
          std::string s(env);
          try {
            std::size_t pos = 0;
            unsigned long long v = std::stoull(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            cfg.seed = v;
          } catch (const std::exception&) {
            throw nccr::Error(nccr::errc::invalid_input, "NCCR_SEED is not an integer");
          }
        }
      }
      if (cfg.k0_cap < 0 || cfg.rejection_cap < 0 || cfg.koszul_radius < 0 ||
          cfg.vertex_cap == 0)
        throw nccr::Error(nccr::errc::invalid_input, "caps must be non-negative");
      return run_certify(cert_file, cfg, out_path);
    }
    if (app.got_subcommand(ver)) return run_verify(verify_file);
  } catch (const nccr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
