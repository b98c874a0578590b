#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "nccr/json_io.hpp"

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

// Run the installed binary through the shell, capturing both streams.
CliResult run(const std::string& args, const std::string& env_prefix = "") {
  std::string cmd = env_prefix + NCCR_CLI_PATH " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult res;
  char buf[4096];
  while (size_t got = fread(buf, 1, sizeof buf, pipe)) res.output.append(buf, got);
  int status = pclose(pipe);
  REQUIRE(WIFEXITED(status));
  res.exit_code = WEXITSTATUS(status);
  return res;
}

std::string data(const std::string& name) { return NCCR_DATA_DIR "/" + name; }

const fs::path& scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "nccr_cli_scratch";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("cli info") {
  CliResult sq = run("info " + data("square.json"));
  REQUIRE(sq.exit_code == 0);
  REQUIRE(contains(sq.output, "vertices: 4"));
  REQUIRE(contains(sq.output, "dim: 2 (ambient 2)"));
  REQUIRE(contains(sq.output, "simplicial: true"));
  REQUIRE(contains(sq.output, "reflexive: false"));
  REQUIRE(contains(sq.output, "gorenstein witness: (0, 0, 1)"));

  CliResult rt = run("info " + data("reflexive_triangle.json"));
  REQUIRE(rt.exit_code == 0);
  REQUIRE(contains(rt.output, "reflexive: true"));

  CliResult py = run("info " + data("pyramid.json"));
  REQUIRE(py.exit_code == 0);
  REQUIRE(contains(py.output, "vertices: 5"));
  REQUIRE(contains(py.output, "dim: 3 (ambient 3)"));
  REQUIRE(contains(py.output, "simplicial: false"));

  REQUIRE(run("info " + data("no_such_file.json")).exit_code == 4);
  // a fan file is not a polytope file
  REQUIRE(run("info " + data("p2_fan.json")).exit_code == 4);

  // duplicate vertices are malformed input
  fs::path dup = scratch() / "dup.json";
  std::ofstream(dup) << R"({"ambient_dim": 2, "vertices": [[0,0],[0,0],[1,0],[0,1]]})";
  REQUIRE(run("info " + dup.string()).exit_code == 4);
}

TEST_CASE("cli cohomology") {
  CliResult a = run("cohomology " + data("p2_fan.json") + " --divisor '(2,0,0)'");
  REQUIRE(a.exit_code == 0);
  REQUIRE(a.output == "6 0 0\n");

  CliResult b = run("cohomology " + data("p2_fan.json") + " --divisor '(-1,-1,-1)'");
  REQUIRE(b.exit_code == 0);
  REQUIRE(b.output == "0 0 1\n");

  CliResult c = run("cohomology " + data("p2_fan.json") + " --divisor '(0,0,0)'");
  REQUIRE(c.exit_code == 0);
  REQUIRE(c.output == "1 0 0\n");

  // wrong divisor length and junk entries are invalid input
  REQUIRE(run("cohomology " + data("p2_fan.json") + " --divisor '(1,2)'").exit_code == 4);
  REQUIRE(run("cohomology " + data("p2_fan.json") + " --divisor '(a,b,c)'").exit_code == 4);

  // a non-complete fan fails verification
  CliResult aff = run("cohomology " + data("affine_fan.json") + " --divisor '(0,0)'");
  REQUIRE(aff.exit_code == 2);
  REQUIRE(contains(aff.output, "fan verification failed"));
}

TEST_CASE("cli certify") {
  fs::path out0 = scratch() / "sq0.json";
  CliResult r0 = run("certify " + data("square.json") + " --out " + out0.string());
  REQUIRE(r0.exit_code == 0);
  REQUIRE(contains(r0.output, "k0: 3"));
  REQUIRE(contains(r0.output, "maximal cones: 6"));
  REQUIRE(contains(r0.output, "collection size: 8"));
  REQUIRE(contains(r0.output, "certified: true"));
  REQUIRE(fs::exists(out0));
  nccr::Json doc = nccr::Json::parse(slurp(out0));
  REQUIRE(doc["verdicts"]["certified"].get<bool>());
  REQUIRE(doc["seed"].get<std::uint64_t>() == 0);

  // byte-identical reruns
  fs::path out0b = scratch() / "sq0b.json";
  REQUIRE(run("certify " + data("square.json") + " --out " + out0b.string()).exit_code == 0);
  REQUIRE(slurp(out0) == slurp(out0b));

  // seed changes the certificate; the env variable is a fallback only
  fs::path out7 = scratch() / "sq7.json";
  REQUIRE(run("certify " + data("square.json") + " --seed 7 --out " + out7.string())
              .exit_code == 0);
  REQUIRE(slurp(out7) != slurp(out0));
  fs::path out7e = scratch() / "sq7e.json";
  REQUIRE(run("certify " + data("square.json") + " --out " + out7e.string(),
              "NCCR_SEED=7 ")
              .exit_code == 0);
  REQUIRE(slurp(out7e) == slurp(out7));
  fs::path out0c = scratch() / "sq0c.json";
  REQUIRE(run("certify " + data("square.json") + " --seed 0 --out " + out0c.string(),
              "NCCR_SEED=7 ")
              .exit_code == 0);
  REQUIRE(slurp(out0c) == slurp(out0));

  // malformed env seed only matters when it would be used
  REQUIRE(run("certify " + data("square.json") + " --out " + (scratch() / "x.json").string(),
              "NCCR_SEED=junk ")
              .exit_code == 4);
  REQUIRE(run("certify " + data("square.json") + " --seed 0 --out " +
                  (scratch() / "y.json").string(),
              "NCCR_SEED=junk ")
              .exit_code == 0);

  // input and cap failures
  REQUIRE(run("certify " + data("triangle.json")).exit_code == 4);
  REQUIRE(run("certify " + data("pyramid.json") + " --out " +
              (scratch() / "p.json").string())
              .exit_code == 3);
  REQUIRE(run("certify " + data("square.json") + " --k0-cap 0 --out " +
              (scratch() / "k.json").string())
              .exit_code == 3);
  REQUIRE(run("certify " + data("square.json") + " --rejection-cap 0 --out " +
              (scratch() / "r.json").string())
              .exit_code == 3);
  REQUIRE(run("certify " + data("square.json") + " --k0-cap=-1 --out " +
              (scratch() / "n.json").string())
              .exit_code == 4);
}

TEST_CASE("cli verify") {
  fs::path cert = scratch() / "verify_me.json";
  REQUIRE(run("certify " + data("square.json") + " --out " + cert.string()).exit_code == 0);

  CliResult ok = run("verify " + cert.string());
  REQUIRE(ok.exit_code == 0);
  REQUIRE(contains(ok.output, "certificate verified"));

  // single-field tamper flips the verdict to failure
  nccr::Json doc = nccr::Json::parse(slurp(cert));
  doc["collection"][0]["free"][0] = doc["collection"][0]["free"][0].get<long>() + 1;
  fs::path tampered = scratch() / "tampered.json";
  std::ofstream(tampered) << doc.dump(2) << "\n";
  CliResult bad = run("verify " + tampered.string());
  REQUIRE(bad.exit_code == 2);
  REQUIRE(contains(bad.output, "verification failed"));

  // truncation is malformed input
  std::string text = slurp(cert);
  fs::path cut = scratch() / "cut.json";
  std::ofstream(cut, std::ios::binary) << text.substr(0, text.size() / 2);
  REQUIRE(run("verify " + cut.string()).exit_code == 4);

  // a polytope file is not a certificate
  REQUIRE(run("verify " + data("square.json")).exit_code == 4);
  REQUIRE(run("verify " + data("no_such_file.json")).exit_code == 4);

  // every fixture that certifies round-trips through verify
  for (const char* name : {"quad.json", "simplex_plus.json"}) {
    fs::path out = scratch() / (std::string("rt_") + name);
    REQUIRE(run("certify " + data(name) + " --out " + out.string()).exit_code == 0);
    REQUIRE(run("verify " + out.string()).exit_code == 0);
  }
}

TEST_CASE("cli argument handling") {
  REQUIRE(run("--help").exit_code == 0);
  REQUIRE(run("certify --help").exit_code == 0);
  REQUIRE(run("").exit_code == 4);                 // subcommand required
  REQUIRE(run("frobnicate x").exit_code == 4);     // unknown subcommand
  REQUIRE(run("certify").exit_code == 4);          // missing file argument
  REQUIRE(run("certify " + data("square.json") + " --bogus-flag").exit_code == 4);
  REQUIRE(run("cohomology " + data("p2_fan.json")).exit_code == 4);  // missing --divisor
}
