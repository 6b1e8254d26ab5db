#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cyclesparse/cli.hpp"
#include "cyclesparse/graph.hpp"
#include "doctest.h"
#include "json.hpp"
#include "support.hpp"

using namespace cyclesparse;
using namespace testsupport;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& content = "") {
    path = std::string("/tmp/cyclesparse_test_") + name;
    if (!content.empty()) {
      std::ofstream out(path, std::ios::binary);
      out << content;
    }
  }
  ~TempFile() { std::remove(path.c_str()); }
};

struct RunResult {
  int rc;
  std::string out;
  std::string err;
  std::string report;
};

RunResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  RunResult r;
  r.rc = run_cli(args, out, err, &r.report);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST_CASE("usage errors exit 2") {
  auto r = run({"decompose"});
  CHECK(r.rc == 2);
  auto r2 = run({"no-such-command"});
  CHECK(r2.rc == 2);
}

TEST_CASE("decompose naive on the triangle") {
  TempFile in("tri.txt", "0 1 1\n1 2 1\n0 2 1\n");
  TempFile outp("tri_out.json");
  auto r = run({"decompose", "--algo", "naive", "--input", in.path, "--output",
                outp.path});
  REQUIRE(r.rc == 0);
  auto doc = nlohmann::json::parse(r.report);
  CHECK(doc["cycle_count"] == 0);
  CHECK(doc["extras"] == 3);
  CHECK(doc["cycle_valid"] == true);
  std::ifstream check(outp.path);
  CHECK(check.good());
}

TEST_CASE("decompose short emits a valid report") {
  Prng gen(5);
  auto g = random_regular(64, 8, gen);
  TempFile in("reg.txt", save_graph(g));
  auto r = run({"decompose", "--algo", "short", "--input", in.path, "--k", "4",
                "--levels", "1", "--seed", "3"});
  REQUIRE(r.rc == 0);
  auto doc = nlohmann::json::parse(r.report);
  CHECK(doc["cycle_valid"] == true);
}

TEST_CASE("resistances --exact on the path graph reports 3 at the endpoints") {
  TempFile in("path.txt", "0 1 1\n1 2 1\n2 3 1\n");
  auto r = run({"resistances", "--exact", "--input", in.path, "--pair", "0,3"});
  REQUIRE(r.rc == 0);
  CHECK(r.out.find("0 3 3.000000") != std::string::npos);
  auto doc = nlohmann::json::parse(r.report);
  CHECK(doc["pair_resistances"][0] == 3.0);
}

TEST_CASE("resistances foster residual in the report") {
  Prng gen(7);
  auto g = random_graph(24, 0.3, gen, true);
  TempFile in("res.txt", save_graph(g));
  auto r = run({"resistances", "--exact", "--input", in.path});
  REQUIRE(r.rc == 0);
  auto doc = nlohmann::json::parse(r.report);
  CHECK(std::abs(doc["foster_residual"].get<double>()) <= 1e-6 * 24);
}

TEST_CASE("sparsify pipeline: report fields and determinism") {
  Prng gen(11);
  auto g = random_graph(48, 0.4, gen, true);
  TempFile in("sp.txt", save_graph(g));
  std::vector<std::string> args = {"sparsify", "--eps", "0.5",    "--seed", "9",
                                   "--input",  in.path, "--force-rounds", "1"};
  auto r1 = run(args);
  REQUIRE(r1.rc == 0);
  auto r2 = run(args);
  CHECK(r1.report == r2.report);  // byte-identical replay
  auto doc = nlohmann::json::parse(r1.report);
  CHECK(doc["degrees_exact"] == true);
  CHECK(doc["schema"] == "cyclesparse-report/1");
  CHECK(doc["rounds"].size() >= 1);
}

TEST_CASE("verify replays a stored run bit-identically") {
  Prng gen(13);
  auto g = random_graph(32, 0.4, gen, true);
  TempFile in("ver.txt", save_graph(g));
  TempFile rep("ver_report.json");
  auto r = run({"sparsify", "--eps", "0.5", "--seed", "21", "--input", in.path,
                "--force-rounds", "1", "--report", rep.path});
  REQUIRE(r.rc == 0);
  auto v = run({"verify", "--certificate", rep.path, "--input", in.path});
  CHECK(v.rc == 0);
  CHECK(v.out.find("bit-identical") != std::string::npos);

  // Tampering with the input is caught via the hash mismatch.
  TempFile other("ver_other.txt", save_graph(complete_graph(5)));
  auto bad = run({"verify", "--certificate", rep.path, "--input", other.path});
  CHECK(bad.rc == 1);
}

TEST_CASE("sparsify-eulerian keeps the eulerian invariant") {
  Prng gen(17);
  auto d = random_eulerian(24, 10, gen);
  TempFile in("eul.txt", save_graph(d));
  TempFile outp("eul_out.txt");
  auto r = run({"sparsify-eulerian", "--eps", "0.75", "--seed", "4", "--input",
                in.path, "--force-rounds", "1", "--output", outp.path});
  REQUIRE(r.rc == 0);
  auto doc = nlohmann::json::parse(r.report);
  CHECK(doc["eulerian_exact"] == true);
  std::ifstream f(outp.path);
  std::stringstream ss;
  ss << f.rdbuf();
  auto h = load_directed(ss.str());
  CHECK(h.is_eulerian());
}

TEST_CASE("sketch with a stored vector file") {
  auto g = dumbbell(32);
  TempFile in("sk.txt", save_graph(g));
  std::string vecs;
  Prng rng(23);
  for (int t = 0; t < 3; ++t) {
    for (int i = 0; i < 32; ++i) vecs += (rng.coin() ? "1 " : "-1 ");
    vecs += "\n";
  }
  TempFile vf("sk_vecs.txt", vecs);
  auto r = run({"sketch", "--eps", "0.4", "--seed", "2", "--input", in.path,
                "--vectors", vf.path});
  REQUIRE(r.rc == 0);
  auto doc = nlohmann::json::parse(r.report);
  CHECK(doc["degrees_exact"] == true);
  CHECK(doc["vector_trials"].size() == 3);
  // Replay through verify as well (vector file still present).
  TempFile rep("sk_report.json", r.report);
  auto v = run({"verify", "--certificate", rep.path, "--input", in.path});
  CHECK(v.rc == 0);
}

TEST_CASE("schur-step star closed form through the CLI") {
  TempFile in("star.txt", "0 1 1\n0 2 1\n0 3 1\n");
  auto r = run({"schur-step", "--f", "0", "--input", in.path});
  REQUIRE(r.rc == 0);
  auto doc = nlohmann::json::parse(r.report);
  CHECK(doc["identity_residual"].get<double>() <= 1e-10);
  CHECK(doc["cliques_on_c"] == 1);
}

TEST_CASE("reduce-weights reports exact degrees") {
  Prng gen(29);
  auto d = random_eulerian(16, 6, gen);
  TempFile in("rw.txt", save_graph(d));
  auto r = run({"reduce-weights", "--input", in.path});
  REQUIRE(r.rc == 0);
  auto doc = nlohmann::json::parse(r.report);
  CHECK(doc["degrees_exact"] == true);
  CHECK(doc["asym_error_norm"].get<double>() <= 1.0 / (16 * 16));
}

TEST_CASE("malformed input fails with a named error") {
  TempFile in("bad.txt", "0 0 1\n");
  auto r = run({"decompose", "--algo", "naive", "--input", in.path});
  CHECK(r.rc == 1);
  CHECK(r.err.find("self-loop") != std::string::npos);
}
