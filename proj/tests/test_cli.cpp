#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path fresh_dir(const std::string& tag) {
  static int counter = 0;
  const fs::path dir = fs::path("cli_test_tmp") / (tag + "_" + std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunResult run_cli(const std::string& args, const fs::path& dir) {
  const char* bin = std::getenv("NETCONC_BIN");
  REQUIRE(bin != nullptr);
  const fs::path out_file = dir / "stdout.txt";
  const fs::path err_file = dir / "stderr.txt";
  const std::string cmd = std::string("\"") + bin + "\" " + args + " > \"" +
                          out_file.string() + "\" 2> \"" + err_file.string() + "\"";
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("gen emits the canonical K3 edge list") {
  const fs::path dir = fresh_dir("gen");
  write_text(dir / "cfg.json",
             R"({"ensemble":{"variant":"er-dense","params":{"n":3,"p":1.0},"seed":7}})");
  const RunResult r = run_cli("gen --config \"" + (dir / "cfg.json").string() + "\" --out \"" +
                                  (dir / "out").string() + "\"",
                              dir);
  CHECK(r.status == 0);
  CHECK(slurp(dir / "out" / "graph_0000.edgelist") == "3 3\n0 1\n0 2\n1 2\n");
  CHECK(fs::exists(dir / "out" / "manifest.json"));
}

TEST_CASE("eval prints the bipartition value of K3") {
  const fs::path dir = fresh_dir("eval");
  write_text(dir / "g.edgelist", "3 3\n0 1\n0 2\n1 2\n");
  write_text(dir / "labels.txt", "1\n1\n1\n");
  write_text(dir / "cfg.json",
             R"({"functional":{"kind":"bipartition"},"graph":"g.edgelist","labels":"labels.txt"})");
  const RunResult r = run_cli("eval --config \"" + (dir / "cfg.json").string() + "\" --out \"" +
                                  (dir / "out").string() + "\"",
                              dir);
  CHECK(r.status == 0);
  CHECK(r.out == "-2\n");
}

TEST_CASE("bounds tabulates T1 on a t grid") {
  const fs::path dir = fresh_dir("bounds");
  write_text(dir / "cfg.json",
             R"({"bound":{"theorem":"T1","params":{"c":1.0}},"ts":[0.0,1.0]})");
  const RunResult r = run_cli("bounds --config \"" + (dir / "cfg.json").string() +
                                  "\" --out \"" + (dir / "out").string() + "\"",
                              dir);
  CHECK(r.status == 0);
  std::istringstream csv(slurp(dir / "out" / "bounds.csv"));
  std::string header, row0, row1;
  std::getline(csv, header);
  std::getline(csv, row0);
  std::getline(csv, row1);
  CHECK(header == "t,raw,clamped");
  CHECK(row0 == "0,2,1");
  double t, raw, clamped;
  char comma;
  std::istringstream(row1) >> t >> comma >> raw >> comma >> clamped;
  CHECK(t == 1.0);
  CHECK(raw == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-12));
  CHECK(clamped == doctest::Approx(raw).epsilon(1e-15));
}

TEST_CASE("opt writes result rows for an ensemble") {
  const fs::path dir = fresh_dir("opt");
  write_text(dir / "cfg.json", R"({
    "functional":{"kind":"bipartition"},
    "ensemble":{"variant":"er-sparse","params":{"n":10,"lambda":3.0},"seed":5},
    "replicates":3,
    "optimizer":{"kind":"exhaustive"},
    "seed":9
  })");
  const RunResult r = run_cli("opt --config \"" + (dir / "cfg.json").string() + "\" --out \"" +
                                  (dir / "out").string() + "\"",
                              dir);
  CHECK(r.status == 0);
  const std::string csv = slurp(dir / "out" / "results.csv");
  CHECK(csv.rfind("replicate,H,m,evaluations,exact\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 rows
  CHECK(csv.find(",1\n") != std::string::npos);          // exact flag set
}

TEST_CASE("gamma-sweep writes the merge table") {
  const fs::path dir = fresh_dir("gamma");
  write_text(dir / "g.edgelist", "6 7\n0 1\n0 2\n1 2\n2 3\n3 4\n3 5\n4 5\n");
  write_text(dir / "cfg.json", R"({
    "graph":"g.edgelist",
    "comm1":[0,1,2],"comm2":[3,4,5],
    "j":1.0,"q":2,
    "gamma_grid":{"start":0.0,"stop":0.12,"step":0.01}
  })");
  const RunResult r = run_cli("gamma-sweep --config \"" + (dir / "cfg.json").string() +
                                  "\" --out \"" + (dir / "out").string() + "\"",
                              dir);
  CHECK(r.status == 0);
  const std::string csv = slurp(dir / "out" / "gamma.csv");
  CHECK(csv.rfind("gamma,merged\n", 0) == 0);
  CHECK(csv.find("0,1\n") != std::string::npos);
  CHECK(csv.find("0.12,0\n") != std::string::npos);
}

TEST_CASE("fit reports the slope of an exact power law") {
  const fs::path dir = fresh_dir("fit");
  write_text(dir / "cfg.json",
             R"({"points":[[10,0.31622776601683794],[20,0.22360679774997896],[40,0.15811388300841897]]})");
  const RunResult r = run_cli("fit --config \"" + (dir / "cfg.json").string() + "\" --out \"" +
                                  (dir / "out").string() + "\"",
                              dir);
  CHECK(r.status == 0);
  CHECK(r.out.rfind("slope=-0.5", 0) == 0);
  CHECK(slurp(dir / "out" / "fit.csv").rfind("N,std,fitted\n", 0) == 0);
}

TEST_CASE("concentrate outputs re-run byte-identically from the manifest") {
  const fs::path dir = fresh_dir("concentrate");
  write_text(dir / "cfg.json", R"({
    "ensemble":{"variant":"er-sparse","params":{"lambda":3.0}},
    "n_list":[10,12],
    "functional":{"kind":"bipartition"},
    "optimizer":{"kind":"sa","schedule":{"sweeps":40,"restarts":2}},
    "replicates":8,
    "seed":321
  })");
  const RunResult first = run_cli("concentrate --config \"" + (dir / "cfg.json").string() +
                                      "\" --out \"" + (dir / "a").string() + "\" --workers 1",
                                  dir);
  REQUIRE(first.status == 0);
  const RunResult second = run_cli("concentrate --config \"" +
                                       (dir / "a" / "manifest.json").string() + "\" --out \"" +
                                       (dir / "b").string() + "\" --workers 3",
                                   dir);
  REQUIRE(second.status == 0);
  for (const char* name : {"samples.csv", "report.csv", "tails.csv", "scaling.csv"}) {
    CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));
    CHECK(!slurp(dir / "a" / name).empty());
  }
}

TEST_CASE("schema violations exit with status 2") {
  const fs::path dir = fresh_dir("schema");
  write_text(dir / "cfg.json", R"({"ts":[1.0]})");  // bounds config without "bound"
  const RunResult r = run_cli("bounds --config \"" + (dir / "cfg.json").string() +
                                  "\" --out \"" + (dir / "out").string() + "\"",
                              dir);
  CHECK(r.status == 2);
  CHECK(r.err.find("\"error\"") != std::string::npos);
  CHECK(r.err.find("config-error") != std::string::npos);

  write_text(dir / "bad.json", "{not json");
  const RunResult r2 = run_cli("bounds --config \"" + (dir / "bad.json").string() +
                                   "\" --out \"" + (dir / "out").string() + "\"",
                               dir);
  CHECK(r2.status == 2);
}

TEST_CASE("runtime errors exit with status 1") {
  const fs::path dir = fresh_dir("runtime");
  // structurally valid, but the rejection sampler cannot satisfy K=2 on K4
  write_text(dir / "cfg.json", R"({
    "ensemble":{"variant":"kbound","params":{"k":2,"inner":{"variant":"er-dense","params":{"n":4,"p":1.0}}},"seed":1}
  })");
  const RunResult r = run_cli("gen --config \"" + (dir / "cfg.json").string() + "\" --out \"" +
                                  (dir / "out").string() + "\"",
                              dir);
  CHECK(r.status == 1);
  CHECK(r.err.find("infeasible-spec") != std::string::npos);
}
