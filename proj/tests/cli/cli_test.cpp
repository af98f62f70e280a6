#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct Result {
  int status = -1;
  std::string err;
};

fs::path work(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("mbspec_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Result run(const std::string& args, const fs::path& dir, const std::string& env = "") {
  const auto err = dir / "stderr.txt";
  const std::string cmd = env + " '" MBSPEC_CLI "' " + args + " 2> '" + err.string() + "' > /dev/null";
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(err)};
}

std::string config(const std::string& name) { return std::string(MBSPEC_CONFIG_DIR) + "/" + name; }

}  // namespace

TEST_CASE("commands succeed on the shipped configs") {
  auto dir = work("ok");
  for (const char* cmd : {"validate", "spectrum", "hvz", "thresholds", "rho"}) {
    auto r = run(std::string(cmd) + " --config " + config("two_atom.json") + " --out " + dir.string(), dir);
    CHECK_MESSAGE(r.status == 0, cmd << ": " << r.err);
  }
  for (const char* f : {"validate.json", "spectrum.json", "hvz.json", "thresholds.json", "rho_hat.tsv", "rho.tsv"}) {
    CHECK_MESSAGE(fs::exists(dir / f), f);
  }
  auto tsv = slurp(dir / "rho_hat.tsv");
  CHECK(tsv.rfind("# config_hash=", 0) == 0);
}

TEST_CASE("csv output") {
  auto dir = work("csv");
  auto r = run("spectrum --format csv --config " + config("single_space.json") + " --out " + dir.string(), dir);
  CHECK(r.status == 0);
  bool found = false;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".csv") {
      found = true;
      auto text = slurp(e.path());
      CHECK(text.rfind("# config_hash=", 0) == 0);
      CHECK(text.find("index,eigenvalue,residual") != std::string::npos);
    }
  }
  CHECK(found);
}

TEST_CASE("report is byte stable across runs") {
  auto a = work("report_a");
  auto b = work("report_b");
  const std::string args = "report --seed 3 --config " + config("two_atom.json") + " --out ";
  REQUIRE(run(args + a.string(), a).status == 0);
  REQUIRE(run(args + b.string(), b).status == 0);
  CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
  CHECK(slurp(a / "rho.tsv") == slurp(b / "rho.tsv"));
}

TEST_CASE("report refuses artifacts from another config") {
  auto dir = work("stale");
  REQUIRE(run("hvz --config " + config("two_atom.json") + " --out " + dir.string(), dir).status == 0);
  auto r = run("report --config " + config("single_space.json") + " --out " + dir.string(), dir);
  CHECK(r.status == 2);
  CHECK(r.err.find("StaleArtifact") != std::string::npos);
}

TEST_CASE("exit codes") {
  auto dir = work("codes");
  CHECK(run("", dir).status == 1);
  CHECK(run("hvz", dir).status == 1);
  CHECK(run("hvz --config " + config("two_atom.json") + " --format xml", dir).status == 1);
  auto missing = run("hvz --config " + (dir / "nope.json").string(), dir);
  CHECK(missing.status == 4);
  CHECK(missing.err.find("\"category\":\"io\"") != std::string::npos);

  {
    std::ofstream(dir / "bad.json") << R"({"grid": {"points_per_axis": 4, "axes": ["a", "b"]},
      "semilattice": [["a"], ["b"]]})";
  }
  auto bad = run("validate --config " + (dir / "bad.json").string() + " --out " + dir.string(), dir);
  CHECK(bad.status == 2);
  CHECK(bad.err.find("MeetClosureViolation") != std::string::npos);

  {
    std::ofstream(dir / "probe.json") << R"({"grid": {"points_per_axis": 16, "axes": ["a"]},
      "semilattice": [[], ["a"]],
      "probe": {"atom": ["a"], "phi": "gaussian", "psi": {"family": "gaussian", "sigma": 2.0}}})";
  }
  auto capped = run("probe --config " + (dir / "probe.json").string() + " --out " + dir.string(), dir,
                    "MBSPEC_DENSE_CAP=4");
  CHECK(capped.status == 3);
  CHECK(capped.err.find("DimensionCap") != std::string::npos);
  auto uncapped = run("probe --config " + (dir / "probe.json").string() + " --out " + dir.string(), dir);
  CHECK(uncapped.status == 0);
}
