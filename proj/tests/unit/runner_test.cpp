#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "core/runner.hpp"
#include "test_util.hpp"

using namespace mbspec;

namespace {

const char* kTwoAtoms = R"({
  "grid": {"points_per_axis": 4, "axes": ["a", "b"]},
  "semilattice": [[], ["a"], ["b"], ["a", "b"]],
  "kinetic": {"spaces": [{"space": [], "shift": 0.3}, {"space": ["a"], "shift": -0.4}]},
  "interactions": [
    {"Z": [], "blocks": [{"X": ["a"], "Y": [], "kind": "creation", "theta": [0.2, 0.1, 0, 0.1]}]},
    {"Z": ["b"], "blocks": [{"X": ["a", "b"], "kind": "potential", "v": [-0.5, 0, 0, 0]}]}
  ],
  "outputs": {"lambda_grid": "-2:6:0.25"}
})";

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("mbspec_runner_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

json read_json(const std::filesystem::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("runner") {

TEST_CASE("hvz reports both atoms") {
  Session s(load_model_string(kTwoAtoms, "."));
  RunOptions o;
  o.out_dir = scratch("hvz");
  run_command(s, "hvz", o);
  auto j = read_json(o.out_dir / "hvz.json");
  REQUIRE(j["per_atom"].size() == 2);
  const double t1 = j["per_atom"][0]["inf"], t2 = j["per_atom"][1]["inf"];
  CHECK(j["tau"].get<double>() == std::min(t1, t2));
  CHECK(j["config_hash"] == s.spec().config_hash);
}

TEST_CASE("rho zero set equals tau") {
  Session s(load_model_string(kTwoAtoms, "."));
  RunOptions o;
  o.out_dir = scratch("rho");
  run_command(s, "thresholds", o);
  run_command(s, "rho", o);
  auto j = read_json(o.out_dir / "rho.json");
  CHECK(j["nonpositive_set_is_tau"] == true);
  CHECK(j["recursion_max_abs_diff"].get<double>() <= 1e-12);
  std::ifstream tsv(o.out_dir / "rho.tsv");
  std::string line;
  std::getline(tsv, line);
  CHECK(line == "# config_hash=" + s.spec().config_hash);
  const auto& tau = s.threshold_data().tau;
  std::getline(tsv, line);
  while (std::getline(tsv, line)) {
    std::stringstream ls(line);
    std::string lam, rh;
    std::getline(ls, lam, '\t');
    std::getline(ls, rh, '\t');
    const double l = std::stod(lam);
    const bool nonpositive = rh != "inf" && std::stod(rh) <= 0;
    CHECK(nonpositive == tau.contains(l));
  }
}

TEST_CASE("report is byte stable and refuses stale artifacts") {
  auto dir = scratch("report");
  RunOptions o;
  o.out_dir = dir;
  {
    Session s(load_model_string(kTwoAtoms, "."));
    run_command(s, "report", o);
  }
  const auto first = slurp(dir / "report.json");
  CHECK(first.find("timings_ms") == std::string::npos);
  std::filesystem::remove_all(dir);
  {
    Session s(load_model_string(kTwoAtoms, "."));
    run_command(s, "report", o);
  }
  CHECK(slurp(dir / "report.json") == first);

  std::string other = kTwoAtoms;
  other.replace(other.find("0.3"), 3, "0.9");
  Session changed(load_model_string(other, "."));
  CHECK_FAILS_WITH(run_command(changed, "report", o), ErrorKind::StaleArtifact);

  RunOptions timed = o;
  timed.out_dir = scratch("timed");
  timed.timings = true;
  Session s(load_model_string(kTwoAtoms, "."));
  run_command(s, "report", timed);
  CHECK(read_json(timed.out_dir / "report.json").contains("timings_ms"));
}

TEST_CASE("unknown commands and missing probes") {
  Session s(load_model_string(kTwoAtoms, "."));
  RunOptions o;
  o.out_dir = scratch("misc");
  CHECK_FAILS_WITH(run_command(s, "bogus", o), ErrorKind::InvalidArgument);
  CHECK_FAILS_WITH(run_command(s, "probe", o), ErrorKind::ValidationError);
}

TEST_CASE("state files round trip") {
  GridSpec g{3, std::make_shared<const AxisUniverse>(std::vector<std::string>{"a"}), 1.0};
  std::vector<SpaceId> s{trivial_space, SpaceId{1}};
  auto t = std::make_shared<const SectorTable>(g, s);
  StateVector v(t, Vector::Random(4));
  std::stringstream ss;
  write_state_csv(ss, v);
  auto back = read_state_csv(ss, t);
  CHECK((back.coefficients() - v.coefficients()).norm() == 0.0);

  std::vector<SpaceId> other{SpaceId{1}, trivial_space};
  auto t2 = std::make_shared<const SectorTable>(g, other);
  std::stringstream again;
  write_state_csv(again, v);
  CHECK_FAILS_WITH(read_state_csv(again, t2), ErrorKind::SectorMismatch);
}

}  // TEST_SUITE
