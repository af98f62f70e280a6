#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"

#include "mbspec/mbspec.h"

namespace {

const char* kFriedrichs = R"({
  "grid": {"points_per_axis": 16, "axes": ["x"]},
  "semilattice": [[], ["x"]],
  "kinetic": {"spaces": [{"space": [], "shift": 2.0}]},
  "interactions": [{"Z": [], "blocks": [
    {"X": ["x"], "Y": [], "kind": "creation", "theta": {"family": "gaussian", "sigma": 1.0, "amplitude": 0.5}}
  ]}]
})";

struct Model {
  mbspec_model* ptr = nullptr;
  ~Model() { mbspec_model_free(ptr); }
};

}  // namespace

TEST_CASE("load, query and free a model") {
  Model m;
  REQUIRE(mbspec_model_load_string(kFriedrichs, nullptr, &m.ptr) == MBSPEC_OK);
  CHECK(std::string(mbspec_last_error()).empty());

  size_t dim = 0;
  CHECK(mbspec_model_dimension(m.ptr, &dim) == MBSPEC_OK);
  CHECK(dim == 17);

  char hash[17];
  CHECK(mbspec_model_hash(m.ptr, hash, sizeof hash) == MBSPEC_OK);
  CHECK(std::strlen(hash) == 16);
  char tiny[4];
  CHECK(mbspec_model_hash(m.ptr, tiny, sizeof tiny) == MBSPEC_ERR_USAGE);

  double tau = -1;
  int trivial = 0;
  CHECK(mbspec_hvz_tau(m.ptr, &tau, &trivial) == MBSPEC_OK);
  CHECK(std::abs(tau) < 1e-12);
  CHECK(trivial == 1);

  size_t count = 0;
  CHECK(mbspec_eigenvalues(m.ptr, nullptr, 0, &count) == MBSPEC_OK);
  CHECK(count == 17);
  std::vector<double> ev(count);
  CHECK(mbspec_eigenvalues(m.ptr, ev.data(), ev.size(), &count) == MBSPEC_OK);
  CHECK(std::is_sorted(ev.begin(), ev.end()));

  double thr[4];
  CHECK(mbspec_thresholds(m.ptr, thr, 4, &count) == MBSPEC_OK);
  REQUIRE(count == 1);
  CHECK(thr[0] == 0.0);

  const double lambdas[3] = {-1.0, 0.0, 3.5};
  double out[3];
  CHECK(mbspec_rho_hat(m.ptr, lambdas, 3, out) == MBSPEC_OK);
  CHECK(std::isinf(out[0]));
  CHECK(out[1] == 0.0);
  CHECK(out[2] == 3.5);
}

TEST_CASE("errors map to status codes and a JSON message") {
  mbspec_model* m = nullptr;
  CHECK(mbspec_model_load_string("{", nullptr, &m) == MBSPEC_ERR_VALIDATION);
  CHECK(m == nullptr);
  const std::string err = mbspec_last_error();
  CHECK(err.find("\"error\":\"ParseError\"") != std::string::npos);
  CHECK(err.find("\"category\":\"validation\"") != std::string::npos);

  CHECK(mbspec_model_load("/nonexistent/model.json", &m) == MBSPEC_ERR_IO);
  CHECK(mbspec_model_load(nullptr, &m) == MBSPEC_ERR_USAGE);

  Model ok;
  REQUIRE(mbspec_model_load_string(kFriedrichs, ".", &ok.ptr) == MBSPEC_OK);
  mbspec_run_options opts;
  mbspec_run_options_init(&opts);
  const auto dir = std::filesystem::temp_directory_path() / "mbspec_capi_run";
  std::filesystem::remove_all(dir);
  const std::string out = dir.string();
  opts.out_dir = out.c_str();
  CHECK(mbspec_run(ok.ptr, "nonsense", &opts) == MBSPEC_ERR_USAGE);
  CHECK(mbspec_run(ok.ptr, "hvz", &opts) == MBSPEC_OK);
  CHECK(std::filesystem::exists(dir / "hvz.json"));
  opts.lambda_grid = "3:1:0.1";
  CHECK(mbspec_run(ok.ptr, "thresholds", &opts) == MBSPEC_ERR_USAGE);
  mbspec_model_free(nullptr);
}

TEST_CASE("version string") { CHECK(std::string(mbspec_version()).size() > 0); }
