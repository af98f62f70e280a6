#include "mbspec/mbspec.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <string>

#include "core/error.hpp"
#include "core/runner.hpp"

struct mbspec_model {
  explicit mbspec_model(mbspec::ModelSpec spec) : session(std::move(spec)) {}
  mbspec::Session session;
};

namespace {

thread_local std::string last_error;

mbspec_status status_of(mbspec::ErrorKind kind) {
  using mbspec::ErrorCategory;
  if (kind == mbspec::ErrorKind::InvalidArgument) return MBSPEC_ERR_USAGE;
  switch (mbspec::category_of(kind)) {
    case ErrorCategory::validation: return MBSPEC_ERR_VALIDATION;
    case ErrorCategory::solver: return MBSPEC_ERR_SOLVER;
    case ErrorCategory::io: return MBSPEC_ERR_IO;
  }
  return MBSPEC_ERR_IO;
}

void set_error(const char* kind, const char* category, const std::string& message) {
  last_error = nlohmann::json{{"error", kind}, {"category", category}, {"message", message}}.dump();
}

const char* category_name(mbspec_status s) {
  switch (s) {
    case MBSPEC_ERR_USAGE: return "usage";
    case MBSPEC_ERR_VALIDATION: return "validation";
    case MBSPEC_ERR_SOLVER: return "solver";
    default: return "io";
  }
}

template <typename Fn>
mbspec_status guarded(Fn&& fn) {
  last_error.clear();
  try {
    fn();
    return MBSPEC_OK;
  } catch (const mbspec::Error& e) {
    const auto s = status_of(e.kind());
    set_error(mbspec::to_string(e.kind()), category_name(s), e.what());
    return s;
  } catch (const std::bad_alloc&) {
    set_error("OutOfMemory", "solver", "allocation failed");
    return MBSPEC_ERR_SOLVER;
  } catch (const std::exception& e) {
    set_error("InternalError", "io", e.what());
    return MBSPEC_ERR_IO;
  }
}

mbspec_status null_argument(const char* what) {
  set_error("InvalidArgument", "usage", std::string(what) + " must not be NULL");
  return MBSPEC_ERR_USAGE;
}

void copy_out(const std::vector<double>& v, double* out, std::size_t cap, std::size_t* count) {
  *count = v.size();
  if (out) std::copy_n(v.begin(), std::min(cap, v.size()), out);
}

}  // namespace

extern "C" {

const char* mbspec_version(void) { return MBSPEC_VERSION; }

const char* mbspec_last_error(void) { return last_error.c_str(); }

mbspec_status mbspec_model_load(const char* path, mbspec_model** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new mbspec_model(mbspec::load_model(path)); });
}

mbspec_status mbspec_model_load_string(const char* config_json, const char* base_dir, mbspec_model** out) {
  if (!config_json) return null_argument("config_json");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new mbspec_model(mbspec::load_model_string(config_json, base_dir ? base_dir : "."));
  });
}

void mbspec_model_free(mbspec_model* model) { delete model; }

mbspec_status mbspec_model_hash(const mbspec_model* model, char* buf, size_t len) {
  if (!model) return null_argument("model");
  if (!buf) return null_argument("buf");
  const auto& h = model->session.spec().config_hash;
  if (len < h.size() + 1) {
    set_error("InvalidArgument", "usage", "hash buffer needs 17 bytes");
    return MBSPEC_ERR_USAGE;
  }
  last_error.clear();
  std::memcpy(buf, h.c_str(), h.size() + 1);
  return MBSPEC_OK;
}

mbspec_status mbspec_model_dimension(const mbspec_model* model, size_t* out) {
  if (!model) return null_argument("model");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto& d = model->session.spec().model;
    *out = mbspec::SectorTable(d.grid, d.lattice).total_dim();
  });
}

mbspec_status mbspec_hvz_tau(mbspec_model* model, double* tau, int* contains_trivial) {
  if (!model) return null_argument("model");
  if (!tau) return null_argument("tau");
  return guarded([&] {
    const auto& r = model->session.hvz_result();
    *tau = r.tau;
    if (contains_trivial) *contains_trivial = r.contains_trivial ? 1 : 0;
  });
}

mbspec_status mbspec_eigenvalues(mbspec_model* model, double* out, size_t cap, size_t* count) {
  if (!model) return null_argument("model");
  if (!count) return null_argument("count");
  return guarded([&] {
    auto r = mbspec::eig_dense(model->session.hamiltonian(), model->session.solver());
    copy_out(r.eigenvalues, out, cap, count);
  });
}

mbspec_status mbspec_thresholds(mbspec_model* model, double* out, size_t cap, size_t* count) {
  if (!model) return null_argument("model");
  if (!count) return null_argument("count");
  return guarded([&] { copy_out(model->session.threshold_data().tau.points(), out, cap, count); });
}

mbspec_status mbspec_rho_hat(mbspec_model* model, const double* lambdas, size_t n, double* out) {
  if (!model) return null_argument("model");
  if (n > 0 && (!lambdas || !out)) return null_argument("lambdas/out");
  return guarded([&] {
    const auto& tau = model->session.threshold_data().tau;
    for (size_t i = 0; i < n; ++i) out[i] = mbspec::rho_hat(tau, lambdas[i]);
  });
}

void mbspec_run_options_init(mbspec_run_options* opts) {
  if (!opts) return;
  *opts = mbspec_run_options{nullptr, nullptr, 0, 0, 0, 0, nullptr, 0};
}

mbspec_status mbspec_run(mbspec_model* model, const char* command, const mbspec_run_options* opts) {
  if (!model) return null_argument("model");
  if (!command) return null_argument("command");
  return guarded([&] {
    mbspec::RunOptions ro;
    if (opts) {
      if (opts->out_dir) ro.out_dir = opts->out_dir;
      if (opts->format) ro.format = opts->format;
      if (opts->has_seed) ro.seed = opts->seed;
      if (opts->has_workers) ro.workers = opts->workers;
      if (opts->lambda_grid) ro.lambda_grid = opts->lambda_grid;
      ro.timings = opts->timings != 0;
    }
    mbspec::run_command(model->session, command, ro);
  });
}

}  // extern "C"
