#include <cstdint>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "mbspec/mbspec.h"

namespace {

struct Command {
  const char* name;
  const char* help;
};

const Command kCommands[] = {
    {"validate", "check the model and write assembly diagnostics"},
    {"spectrum", "eigenvalues of H"},
    {"hvz", "bottom of the essential spectrum"},
    {"thresholds", "threshold set, eigenvalues and flagged points"},
    {"rho", "rho_hat and rho on the lambda grid"},
    {"probe", "localization residuals under translations"},
    {"report", "aggregate the artifacts in the output directory"},
};

int usage_error(const std::string& message) {
  std::string escaped;
  for (char c : message) {
    if (c == '"' || c == '\\') escaped += '\\';
    if (c == '\n') {
      escaped += "\\n";
      continue;
    }
    escaped += c;
  }
  std::fprintf(stderr, "{\"error\":\"UsageError\",\"category\":\"usage\",\"message\":\"%s\"}\n", escaped.c_str());
  return MBSPEC_ERR_USAGE;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral analysis of many-body Hamiltonians on a semilattice of spaces"};
  app.set_version_flag("--version", std::string(mbspec_version()));
  app.require_subcommand(1, 1);

  std::string config;
  std::string out_dir = ".";
  std::string format;
  std::uint64_t seed = 0;
  std::size_t workers = 0;
  std::string lambda_grid;
  bool timings = false;

  for (const auto& c : kCommands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", config, "model configuration (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", seed, "random seed for iterative solvers");
    sub->add_option("--workers", workers, "worker threads (0 = hardware)");
    sub->add_option("--lambda-grid", lambda_grid, "a:b:step");
    sub->add_flag("--timings", timings, "include wall-clock timings in report.json");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return usage_error(e.what());
  }

  const auto* sub = app.get_subcommands().front();
  mbspec_model* model = nullptr;
  mbspec_status st = mbspec_model_load(config.c_str(), &model);
  if (st != MBSPEC_OK) {
    std::fprintf(stderr, "%s\n", mbspec_last_error());
    return st;
  }

  mbspec_run_options opts;
  mbspec_run_options_init(&opts);
  opts.out_dir = out_dir.c_str();
  if (!format.empty()) opts.format = format.c_str();
  if (sub->count("--seed")) {
    opts.has_seed = 1;
    opts.seed = seed;
  }
  if (sub->count("--workers")) {
    opts.has_workers = 1;
    opts.workers = workers;
  }
  if (!lambda_grid.empty()) opts.lambda_grid = lambda_grid.c_str();
  opts.timings = timings ? 1 : 0;

  st = mbspec_run(model, sub->get_name().c_str(), &opts);
  if (st != MBSPEC_OK) std::fprintf(stderr, "%s\n", mbspec_last_error());
  mbspec_model_free(model);
  return st;
}
