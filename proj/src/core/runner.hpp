#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "core/model_spec.hpp"
#include "core/mourre.hpp"
#include "core/serialize.hpp"

namespace mbspec {

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<std::string> lambda_grid;
  bool timings = false;
};

// One loaded model with lazily built operators. Not safe for concurrent use.
class Session {
 public:
  explicit Session(ModelSpec spec);

  const ModelSpec& spec() const noexcept { return spec_; }
  const AxisUniverse& universe() const { return spec_.model.grid.universe(); }
  SolverOptions solver() const { return solver_; }
  void override_seed(std::uint64_t seed) { solver_.seed = seed; }
  void override_workers(std::size_t workers) { solver_.workers = workers; }

  const BlockOperator& hamiltonian();
  const ThresholdData& threshold_data();
  const HvzResult& hvz_result();
  RecursiveRhoHat recursion();

 private:
  ModelSpec spec_;
  SolverOptions solver_;
  std::optional<BlockOperator> h_;
  std::optional<ThresholdData> thresholds_;
  std::optional<HvzResult> hvz_;
};

const std::vector<std::string>& command_names();
bool is_command(const std::string& name);

// Writes the artifacts of `command` into opts.out_dir.
void run_command(Session& session, const std::string& command, const RunOptions& opts);

}  // namespace mbspec
