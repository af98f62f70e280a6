#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/block_operator.hpp"
#include "core/hambuild.hpp"

namespace mbspec {

struct SolverOptions {
  std::size_t dense_cap = 4096;
  double residual_tol = 1e-8;
  // Krylov basis size before restart; 0 picks one from k.
  std::size_t max_basis = 0;
  std::size_t max_restarts = 500;
  std::uint64_t seed = 0;
  // Per-atom worker threads; 0 means hardware concurrency.
  std::size_t workers = 0;
};

// MBSPEC_DENSE_CAP, when set to a positive integer, replaces `configured`.
std::size_t dense_cap_from_env(std::size_t configured);

struct SpectrumResult {
  std::vector<double> eigenvalues;  // ascending
  std::string method;               // "dense" or "iterative"
  std::vector<double> residuals;    // ||Hv - lambda v||, iterative only
};

SpectrumResult eig_dense(const SparseMatrix& a, const SolverOptions& opts = {});
SpectrumResult eig_dense(const BlockOperator& a, const SolverOptions& opts = {});
// k lowest eigenvalues by restarted block Lanczos with full reorthogonalization.
SpectrumResult eig_low(const SparseMatrix& a, std::size_t k, const SolverOptions& opts = {});
SpectrumResult eig_low(const BlockOperator& a, std::size_t k, const SolverOptions& opts = {});

// Smallest and largest eigenvalue; dense below the cap, iterative above.
struct SpectralRange {
  double inf = 0.0;
  double sup = 0.0;
};
SpectralRange spectral_range(const SparseMatrix& a, const SolverOptions& opts = {});

struct AtomSpectrum {
  SpaceId atom;
  double inf = 0.0;
  double sup = 0.0;
};

struct HvzResult {
  double tau = 0.0;
  std::vector<AtomSpectrum> per_atom;  // atom order of the semilattice
  bool contains_trivial = true;
  std::string mode;
};

// O in S: tau = min over atoms of inf Sp(H_{>=X}).
// O not in S: Sp(H) = Sp_ess(H) = [inf H_{S/E} + min Delta_E, oo) with E = min S.
HvzResult hvz(const BlockOperator& h, const SolverOptions& opts = {});

struct AssemblyDiagnostics {
  double lambda_min = 0.0;
  double interaction_ratio = 0.0;  // ||H - K|| / ||K + 1||
  struct Modulation {
    SpaceId z;
    std::size_t axis = 0;
    double defect = 0.0;  // ||I(Z)(V_k - 1)|| for the unit frequency on `axis`
  };
  std::vector<Modulation> modulation;
};

AssemblyDiagnostics assembly_diagnostics(const BlockOperator& h, const SolverOptions& opts = {});

enum class ProbeFunction { resolvent, gaussian };

const char* to_string(ProbeFunction f) noexcept;

// ||(Pi_{>=X} phi(H) Pi_{>=X} - phi(H_{>=X})) U_a psi|| for every a in `shifts`.
// psi lives on the sectors of S_{>=X}. The resolvent is taken at z = i.
std::vector<double> localization_profile(const BlockOperator& h, SpaceId x, ProbeFunction phi, const Vector& psi,
                                         std::span<const std::vector<long>> shifts, const SolverOptions& opts = {});
double localization_probe(const BlockOperator& h, SpaceId x, ProbeFunction phi, const Vector& psi,
                          std::span<const long> a, const SolverOptions& opts = {});

}  // namespace mbspec
