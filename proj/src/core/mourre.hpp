#pragma once

#include <map>
#include <vector>

#include "core/block_operator.hpp"
#include "core/semilattice.hpp"
#include "core/spectra.hpp"

namespace mbspec {

// Sorted, strictly increasing finite set of reals. Points closer than
// `dedup_tol` to the previous kept point are merged into it.
class FiniteClosedSet {
 public:
  FiniteClosedSet() = default;
  explicit FiniteClosedSet(std::vector<double> points, double dedup_tol = 0.0);

  const std::vector<double>& points() const noexcept { return points_; }
  bool empty() const noexcept { return points_.empty(); }
  std::size_t size() const noexcept { return points_.size(); }
  bool contains(double x) const;

  friend FiniteClosedSet set_union(const FiniteClosedSet& a, const FiniteClosedSet& b);
  friend FiniteClosedSet set_difference(const FiniteClosedSet& a, const FiniteClosedSet& b);
  bool operator==(const FiniteClosedSet&) const = default;

 private:
  std::vector<double> points_;
};

FiniteClosedSet set_union(const FiniteClosedSet& a, const FiniteClosedSet& b);
FiniteClosedSet set_difference(const FiniteClosedSet& a, const FiniteClosedSet& b);

// N_A(lambda) = sup{x in A : x <= lambda}; -inf when no such x.
double n_fun(const FiniteClosedSet& a, double lambda);
// sup_{mu <= lambda} M(mu) with M = N_A off B and M(mu) = mu on B, which is N_{A u B}(lambda).
double merge_sup(const FiniteClosedSet& a, const FiniteClosedSet& b, double lambda);
// lambda - N_tau(lambda); +inf below tau.
double rho_hat(const FiniteClosedSet& tau, double lambda);
// 0 on mu, rho_hat elsewhere. mu and tau must be disjoint.
double rho(const FiniteClosedSet& tau, const FiniteClosedSet& mu, double lambda);

struct ThresholdData {
  // ev(H_{S/X}) for each X that enters tau, in semilattice order.
  std::vector<std::pair<SpaceId, FiniteClosedSet>> per_space;
  FiniteClosedSet tau;
  // Eigenvalues of H with rho_hat > mu_tol.
  FiniteClosedSet mu;
  // Eigenvalues of H within mu_tol of tau (rho_hat <= mu_tol).
  std::vector<double> flagged;
  // Whether ev(H) was computed; it is empty by construction when O is not in S.
  bool spectrum_computed = false;
};

// tau = union of ev(H_{S/X}) over X != O, or over all X when O is not in S.
ThresholdData thresholds(const BlockOperator& h, const SolverOptions& opts = {}, double mu_tol = 1e-9,
                         double dedup_tol = 0.0);

// rho_hat evaluated by recursion over the semilattice. Node X stands for S/X;
// its threshold set is A_X = union over covers Y of X of (A_Y u mu_Y), with
// mu_Y = ev_Y \ A_Y, and the top level merges the atoms with merge_sup.
class RecursiveRhoHat {
 public:
  // `ev` must hold ev(H_{S/X}) for every X in S other than O.
  RecursiveRhoHat(const Semilattice& s, std::map<SpaceId, FiniteClosedSet> ev);

  double operator()(double lambda) const;
  const FiniteClosedSet& node_thresholds(SpaceId x) const;
  const FiniteClosedSet& node_eigenvalues(SpaceId x) const;

 private:
  const FiniteClosedSet& build(const Semilattice& s, SpaceId x);

  bool trivial_;
  std::vector<SpaceId> top_;  // atoms, or {min S} when O is not in S
  std::map<SpaceId, FiniteClosedSet> ev_;
  std::map<SpaceId, FiniteClosedSet> thresholds_;
  std::map<SpaceId, FiniteClosedSet> mu_;
};

RecursiveRhoHat rho_hat_recursive(const Semilattice& s, const ThresholdData& data);

}  // namespace mbspec
