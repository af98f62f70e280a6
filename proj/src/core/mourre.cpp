#include "core/mourre.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/error.hpp"
#include "core/grading.hpp"
#include "core/pool.hpp"

namespace mbspec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

FiniteClosedSet::FiniteClosedSet(std::vector<double> points, double dedup_tol) {
  for (double p : points) {
    if (std::isnan(p)) fail(ErrorKind::InvalidArgument, "NaN in a finite closed set");
  }
  std::sort(points.begin(), points.end());
  for (double p : points) {
    if (!points_.empty() && p - points_.back() <= dedup_tol) continue;
    points_.push_back(p);
  }
}

bool FiniteClosedSet::contains(double x) const { return std::binary_search(points_.begin(), points_.end(), x); }

FiniteClosedSet set_union(const FiniteClosedSet& a, const FiniteClosedSet& b) {
  FiniteClosedSet out;
  std::set_union(a.points_.begin(), a.points_.end(), b.points_.begin(), b.points_.end(),
                 std::back_inserter(out.points_));
  return out;
}

FiniteClosedSet set_difference(const FiniteClosedSet& a, const FiniteClosedSet& b) {
  FiniteClosedSet out;
  std::set_difference(a.points_.begin(), a.points_.end(), b.points_.begin(), b.points_.end(),
                      std::back_inserter(out.points_));
  return out;
}

double n_fun(const FiniteClosedSet& a, double lambda) {
  const auto& p = a.points();
  auto it = std::upper_bound(p.begin(), p.end(), lambda);
  if (it == p.begin()) return -kInf;
  return *std::prev(it);
}

double merge_sup(const FiniteClosedSet& a, const FiniteClosedSet& b, double lambda) {
  return n_fun(set_union(a, b), lambda);
}

double rho_hat(const FiniteClosedSet& tau, double lambda) {
  const double n = n_fun(tau, lambda);
  if (n == -kInf) return kInf;
  return lambda - n;
}

double rho(const FiniteClosedSet& tau, const FiniteClosedSet& mu, double lambda) {
  for (double m : mu.points()) {
    if (tau.contains(m)) fail(ErrorKind::OverlapViolation, "mu and tau share the point " + std::to_string(m));
  }
  if (mu.contains(lambda)) return 0.0;
  return rho_hat(tau, lambda);
}

ThresholdData thresholds(const BlockOperator& h, const SolverOptions& opts, double mu_tol, double dedup_tol) {
  if (!h.decomposition()) fail(ErrorKind::MissingDecomposition, "thresholds need the term decomposition of H");
  const auto& s = h.decomposition()->lattice;
  std::vector<SpaceId> spaces;
  for (auto x : s.members()) {
    if (!x.is_trivial()) spaces.push_back(x);
  }
  ThresholdData out;
  out.per_space.resize(spaces.size());
  run_pool(spaces.size(), opts.workers, [&](std::size_t i) {
    auto ev = eig_dense(reduced(h, spaces[i]), opts);
    out.per_space[i] = {spaces[i], FiniteClosedSet(std::move(ev.eigenvalues), dedup_tol)};
  });
  for (const auto& [x, ev] : out.per_space) out.tau = set_union(out.tau, ev);
  if (dedup_tol > 0) out.tau = FiniteClosedSet(out.tau.points(), dedup_tol);

  // Without a vacuum sector H has no eigenvalues: Sp(H) = Sp_ess(H).
  if (!s.contains_trivial()) return out;
  out.spectrum_computed = true;
  std::vector<double> mu;
  for (double lambda : eig_dense(h, opts).eigenvalues) {
    if (rho_hat(out.tau, lambda) > mu_tol) {
      mu.push_back(lambda);
    } else {
      out.flagged.push_back(lambda);
    }
  }
  out.mu = FiniteClosedSet(std::move(mu), dedup_tol);
  return out;
}

RecursiveRhoHat::RecursiveRhoHat(const Semilattice& s, std::map<SpaceId, FiniteClosedSet> ev)
    : trivial_(s.contains_trivial()), ev_(std::move(ev)) {
  for (auto x : s.members()) {
    if (x.is_trivial()) continue;
    if (!ev_.contains(x)) fail(ErrorKind::InvalidArgument, "missing eigenvalue set for " + s.label(x));
  }
  top_ = trivial_ ? s.atoms() : std::vector<SpaceId>{s.least()};
  FiniteClosedSet root;
  for (auto y : top_) {
    const FiniteClosedSet& ay = build(s, y);
    root = set_union(root, set_union(ay, mu_.at(y)));
  }
  if (trivial_) thresholds_.insert_or_assign(trivial_space, std::move(root));
}

const FiniteClosedSet& RecursiveRhoHat::build(const Semilattice& s, SpaceId x) {
  if (auto it = thresholds_.find(x); it != thresholds_.end()) return it->second;
  // Covers of X are the preimages of the atoms of S/X.
  const Quotient q = quotient(s, x);
  FiniteClosedSet a;
  for (auto atom : q.lattice.atoms()) {
    const SpaceId y = q.preimage_of(atom);
    const FiniteClosedSet& ay = build(s, y);
    a = set_union(a, set_union(ay, mu_.at(y)));
  }
  mu_.insert_or_assign(x, set_difference(ev_.at(x), a));
  return thresholds_.insert_or_assign(x, std::move(a)).first->second;
}

double RecursiveRhoHat::operator()(double lambda) const {
  // lambda - rho_hat(lambda) = max over the top nodes of sup_{mu <= lambda}(mu - rho_{S/X}(mu)).
  double best = -kInf;
  for (auto y : top_) best = std::max(best, merge_sup(thresholds_.at(y), mu_.at(y), lambda));
  if (best == -kInf) return kInf;
  return lambda - best;
}

const FiniteClosedSet& RecursiveRhoHat::node_thresholds(SpaceId x) const {
  auto it = thresholds_.find(x);
  if (it == thresholds_.end()) fail(ErrorKind::NotAMember, "no recursion node for this space");
  return it->second;
}

const FiniteClosedSet& RecursiveRhoHat::node_eigenvalues(SpaceId x) const {
  auto it = ev_.find(x);
  if (it == ev_.end()) fail(ErrorKind::NotAMember, "no eigenvalue set for this space");
  return it->second;
}

RecursiveRhoHat rho_hat_recursive(const Semilattice& s, const ThresholdData& data) {
  std::map<SpaceId, FiniteClosedSet> ev;
  for (const auto& [x, set] : data.per_space) ev.emplace(x, set);
  return RecursiveRhoHat(s, std::move(ev));
}

}  // namespace mbspec
