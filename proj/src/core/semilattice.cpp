#include "core/semilattice.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "core/error.hpp"

namespace mbspec {

AxisUniverse::AxisUniverse(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.size() > max_axes) {
    fail(ErrorKind::ValidationError, "at most 64 axes are supported");
  }
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (l.empty()) fail(ErrorKind::ValidationError, "empty axis label");
    if (!seen.insert(l).second) fail(ErrorKind::ValidationError, "duplicate axis label '" + l + "'");
  }
}

std::optional<std::size_t> AxisUniverse::find(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

AxisMask AxisUniverse::full_mask() const noexcept {
  return labels_.size() == 64 ? ~AxisMask{0} : ((AxisMask{1} << labels_.size()) - 1);
}

SpaceId SpaceId::from_axes(std::span<const std::size_t> axes) {
  AxisMask m = 0;
  for (auto a : axes) {
    if (a >= max_axes) fail(ErrorKind::InvalidArgument, "axis index out of range");
    m |= AxisMask{1} << a;
  }
  return SpaceId{m};
}

std::vector<std::size_t> SpaceId::axes() const {
  std::vector<std::size_t> out;
  out.reserve(rank());
  for (std::size_t a = 0; a < max_axes; ++a) {
    if (has_axis(a)) out.push_back(a);
  }
  return out;
}

std::string space_label(SpaceId space, const AxisUniverse& universe) {
  if (space.is_trivial()) return "O";
  std::string out = "{";
  bool first = true;
  for (auto a : space.axes()) {
    if (!first) out += ",";
    out += a < universe.size() ? universe.label(a) : "#" + std::to_string(a);
    first = false;
  }
  return out + "}";
}

SemilatticeReport validate(std::span<const SpaceId> members, const AxisUniverse& universe) {
  const AxisMask full = universe.full_mask();
  std::set<SpaceId> seen;
  for (auto x : members) {
    if ((x.mask() & ~full) != 0) {
      fail(ErrorKind::ValidationError, "space uses axes outside the declared universe");
    }
    if (!seen.insert(x).second) {
      fail(ErrorKind::ValidationError, "duplicate semilattice member " + space_label(x, universe));
    }
  }
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      if (!seen.contains(meet(members[i], members[j]))) {
        fail(ErrorKind::MeetClosureViolation,
             "meet of " + space_label(members[i], universe) + " and " +
                 space_label(members[j], universe) + " is not a member");
      }
    }
  }

  SemilatticeReport report;
  report.contains_trivial = seen.contains(trivial_space);
  if (members.empty()) return report;
  SpaceId least = members.front();
  for (auto x : members) least = meet(least, x);
  report.least = least;
  for (auto x : members) {
    if (x == least) continue;
    bool covers = std::none_of(members.begin(), members.end(), [&](SpaceId y) {
      return least.strict_subset_of(y) && y.strict_subset_of(x);
    });
    if (covers) report.atoms.push_back(x);
  }
  // Finite with a least element: every element above min S dominates an atom.
  report.atomic = true;
  return report;
}

Semilattice::Semilattice(std::shared_ptr<const AxisUniverse> universe, std::vector<SpaceId> members)
    : universe_(std::move(universe)), members_(std::move(members)) {
  if (!universe_) fail(ErrorKind::InvalidArgument, "semilattice requires an axis universe");
  validate(members_, *universe_);
}

std::optional<std::size_t> Semilattice::index_of(SpaceId x) const noexcept {
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i] == x) return i;
  }
  return std::nullopt;
}

SpaceId Semilattice::least() const {
  if (members_.empty()) fail(ErrorKind::NoLeastElement, "empty semilattice has no least element");
  SpaceId m = members_.front();
  for (auto x : members_) m = meet(m, x);
  return m;
}

std::vector<SpaceId> Semilattice::covers(SpaceId x) const {
  if (!contains(x)) fail(ErrorKind::NotAMember, label(x) + " is not a member");
  std::vector<SpaceId> out;
  for (auto y : members_) {
    if (!x.strict_subset_of(y)) continue;
    bool direct = std::none_of(members_.begin(), members_.end(), [&](SpaceId z) {
      return x.strict_subset_of(z) && z.strict_subset_of(y);
    });
    if (direct) out.push_back(y);
  }
  return out;
}

std::vector<SpaceId> Semilattice::atoms() const { return covers(least()); }

std::vector<SpaceId> Semilattice::maximal() const {
  std::vector<SpaceId> out;
  for (auto x : members_) {
    if (std::none_of(members_.begin(), members_.end(), [&](SpaceId y) { return x.strict_subset_of(y); })) {
      out.push_back(x);
    }
  }
  return out;
}

std::size_t Semilattice::depth() const {
  // Longest chain via DP over members sorted by rank.
  std::vector<SpaceId> sorted = members_;
  std::sort(sorted.begin(), sorted.end(), [](SpaceId a, SpaceId b) { return a.rank() < b.rank(); });
  std::vector<std::size_t> best(sorted.size(), 0);
  std::size_t out = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (sorted[j].strict_subset_of(sorted[i])) best[i] = std::max(best[i], best[j] + 1);
    }
    out = std::max(out, best[i]);
  }
  return out;
}

Semilattice Semilattice::filter_geq(SpaceId x) const {
  if (!contains(x)) fail(ErrorKind::NotAMember, label(x) + " is not a member");
  std::vector<SpaceId> kept;
  for (auto y : members_) {
    if (x.subset_of(y)) kept.push_back(y);
  }
  return Semilattice(universe_, std::move(kept));
}

SpaceId Quotient::image_of(SpaceId y) const {
  for (std::size_t i = 0; i < preimage.size(); ++i) {
    if (preimage[i] == y) return lattice.members()[i];
  }
  fail(ErrorKind::NotAMember, "space is not in the filter of the quotient");
}

SpaceId Quotient::preimage_of(SpaceId quotient_member) const {
  auto idx = lattice.index_of(quotient_member);
  if (!idx) fail(ErrorKind::NotAMember, "space is not a member of the quotient");
  return preimage[*idx];
}

Quotient quotient(const Semilattice& s, SpaceId x) {
  Semilattice above = s.filter_geq(x);
  std::vector<SpaceId> images;
  images.reserve(above.size());
  for (auto y : above.members()) images.push_back(axis_difference(y, x));
  return Quotient{Semilattice(s.universe_ptr(), std::move(images)), above.members(), x};
}

namespace {

// Restricted growth strings enumerate every set partition exactly once.
void enumerate_partitions(std::size_t n, std::vector<int>& rgs, std::size_t pos, int max_block,
                          std::vector<std::vector<int>>& out) {
  if (pos == n) {
    out.push_back(rgs);
    return;
  }
  for (int b = 0; b <= max_block + 1; ++b) {
    rgs[pos] = b;
    enumerate_partitions(n, rgs, pos + 1, std::max(max_block, b), out);
  }
}

// Block id of each particle, normalised so that equal partitions compare equal.
std::vector<int> block_ids(const Partition& p, std::size_t n) {
  std::vector<int> ids(n, -1);
  for (std::size_t c = 0; c < p.clusters.size(); ++c) {
    for (int k : p.clusters[c]) ids[static_cast<std::size_t>(k - 1)] = static_cast<int>(c);
  }
  return ids;
}

}  // namespace

bool ClusterLattice::leq(std::size_t sigma, std::size_t tau) const {
  // Every cluster of tau lies inside a cluster of sigma.
  const auto& coarse = partitions.at(sigma);
  const auto& fine = partitions.at(tau);
  std::size_t n = 0;
  for (const auto& c : coarse.clusters) n += c.size();
  auto ids = block_ids(coarse, n);
  for (const auto& c : fine.clusters) {
    for (int k : c) {
      if (ids[static_cast<std::size_t>(k - 1)] != ids[static_cast<std::size_t>(c.front() - 1)]) return false;
    }
  }
  return true;
}

std::size_t ClusterLattice::meet(std::size_t sigma, std::size_t tau) const {
  // Finest common coarsening: merge clusters that share a particle.
  std::size_t n = 0;
  for (const auto& c : partitions.at(sigma).clusters) n += c.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t p : {sigma, tau}) {
    for (const auto& c : partitions[p].clusters) {
      for (int k : c) parent[find(static_cast<std::size_t>(k - 1))] = find(static_cast<std::size_t>(c.front() - 1));
    }
  }
  // Canonical labels in order of first appearance, matching block_ids.
  std::vector<int> labels(n, -1);
  std::vector<std::size_t> roots;
  for (std::size_t k = 0; k < n; ++k) {
    auto r = find(k);
    auto it = std::find(roots.begin(), roots.end(), r);
    labels[k] = static_cast<int>(it - roots.begin());
    if (it == roots.end()) roots.push_back(r);
  }
  for (std::size_t i = 0; i < partitions.size(); ++i) {
    if (block_ids(partitions[i], n) == labels) return i;
  }
  fail(ErrorKind::InvalidArgument, "partition meet not found");
}

Semilattice ClusterLattice::as_semilattice() const {
  if (partitions.size() - 1 > max_axes) {
    fail(ErrorKind::InvalidArgument, "cluster lattice too large for axis encoding (N <= 5)");
  }
  std::vector<std::string> labels;
  std::vector<std::size_t> axis_of(partitions.size(), 0);
  for (std::size_t i = 0; i < partitions.size(); ++i) {
    if (i == least) continue;
    axis_of[i] = labels.size();
    labels.push_back("p" + std::to_string(i));
  }
  auto universe = std::make_shared<const AxisUniverse>(std::move(labels));
  std::vector<SpaceId> members;
  for (std::size_t sigma = 0; sigma < partitions.size(); ++sigma) {
    AxisMask m = 0;
    for (std::size_t rho = 0; rho < partitions.size(); ++rho) {
      if (rho != least && leq(rho, sigma)) m |= AxisMask{1} << axis_of[rho];
    }
    members.push_back(SpaceId{m});
  }
  return Semilattice(universe, std::move(members));
}

ClusterLattice cluster_semilattice(std::span<const double> masses) {
  if (masses.size() < 2) fail(ErrorKind::InvalidArgument, "cluster semilattice needs N >= 2 masses");
  for (double m : masses) {
    if (!(m > 0)) fail(ErrorKind::InvalidArgument, "masses must be positive");
  }
  const std::size_t n = masses.size();
  std::vector<std::vector<int>> strings;
  std::vector<int> rgs(n, 0);
  enumerate_partitions(n, rgs, 1, 0, strings);

  ClusterLattice lattice;
  for (const auto& s : strings) {
    int blocks = *std::max_element(s.begin(), s.end()) + 1;
    Partition p;
    p.clusters.assign(static_cast<std::size_t>(blocks), {});
    for (std::size_t k = 0; k < n; ++k) p.clusters[static_cast<std::size_t>(s[k])].push_back(static_cast<int>(k + 1));
    for (const auto& c : p.clusters) {
      double m = 0;
      for (int k : c) m += masses[static_cast<std::size_t>(k - 1)];
      p.cluster_masses.push_back(m);
    }
    if (p.clusters.size() == 1) lattice.least = lattice.partitions.size();
    lattice.partitions.push_back(std::move(p));
  }
  for (std::size_t i = 0; i < lattice.partitions.size(); ++i) {
    if (lattice.partitions[i].cluster_count() == 2) lattice.atoms.push_back(i);
  }
  return lattice;
}

}  // namespace mbspec
