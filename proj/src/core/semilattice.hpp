#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mbspec {

using AxisMask = std::uint64_t;
inline constexpr std::size_t max_axes = 64;

// Global ordered list of axis labels. All index maps follow this order.
class AxisUniverse {
 public:
  explicit AxisUniverse(std::vector<std::string> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& label(std::size_t axis) const { return labels_.at(axis); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<std::size_t> find(std::string_view label) const;
  AxisMask full_mask() const noexcept;

  bool operator==(const AxisUniverse&) const = default;

 private:
  std::vector<std::string> labels_;
};

// A coordinate subspace, identified by its set of axes. The empty set is O.
class SpaceId {
 public:
  constexpr SpaceId() = default;
  constexpr explicit SpaceId(AxisMask mask) : mask_(mask) {}

  static SpaceId from_axes(std::span<const std::size_t> axes);

  constexpr AxisMask mask() const noexcept { return mask_; }
  constexpr bool is_trivial() const noexcept { return mask_ == 0; }
  constexpr std::size_t rank() const noexcept {
    return static_cast<std::size_t>(std::popcount(mask_));
  }
  constexpr bool has_axis(std::size_t axis) const noexcept {
    return (mask_ >> axis) & AxisMask{1};
  }
  constexpr bool subset_of(SpaceId other) const noexcept {
    return (mask_ & ~other.mask_) == 0;
  }
  constexpr bool strict_subset_of(SpaceId other) const noexcept {
    return subset_of(other) && mask_ != other.mask_;
  }
  constexpr bool comparable(SpaceId other) const noexcept {
    return subset_of(other) || other.subset_of(*this);
  }

  // Axis indices in ascending global order.
  std::vector<std::size_t> axes() const;

  // Total order on masks for use as container keys; unrelated to inclusion.
  constexpr auto operator<=>(const SpaceId&) const = default;

 private:
  AxisMask mask_ = 0;
};

inline constexpr SpaceId trivial_space{};

constexpr SpaceId meet(SpaceId x, SpaceId y) noexcept { return SpaceId{x.mask() & y.mask()}; }

// Y/X for coordinate subspaces: the axes of Y not in X.
constexpr SpaceId axis_difference(SpaceId y, SpaceId x) noexcept {
  return SpaceId{y.mask() & ~x.mask()};
}

constexpr SpaceId axis_union(SpaceId x, SpaceId y) noexcept { return SpaceId{x.mask() | y.mask()}; }

std::string space_label(SpaceId space, const AxisUniverse& universe);

struct SemilatticeReport {
  bool contains_trivial = false;
  bool atomic = false;
  std::optional<SpaceId> least;
  std::vector<SpaceId> atoms;
};

// Checks meet-closure and distinctness. Throws MeetClosureViolation naming the
// first offending pair.
SemilatticeReport validate(std::span<const SpaceId> members, const AxisUniverse& universe);

class Semilattice {
 public:
  Semilattice(std::shared_ptr<const AxisUniverse> universe, std::vector<SpaceId> members);

  const AxisUniverse& universe() const noexcept { return *universe_; }
  const std::shared_ptr<const AxisUniverse>& universe_ptr() const noexcept { return universe_; }

  // Declaration order; this fixes sector order in H_S.
  const std::vector<SpaceId>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool contains(SpaceId x) const noexcept { return index_of(x).has_value(); }
  std::optional<std::size_t> index_of(SpaceId x) const noexcept;
  bool contains_trivial() const noexcept { return contains(trivial_space); }

  SpaceId least() const;
  std::vector<SpaceId> atoms() const;
  std::vector<SpaceId> covers(SpaceId x) const;
  std::vector<SpaceId> maximal() const;
  // Length of the longest strictly increasing chain starting at the least element.
  std::size_t depth() const;

  Semilattice filter_geq(SpaceId x) const;

  std::string label(SpaceId x) const { return space_label(x, *universe_); }

 private:
  std::shared_ptr<const AxisUniverse> universe_;
  std::vector<SpaceId> members_;
};

struct Quotient {
  Semilattice lattice;
  // preimage[i] is the element Y of S with Y/X == lattice.members()[i].
  std::vector<SpaceId> preimage;
  SpaceId by;

  SpaceId image_of(SpaceId y) const;
  SpaceId preimage_of(SpaceId quotient_member) const;
};

Quotient quotient(const Semilattice& s, SpaceId x);

struct Partition {
  std::vector<std::vector<int>> clusters;  // 1-based particle labels, sorted
  std::vector<double> cluster_masses;
  std::size_t cluster_count() const noexcept { return clusters.size(); }
};

// Lattice of partitions of {1..N}, with sigma <= tau iff tau is finer.
struct ClusterLattice {
  std::vector<Partition> partitions;
  std::size_t least = 0;
  std::vector<std::size_t> atoms;

  bool leq(std::size_t sigma, std::size_t tau) const;
  std::size_t meet(std::size_t sigma, std::size_t tau) const;
  // dim X_sigma = d * (|sigma| - 1) for d-dimensional particles.
  std::size_t space_dimension(std::size_t sigma, std::size_t d) const {
    return d * (partitions.at(sigma).cluster_count() - 1);
  }
  // Order-embedding into coordinate subspaces: sigma maps to the set of its
  // non-least coarsenings. Meets map to intersections. Needs N <= 5.
  Semilattice as_semilattice() const;
};

ClusterLattice cluster_semilattice(std::span<const double> masses);

}  // namespace mbspec
