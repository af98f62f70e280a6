#include "core/hspace.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "core/error.hpp"

namespace mbspec {

void GridSpec::validate() const {
  if (points_per_axis < 2) fail(ErrorKind::ValidationError, "grid needs points_per_axis >= 2");
  if (!axes || axes->size() == 0) fail(ErrorKind::ValidationError, "grid needs at least one axis");
  if (!(spacing > 0)) fail(ErrorKind::ValidationError, "grid spacing must be positive");
}

std::size_t GridSpec::dim(SpaceId x) const {
  std::size_t d = 1;
  for (std::size_t i = 0; i < x.rank(); ++i) {
    if (d > std::numeric_limits<std::size_t>::max() / points_per_axis) {
      fail(ErrorKind::DimensionCap, "sector dimension overflows");
    }
    d *= points_per_axis;
  }
  return d;
}

SectorTable::SectorTable(const GridSpec& grid, std::span<const SpaceId> spaces) : grid_(grid) {
  sectors_.reserve(spaces.size());
  for (auto x : spaces) {
    if (find(x)) fail(ErrorKind::ValidationError, "duplicate sector " + space_label(x, grid.universe()));
    std::size_t d = grid.dim(x);
    sectors_.push_back(Sector{x, total_, d});
    total_ += d;
  }
}

std::optional<std::size_t> SectorTable::find(SpaceId x) const noexcept {
  for (std::size_t i = 0; i < sectors_.size(); ++i) {
    if (sectors_[i].space == x) return i;
  }
  return std::nullopt;
}

std::size_t SectorTable::index_of(SpaceId x) const {
  auto i = find(x);
  if (!i) fail(ErrorKind::NotAMember, "no sector for " + space_label(x, grid_.universe()));
  return *i;
}

std::vector<SpaceId> SectorTable::spaces() const {
  std::vector<SpaceId> out;
  for (const auto& s : sectors_) out.push_back(s.space);
  return out;
}

bool SectorTable::operator==(const SectorTable& other) const {
  if (grid_.points_per_axis != other.grid_.points_per_axis || sectors_.size() != other.sectors_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < sectors_.size(); ++i) {
    if (sectors_[i].space != other.sectors_[i].space) return false;
  }
  return true;
}

StateVector::StateVector(std::shared_ptr<const SectorTable> table)
    : table_(std::move(table)), coeffs_(Vector::Zero(static_cast<Eigen::Index>(table_->total_dim()))) {}

StateVector::StateVector(std::shared_ptr<const SectorTable> table, Vector coefficients)
    : table_(std::move(table)), coeffs_(std::move(coefficients)) {
  if (static_cast<std::size_t>(coeffs_.size()) != table_->total_dim()) {
    fail(ErrorKind::DimensionMismatch, "state vector length does not match sector table");
  }
}

Vector StateVector::sector(SpaceId x) const {
  const auto& s = (*table_)[table_->index_of(x)];
  return coeffs_.segment(static_cast<Eigen::Index>(s.offset), static_cast<Eigen::Index>(s.dim));
}

StateVector embed(std::shared_ptr<const SectorTable> table, SpaceId x, const Vector& u) {
  const auto& s = (*table)[table->index_of(x)];
  if (static_cast<std::size_t>(u.size()) != s.dim) {
    fail(ErrorKind::DimensionMismatch, "vector length " + std::to_string(u.size()) + " != dim H_X = " +
                                           std::to_string(s.dim));
  }
  StateVector out(std::move(table));
  out.coefficients().segment(static_cast<Eigen::Index>(s.offset), static_cast<Eigen::Index>(s.dim)) = u;
  return out;
}

Vector project(const StateVector& state, SpaceId x) { return state.sector(x); }

cplx inner(const StateVector& a, const StateVector& b) {
  if (!(a.table() == b.table())) fail(ErrorKind::SectorMismatch, "state vectors on different sector tables");
  return a.coefficients().dot(b.coefficients());
}

std::size_t flat_index(const GridSpec& grid, SpaceId x, std::span<const long> coords) {
  const long n = static_cast<long>(grid.points_per_axis);
  std::size_t idx = 0;
  for (auto axis : x.axes()) {
    long c = coords[axis] % n;
    if (c < 0) c += n;
    idx = idx * grid.points_per_axis + static_cast<std::size_t>(c);
  }
  return idx;
}

std::vector<long> coordinates(const GridSpec& grid, SpaceId x, std::size_t flat) {
  std::vector<long> coords(grid.universe().size(), 0);
  auto axes = x.axes();
  for (auto it = axes.rbegin(); it != axes.rend(); ++it) {
    coords[*it] = static_cast<long>(flat % grid.points_per_axis);
    flat /= grid.points_per_axis;
  }
  return coords;
}

TensorSplit::TensorSplit(const GridSpec& grid, SpaceId x, SpaceId z) : x_(x), z_(z) {
  if (!z.subset_of(x)) {
    fail(ErrorKind::NotASubspace,
         space_label(z, grid.universe()) + " is not a subspace of " + space_label(x, grid.universe()));
  }
  const SpaceId rest = axis_difference(x, z);
  outer_dim_ = grid.dim(z);
  inner_dim_ = grid.dim(rest);
  const std::size_t total = grid.dim(x);
  outer_.resize(total);
  inner_.resize(total);
  join_.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    auto c = coordinates(grid, x, i);
    outer_[i] = flat_index(grid, z, c);
    inner_[i] = flat_index(grid, rest, c);
    join_[outer_[i] * inner_dim_ + inner_[i]] = i;
  }
}

TensorSplit tensor_split(const GridSpec& grid, SpaceId x, SpaceId z) { return TensorSplit(grid, x, z); }

namespace {

void check_vector(const GridSpec& grid, std::span<const long> v, const char* what) {
  if (v.size() != grid.universe().size()) {
    fail(ErrorKind::DimensionMismatch, std::string(what) + " needs one entry per global axis");
  }
}

}  // namespace

SparseMatrix translate(const GridSpec& grid, SpaceId x, std::span<const long> a) {
  check_vector(grid, a, "translation");
  const std::size_t d = grid.dim(x);
  std::vector<Triplet> t;
  t.reserve(d);
  for (std::size_t i = 0; i < d; ++i) {
    auto c = coordinates(grid, x, i);
    for (auto axis : x.axes()) c[axis] += a[axis];
    t.emplace_back(static_cast<int>(i), static_cast<int>(flat_index(grid, x, c)), cplx{1.0, 0.0});
  }
  SparseMatrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SparseMatrix modulate(const GridSpec& grid, SpaceId x, std::span<const long> k) {
  check_vector(grid, k, "frequency");
  const std::size_t d = grid.dim(x);
  const long n = static_cast<long>(grid.points_per_axis);
  std::vector<Triplet> t;
  t.reserve(d);
  for (std::size_t i = 0; i < d; ++i) {
    auto c = coordinates(grid, x, i);
    long phase = 0;
    for (auto axis : x.axes()) phase = (phase + ((k[axis] % n) * c[axis]) % n) % n;
    if (phase < 0) phase += n;
    t.emplace_back(static_cast<int>(i), static_cast<int>(i), unit_root(phase, grid.points_per_axis));
  }
  SparseMatrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

namespace {

template <typename BlockFn>
SparseMatrix block_diagonal(const SectorTable& table, BlockFn&& fn) {
  std::vector<Triplet> t;
  for (const auto& s : table.sectors()) {
    SparseMatrix b = fn(s.space);
    for (int k = 0; k < b.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(b, k); it; ++it) {
        t.emplace_back(static_cast<int>(s.offset) + static_cast<int>(it.row()),
                       static_cast<int>(s.offset) + static_cast<int>(it.col()), it.value());
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(table.total_dim());
  SparseMatrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace

SparseMatrix translate_all(const SectorTable& table, std::span<const long> a) {
  return block_diagonal(table, [&](SpaceId x) { return translate(table.grid(), x, a); });
}

SparseMatrix modulate_all(const SectorTable& table, std::span<const long> k) {
  return block_diagonal(table, [&](SpaceId x) { return modulate(table.grid(), x, k); });
}

cplx unit_root(long p, std::size_t n) {
  const long nn = static_cast<long>(n);
  p %= nn;
  if (p < 0) p += nn;
  // Quarter turns are returned exactly.
  if ((4 * p) % nn == 0) {
    switch ((4 * p) / nn) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(p) / static_cast<double>(nn));
}

long cyclic_distance(long a, long b, std::size_t n) {
  const long nn = static_cast<long>(n);
  long d = (a - b) % nn;
  if (d < 0) d += nn;
  return std::min(d, nn - d);
}

}  // namespace mbspec
