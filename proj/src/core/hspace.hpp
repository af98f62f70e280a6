#pragma once

#include <memory>
#include <span>
#include <vector>

#include "core/linalg.hpp"
#include "core/semilattice.hpp"

namespace mbspec {

// Periodic grid Z_n on every axis.
struct GridSpec {
  std::size_t points_per_axis = 2;
  std::shared_ptr<const AxisUniverse> axes;
  double spacing = 1.0;

  void validate() const;
  // n^{|X|}; dim H_O = 1.
  std::size_t dim(SpaceId x) const;
  const AxisUniverse& universe() const { return *axes; }
};

struct Sector {
  SpaceId space;
  std::size_t offset = 0;
  std::size_t dim = 0;
};

// Position of every H_X inside the concatenated vector of H_S.
class SectorTable {
 public:
  SectorTable(const GridSpec& grid, std::span<const SpaceId> spaces);
  SectorTable(const GridSpec& grid, const Semilattice& s) : SectorTable(grid, s.members()) {}

  const std::vector<Sector>& sectors() const noexcept { return sectors_; }
  std::size_t size() const noexcept { return sectors_.size(); }
  const Sector& operator[](std::size_t i) const { return sectors_.at(i); }
  std::size_t total_dim() const noexcept { return total_; }
  std::optional<std::size_t> find(SpaceId x) const noexcept;
  std::size_t index_of(SpaceId x) const;
  const GridSpec& grid() const noexcept { return grid_; }
  std::vector<SpaceId> spaces() const;

  bool operator==(const SectorTable& other) const;

 private:
  GridSpec grid_;
  std::vector<Sector> sectors_;
  std::size_t total_ = 0;
};

class StateVector {
 public:
  explicit StateVector(std::shared_ptr<const SectorTable> table);
  StateVector(std::shared_ptr<const SectorTable> table, Vector coefficients);

  const SectorTable& table() const noexcept { return *table_; }
  const std::shared_ptr<const SectorTable>& table_ptr() const noexcept { return table_; }
  const Vector& coefficients() const noexcept { return coeffs_; }
  Vector& coefficients() noexcept { return coeffs_; }

  Vector sector(SpaceId x) const;
  double norm() const { return coeffs_.norm(); }

 private:
  std::shared_ptr<const SectorTable> table_;
  Vector coeffs_;
};

StateVector embed(std::shared_ptr<const SectorTable> table, SpaceId x, const Vector& u);
Vector project(const StateVector& state, SpaceId x);
cplx inner(const StateVector& a, const StateVector& b);

// Row-major flat index over the axes of X (first axis most significant).
std::size_t flat_index(const GridSpec& grid, SpaceId x, std::span<const long> coords);
// Per-universe coordinate vector of a flat index (zero on axes outside X).
std::vector<long> coordinates(const GridSpec& grid, SpaceId x, std::size_t flat);

// Bijection H_X <-> H_Z (x) H_{X/Z}.
class TensorSplit {
 public:
  TensorSplit(const GridSpec& grid, SpaceId x, SpaceId z);

  SpaceId whole() const noexcept { return x_; }
  SpaceId outer_space() const noexcept { return z_; }
  SpaceId inner_space() const noexcept { return axis_difference(x_, z_); }
  std::size_t size() const noexcept { return outer_.size(); }
  std::size_t outer_dim() const noexcept { return outer_dim_; }
  std::size_t inner_dim() const noexcept { return inner_dim_; }

  // Index in H_Z of flat index i of H_X.
  std::size_t outer(std::size_t i) const { return outer_[i]; }
  // Index in H_{X/Z} of flat index i of H_X.
  std::size_t inner(std::size_t i) const { return inner_[i]; }
  std::size_t join(std::size_t outer_index, std::size_t inner_index) const {
    return join_[outer_index * inner_dim_ + inner_index];
  }

 private:
  SpaceId x_, z_;
  std::size_t outer_dim_ = 1, inner_dim_ = 1;
  std::vector<std::size_t> outer_, inner_, join_;
};

TensorSplit tensor_split(const GridSpec& grid, SpaceId x, SpaceId z);

// (U_a f)(x) = f(x + a_X) on the periodic grid; `a` has one entry per global axis.
SparseMatrix translate(const GridSpec& grid, SpaceId x, std::span<const long> a);
// Diagonal exp(2 pi i <k_X, x> / n).
SparseMatrix modulate(const GridSpec& grid, SpaceId x, std::span<const long> k);

// Block-diagonal versions acting on every sector of H_S.
SparseMatrix translate_all(const SectorTable& table, std::span<const long> a);
SparseMatrix modulate_all(const SectorTable& table, std::span<const long> k);

// exp(2 pi i p / n).
cplx unit_root(long p, std::size_t n);

// Minimal cyclic displacement, in lattice units.
long cyclic_distance(long a, long b, std::size_t n);

}  // namespace mbspec
