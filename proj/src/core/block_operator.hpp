#pragma once

#include <map>
#include <memory>
#include <utility>

#include "core/hspace.hpp"
#include "core/linalg.hpp"

namespace mbspec {

struct Decomposition;

// Operator on H_S = (+)_X H_X stored as a sparse X x Y block matrix. Absent
// blocks are zero. An operator built from a model carries its decomposition
// K + sum_Z I(Z) so that graded projections can filter terms by Z.
class BlockOperator {
 public:
  using BlockKey = std::pair<std::size_t, std::size_t>;

  explicit BlockOperator(std::shared_ptr<const SectorTable> table);

  const SectorTable& sectors() const noexcept { return *table_; }
  const std::shared_ptr<const SectorTable>& sectors_ptr() const noexcept { return table_; }
  std::size_t dimension() const noexcept { return table_->total_dim(); }

  const std::map<BlockKey, SparseMatrix>& blocks() const noexcept { return blocks_; }
  const SparseMatrix* block(std::size_t row, std::size_t col) const;
  const SparseMatrix* block(SpaceId x, SpaceId y) const;
  void set_block(std::size_t row, std::size_t col, SparseMatrix m);
  void add_to_block(std::size_t row, std::size_t col, const SparseMatrix& m);

  bool hermitian() const noexcept { return hermitian_; }
  void set_hermitian(bool flag) noexcept { hermitian_ = flag; }

  const std::shared_ptr<const Decomposition>& decomposition() const noexcept { return decomposition_; }
  void attach(std::shared_ptr<const Decomposition> d) { decomposition_ = std::move(d); }

  SparseMatrix to_sparse() const;
  DenseMatrix to_dense() const;
  Vector apply(const Vector& v) const;
  BlockOperator adjoint() const;

  BlockOperator& operator+=(const BlockOperator& other);

 private:
  std::shared_ptr<const SectorTable> table_;
  std::map<BlockKey, SparseMatrix> blocks_;
  bool hermitian_ = false;
  std::shared_ptr<const Decomposition> decomposition_;
};

// Sum without decomposition metadata.
BlockOperator operator+(const BlockOperator& a, const BlockOperator& b);
BlockOperator operator-(const BlockOperator& a, const BlockOperator& b);

// Largest entry modulus of A - B.
double max_norm_difference(const BlockOperator& a, const BlockOperator& b);
// Largest entry modulus of A - A*.
double hermiticity_defect(const BlockOperator& a);

}  // namespace mbspec
