#include "core/block_operator.hpp"

#include "core/error.hpp"

namespace mbspec {

BlockOperator::BlockOperator(std::shared_ptr<const SectorTable> table) : table_(std::move(table)) {
  if (!table_) fail(ErrorKind::InvalidArgument, "block operator needs a sector table");
}

const SparseMatrix* BlockOperator::block(std::size_t row, std::size_t col) const {
  auto it = blocks_.find({row, col});
  return it == blocks_.end() ? nullptr : &it->second;
}

const SparseMatrix* BlockOperator::block(SpaceId x, SpaceId y) const {
  return block(table_->index_of(x), table_->index_of(y));
}

void BlockOperator::set_block(std::size_t row, std::size_t col, SparseMatrix m) {
  const auto& r = (*table_)[row];
  const auto& c = (*table_)[col];
  if (static_cast<std::size_t>(m.rows()) != r.dim || static_cast<std::size_t>(m.cols()) != c.dim) {
    fail(ErrorKind::DimensionMismatch, "block shape does not match sector dimensions");
  }
  m.makeCompressed();
  blocks_.insert_or_assign({row, col}, std::move(m));
}

void BlockOperator::add_to_block(std::size_t row, std::size_t col, const SparseMatrix& m) {
  auto it = blocks_.find({row, col});
  if (it == blocks_.end()) {
    set_block(row, col, m);
    return;
  }
  if (m.rows() != it->second.rows() || m.cols() != it->second.cols()) {
    fail(ErrorKind::DimensionMismatch, "block shape does not match sector dimensions");
  }
  it->second += m;
  it->second.makeCompressed();
}

SparseMatrix BlockOperator::to_sparse() const {
  std::vector<Triplet> t;
  std::size_t nnz = 0;
  for (const auto& [key, m] : blocks_) nnz += static_cast<std::size_t>(m.nonZeros());
  t.reserve(nnz);
  for (const auto& [key, m] : blocks_) {
    const auto ro = static_cast<int>((*table_)[key.first].offset);
    const auto co = static_cast<int>((*table_)[key.second].offset);
    for (int k = 0; k < m.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
        t.emplace_back(ro + static_cast<int>(it.row()), co + static_cast<int>(it.col()), it.value());
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(dimension());
  SparseMatrix out(n, n);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

DenseMatrix BlockOperator::to_dense() const {
  const auto n = static_cast<Eigen::Index>(dimension());
  DenseMatrix out = DenseMatrix::Zero(n, n);
  for (const auto& [key, m] : blocks_) {
    const auto ro = static_cast<Eigen::Index>((*table_)[key.first].offset);
    const auto co = static_cast<Eigen::Index>((*table_)[key.second].offset);
    for (int k = 0; k < m.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(m, k); it; ++it) out(ro + it.row(), co + it.col()) += it.value();
    }
  }
  return out;
}

Vector BlockOperator::apply(const Vector& v) const {
  if (static_cast<std::size_t>(v.size()) != dimension()) {
    fail(ErrorKind::DimensionMismatch, "vector length does not match operator dimension");
  }
  Vector out = Vector::Zero(v.size());
  for (const auto& [key, m] : blocks_) {
    const auto& r = (*table_)[key.first];
    const auto& c = (*table_)[key.second];
    out.segment(static_cast<Eigen::Index>(r.offset), static_cast<Eigen::Index>(r.dim)) +=
        m * v.segment(static_cast<Eigen::Index>(c.offset), static_cast<Eigen::Index>(c.dim));
  }
  return out;
}

BlockOperator BlockOperator::adjoint() const {
  BlockOperator out(table_);
  for (const auto& [key, m] : blocks_) out.set_block(key.second, key.first, SparseMatrix(m.adjoint()));
  out.hermitian_ = hermitian_;
  return out;
}

BlockOperator& BlockOperator::operator+=(const BlockOperator& other) {
  if (!(*table_ == *other.table_)) fail(ErrorKind::SectorMismatch, "operators on different sector tables");
  for (const auto& [key, m] : other.blocks_) add_to_block(key.first, key.second, m);
  hermitian_ = hermitian_ && other.hermitian_;
  return *this;
}

BlockOperator operator+(const BlockOperator& a, const BlockOperator& b) {
  BlockOperator out(a.sectors_ptr());
  out.set_hermitian(a.hermitian());
  out += a;
  out += b;
  out.attach(nullptr);
  return out;
}

BlockOperator operator-(const BlockOperator& a, const BlockOperator& b) {
  if (!(a.sectors() == b.sectors())) fail(ErrorKind::SectorMismatch, "operators on different sector tables");
  BlockOperator out(a.sectors_ptr());
  out += a;
  for (const auto& [key, m] : b.blocks()) out.add_to_block(key.first, key.second, SparseMatrix(-m));
  out.set_hermitian(a.hermitian() && b.hermitian());
  return out;
}

double max_norm_difference(const BlockOperator& a, const BlockOperator& b) {
  if (!(a.sectors() == b.sectors())) fail(ErrorKind::SectorMismatch, "operators on different sector tables");
  SparseMatrix d = a.to_sparse() - b.to_sparse();
  return max_abs(d);
}

double hermiticity_defect(const BlockOperator& a) {
  SparseMatrix m = a.to_sparse();
  SparseMatrix d = m - SparseMatrix(m.adjoint());
  return max_abs(d);
}

}  // namespace mbspec
