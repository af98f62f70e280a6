#pragma once

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace mbspec {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx>;
using Triplet = Eigen::Triplet<cplx>;

inline double max_abs(const SparseMatrix& m) {
  double out = 0;
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) out = std::max(out, std::abs(it.value()));
  }
  return out;
}

}  // namespace mbspec
