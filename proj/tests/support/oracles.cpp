#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace oracle {

using mbspec::cplx;
using mbspec::DenseMatrix;

double n_fun(const std::vector<double>& a, double lambda) {
  double best = -std::numeric_limits<double>::infinity();
  for (double x : a) {
    if (x <= lambda && x > best) best = x;
  }
  return best;
}

double merge_sup(const std::vector<double>& a, const std::vector<double>& b, double lambda, double step, double lo) {
  std::vector<double> mus;
  for (long i = 0;; ++i) {
    const double mu = lo + static_cast<double>(i) * step;
    if (mu > lambda) break;
    mus.push_back(mu);
  }
  mus.insert(mus.end(), a.begin(), a.end());
  mus.insert(mus.end(), b.begin(), b.end());
  mus.push_back(lambda);
  double best = -std::numeric_limits<double>::infinity();
  for (double mu : mus) {
    if (mu > lambda) continue;
    const bool in_b = std::find(b.begin(), b.end(), mu) != b.end();
    const double m = in_b ? mu : n_fun(a, mu);
    best = std::max(best, m);
  }
  return best;
}

double rho_hat(const std::vector<double>& tau, double lambda) {
  const double n = n_fun(tau, lambda);
  if (std::isinf(n)) return std::numeric_limits<double>::infinity();
  return lambda - n;
}

std::vector<double> minkowski_sum(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out;
  out.reserve(a.size() * b.size());
  for (double x : a) {
    for (double y : b) out.push_back(x + y);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> eigenvalues(const DenseMatrix& a) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(a, Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> laplacian_spectrum(std::size_t n, const std::vector<double>& weights) {
  std::vector<double> out{0.0};
  for (double w : weights) {
    std::vector<double> next;
    for (double base : out) {
      for (std::size_t k = 0; k < n; ++k) {
        next.push_back(base + w * (2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                                                         static_cast<double>(n))));
      }
    }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

DenseMatrix laplacian_matrix(std::size_t n, const std::vector<double>& weights) {
  const std::size_t d = weights.size();
  std::size_t dim = 1;
  for (std::size_t i = 0; i < d; ++i) dim *= n;
  DenseMatrix m = DenseMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t idx = 0; idx < dim; ++idx) {
    std::vector<std::size_t> c(d);
    std::size_t rest = idx;
    for (std::size_t i = d; i-- > 0;) {
      c[i] = rest % n;
      rest /= n;
    }
    for (std::size_t i = 0; i < d; ++i) {
      m(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)) += 2.0 * weights[i];
      for (int sgn : {-1, 1}) {
        auto nb = c;
        nb[i] = (c[i] + n + static_cast<std::size_t>(sgn + 1) - 1) % n;
        std::size_t j = 0;
        for (std::size_t t = 0; t < d; ++t) j = j * n + nb[t];
        m(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(j)) -= weights[i];
      }
    }
  }
  return m;
}

DenseMatrix shift_1d(std::size_t n, long a) {
  DenseMatrix m = DenseMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const long nn = static_cast<long>(n);
  for (long x = 0; x < nn; ++x) m(x, (((x + a) % nn) + nn) % nn) = 1.0;
  return m;
}

DenseMatrix modulation_1d(std::size_t n, long k) {
  DenseMatrix m = DenseMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (long x = 0; x < static_cast<long>(n); ++x) {
    m(x, x) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k * x) / static_cast<double>(n));
  }
  return m;
}

std::vector<std::pair<std::size_t, std::size_t>> tensor_pairs(std::size_t n, const std::vector<std::size_t>& x_axes,
                                                              const std::vector<std::size_t>& z_axes) {
  std::size_t dim = 1;
  for (std::size_t i = 0; i < x_axes.size(); ++i) dim *= n;
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t idx = 0; idx < dim; ++idx) {
    std::vector<std::size_t> c(x_axes.size());
    std::size_t rest = idx;
    for (std::size_t i = x_axes.size(); i-- > 0;) {
      c[i] = rest % n;
      rest /= n;
    }
    std::size_t outer = 0, inner = 0;
    for (std::size_t i = 0; i < x_axes.size(); ++i) {
      const bool in_z = std::find(z_axes.begin(), z_axes.end(), x_axes[i]) != z_axes.end();
      (in_z ? outer : inner) = (in_z ? outer : inner) * n + c[i];
    }
    out.emplace_back(outer, inner);
  }
  return out;
}

double max_abs(const DenseMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) out = std::max(out, std::abs(a[i] - b[i]));
  return out;
}

}  // namespace oracle
