#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "core/linalg.hpp"

// Reference computations that share no code with the library under test.
namespace oracle {

// sup{x in a : x <= lambda} by linear scan over an unsorted list; -inf if none.
double n_fun(const std::vector<double>& a, double lambda);

// sup_{mu <= lambda} M(mu) with M(mu) = mu on b and N_a(mu) elsewhere, evaluated on
// the grid lo, lo + step, ... up to lambda, augmented with the points of a, b and lambda.
double merge_sup(const std::vector<double>& a, const std::vector<double>& b, double lambda, double step = 1e-3,
                 double lo = -3.0);

// lambda - N_tau(lambda), +inf when tau has no point <= lambda.
double rho_hat(const std::vector<double>& tau, double lambda);

// Sorted multiset {x + y}.
std::vector<double> minkowski_sum(const std::vector<double>& a, const std::vector<double>& b);

std::vector<double> eigenvalues(const mbspec::DenseMatrix& a);

// Spectrum of sum_i w_i (2 - 2 cos(2 pi k_i / n)) over k in Z_n^d, by enumeration.
std::vector<double> laplacian_spectrum(std::size_t n, const std::vector<double>& weights);

// Dense periodic lattice Laplacian on Z_n^d, axes row-major, first axis most significant.
mbspec::DenseMatrix laplacian_matrix(std::size_t n, const std::vector<double>& weights);

// 1D shift (U_a f)(x) = f(x + a) and modulation exp(2 pi i k x / n) as dense matrices.
mbspec::DenseMatrix shift_1d(std::size_t n, long a);
mbspec::DenseMatrix modulation_1d(std::size_t n, long k);

// For X given by `x_axes` (ascending) and Z by `z_axes` (subset of x_axes): pair
// (index in H_Z, index in H_{X/Z}) for every flat index of H_X.
std::vector<std::pair<std::size_t, std::size_t>> tensor_pairs(std::size_t n, const std::vector<std::size_t>& x_axes,
                                                              const std::vector<std::size_t>& z_axes);

double max_abs(const mbspec::DenseMatrix& a);
double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace oracle
