#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "geolab/core/dual.hpp"
#include "geolab/core/errors.hpp"

namespace geolab {

/// p^T G^{-1} p for a row-major symmetric n x n matrix G, via Cholesky.
/// Throws DegenerateMetricError on a non-positive pivot.
template <class T>
T inverse_quadratic_form(std::vector<T> G, std::span<const T> p, std::size_t n, const char* where = "chart") {
  // In-place lower Cholesky factor.
  for (std::size_t j = 0; j < n; ++j) {
    T s = G[j * n + j];
    for (std::size_t k = 0; k < j; ++k) s -= G[j * n + k] * G[j * n + k];
    if (!(value_of(s) > 0.0)) throw DegenerateMetricError(where);
    const T ljj = sqrt(s);
    G[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      T t = G[i * n + j];
      for (std::size_t k = 0; k < j; ++k) t -= G[i * n + k] * G[j * n + k];
      G[i * n + j] = t / ljj;
    }
  }
  T acc(0.0);
  std::vector<T> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    T t = p[i];
    for (std::size_t k = 0; k < i; ++k) t -= G[i * n + k] * z[k];
    z[i] = t / G[i * n + i];
    acc += z[i] * z[i];
  }
  return acc;
}

/// Number of singular values above rel_tol * sigma_max.
int numerical_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-8);
int numerical_rank(const Eigen::MatrixXcd& m, double rel_tol = 1e-8);

/// Orthonormal basis (columns) of the orthogonal complement of span(cols) in R^m.
Eigen::MatrixXd orthonormal_complement(const Eigen::MatrixXd& cols);

/// Orthonormal basis of the null space of m, using the same relative threshold.
Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double rel_tol = 1e-8);

/// Real roots of sum_k c[k] x^k via companion-matrix eigenvalues. Roots whose
/// imaginary part exceeds imag_tol * max(1,|root|) are dropped.
std::vector<double> real_polynomial_roots(const std::vector<double>& coeffs, double imag_tol = 1e-7);

}  // namespace geolab
