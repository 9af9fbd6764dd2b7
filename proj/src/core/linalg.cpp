#include "geolab/core/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace geolab {

namespace {

template <class M>
int rank_from_svd(const M& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<M> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > rel_tol * s[0]) ++r;
  }
  return r;
}

}  // namespace

int numerical_rank(const Eigen::MatrixXd& m, double rel_tol) { return rank_from_svd(m, rel_tol); }
int numerical_rank(const Eigen::MatrixXcd& m, double rel_tol) { return rank_from_svd(m, rel_tol); }

Eigen::MatrixXd orthonormal_complement(const Eigen::MatrixXd& cols) {
  const Eigen::Index m = cols.rows();
  if (cols.cols() == 0) return Eigen::MatrixXd::Identity(m, m);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cols, Eigen::ComputeFullU);
  const int r = numerical_rank(cols, 1e-12);
  return svd.matrixU().rightCols(m - r);
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double rel_tol) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const int r = numerical_rank(m, rel_tol);
  return svd.matrixV().rightCols(n - r);
}

std::vector<double> real_polynomial_roots(const std::vector<double>& coeffs, double imag_tol) {
  std::vector<double> c = coeffs;
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  const std::size_t deg = c.empty() ? 0 : c.size() - 1;
  std::vector<double> out;
  if (deg == 0) return out;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  for (std::size_t i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (std::size_t i = 0; i < deg; ++i) comp(i, deg - 1) = -c[i] / c[deg];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const std::complex<double> z = es.eigenvalues()[i];
    if (std::abs(z.imag()) <= imag_tol * std::max(1.0, std::abs(z))) out.push_back(z.real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace geolab
