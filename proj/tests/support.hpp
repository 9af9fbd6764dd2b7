#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace geolab::testing {

/// Seeded generator for property tests. Every property test owns one, so a
/// failing case is reproducible from the seed printed by the assertion.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::mt19937_64& engine() { return rng_; }

  double uniform(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Eigen::VectorXd vector(Eigen::Index n, double scale = 1.0) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = scale * normal();
    return v;
  }
  Eigen::VectorXd box(Eigen::Index n, double lo, double hi) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }
  Eigen::VectorXd unit(Eigen::Index n) { return vector(n).normalized(); }

  /// Haar-ish orthogonal matrix from the QR of a Gaussian matrix.
  Eigen::MatrixXd orthogonal(Eigen::Index n) {
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) a(i, j) = normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    return qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  }

  /// Product of elementary integer shears: a unimodular integer matrix.
  Eigen::Matrix2d unimodular(int shears = 4) {
    Eigen::Matrix2d p = Eigen::Matrix2d::Identity();
    for (int k = 0; k < shears; ++k) {
      Eigen::Matrix2d e = Eigen::Matrix2d::Identity();
      const int m = integer(-2, 2);
      if (k % 2 == 0)
        e(0, 1) = m;
      else
        e(1, 0) = m;
      p = p * e;
    }
    return p;
  }

 private:
  std::mt19937_64 rng_;
  std::uint64_t seed_;
};

using ScalarField = std::function<double(const Eigen::VectorXd&)>;

/// Richardson-extrapolated central differences, independent of the library's
/// own finite-difference code.
inline Eigen::VectorXd richardson_gradient(const ScalarField& f, const Eigen::VectorXd& y, double h = 1e-3) {
  Eigen::VectorXd g(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    auto d = [&](double step) {
      Eigen::VectorXd a = y, b = y;
      a[i] += step;
      b[i] -= step;
      return (f(a) - f(b)) / (2.0 * step);
    };
    const double hi = h * std::max(1.0, std::abs(y[i]));
    const double d1 = d(hi), d2 = d(hi / 2.0), d3 = d(hi / 4.0);
    const double r1 = (4.0 * d2 - d1) / 3.0, r2 = (4.0 * d3 - d2) / 3.0;
    g[i] = (16.0 * r2 - r1) / 15.0;
  }
  return g;
}

inline double relative_error(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

inline double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).lpNorm<Eigen::Infinity>() / std::max(1.0, b.lpNorm<Eigen::Infinity>());
}

/// Population standard deviation.
inline double stdev(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

}  // namespace geolab::testing
