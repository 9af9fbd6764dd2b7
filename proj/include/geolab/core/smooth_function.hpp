#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "geolab/core/dual.hpp"

namespace geolab {

template <class T> using ScalarSig = T(std::span<const T>);
template <class T> using VectorSig = std::vector<T>(std::span<const T>);

/// One callable kept at the three scalar types the engine differentiates with.
template <template <class> class Sig>
class Multi {
 public:
  Multi() = default;
  template <class F>
  explicit Multi(const F& f) : fns_(f, f, f) {}

  static Multi from_double(std::function<Sig<double>> f) {
    Multi m;
    std::get<0>(m.fns_) = std::move(f);
    return m;
  }

  template <class T>
  const std::function<Sig<T>>& get() const {
    return std::get<std::function<Sig<T>>>(fns_);
  }
  bool valid() const { return static_cast<bool>(std::get<0>(fns_)); }
  bool differentiable() const { return static_cast<bool>(std::get<2>(fns_)); }

 private:
  std::tuple<std::function<Sig<double>>, std::function<Sig<Dual1>>, std::function<Sig<Dual2>>> fns_;
};

/// Scalar function on R^arity with exact or finite-difference derivatives.
///
/// Functions built with exact() are generic callables over std::span<const T>
/// and get forward-mode derivatives. numeric() wraps a plain double function;
/// derivatives then come from 4th-order central differences.
class SmoothFunction {
 public:
  SmoothFunction() = default;

  template <class F>
  static SmoothFunction exact(std::size_t arity, const F& f) {
    SmoothFunction s;
    s.arity_ = arity;
    s.f_ = Multi<ScalarSig>(f);
    return s;
  }

  static SmoothFunction numeric(std::size_t arity, std::function<double(std::span<const double>)> f);
  static SmoothFunction constant(std::size_t arity, double c);
  /// The i-th coordinate function.
  static SmoothFunction coordinate(std::size_t arity, std::size_t i);

  /// g applied to the values of parts. Exact when every part is.
  template <class G>
  static SmoothFunction compose(std::vector<SmoothFunction> parts, const G& g) {
    const std::size_t n = parts.empty() ? 0 : parts.front().arity();
    bool all_exact = true;
    for (const auto& p : parts) all_exact = all_exact && p.is_exact();
    auto call = [parts, g](auto y) {
      using T = typename decltype(y)::value_type;
      std::vector<T> vals;
      vals.reserve(parts.size());
      for (const auto& p : parts) vals.push_back(p.template eval<T>(y));
      return T(g(std::span<const T>(vals)));
    };
    if (all_exact) return exact(n, call);
    SmoothFunction s;
    s.arity_ = n;
    s.f_ = Multi<ScalarSig>::from_double(std::function<double(std::span<const double>)>(call));
    return s;
  }

  std::size_t arity() const { return arity_; }
  bool is_exact() const { return f_.differentiable(); }
  bool valid() const { return f_.valid(); }

  double operator()(const Eigen::VectorXd& y) const { return value(y); }
  double value(const Eigen::VectorXd& y) const;
  double value(std::span<const double> y) const { return f_.get<double>()(y); }

  template <class T>
  T eval(std::span<const T> y) const {
    return f_.get<T>()(y);
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& y) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& y) const;
  /// Gradient and Hessian from one batch of evaluations.
  void gradient_hessian(const Eigen::VectorXd& y, Eigen::VectorXd& g, Eigen::MatrixXd& h) const;

  /// Always finite differences, regardless of exactness. Used as the oracle.
  Eigen::VectorXd fd_gradient(const Eigen::VectorXd& y) const;
  Eigen::MatrixXd fd_hessian(const Eigen::VectorXd& y) const;

 private:
  void check_arity(const Eigen::VectorXd& y) const;

  std::size_t arity_ = 0;
  Multi<ScalarSig> f_;
};

}  // namespace geolab
