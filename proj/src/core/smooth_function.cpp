#include "geolab/core/smooth_function.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "geolab/core/errors.hpp"

namespace geolab {

namespace {

double fd_step(double yi) {
  static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  return base * std::max(1.0, std::abs(yi));
}

// Evaluates f at y with component i shifted, reporting the stencil location
// if the evaluation throws.
double stencil_eval(const SmoothFunction& f, Eigen::VectorXd& y, std::size_t i, double offset) {
  const double saved = y[i];
  y[i] = saved + offset;
  double r = 0.0;
  try {
    r = f.value(y);
  } catch (const std::exception& e) {
    y[i] = saved;
    std::ostringstream os;
    os << "evaluation failed in stencil at coordinate " << i << ", offset " << offset << ": " << e.what();
    throw DerivativeError(os.str());
  }
  y[i] = saved;
  return r;
}

}  // namespace

SmoothFunction SmoothFunction::numeric(std::size_t arity, std::function<double(std::span<const double>)> f) {
  SmoothFunction s;
  s.arity_ = arity;
  s.f_ = Multi<ScalarSig>::from_double(std::move(f));
  return s;
}

SmoothFunction SmoothFunction::constant(std::size_t arity, double c) {
  return exact(arity, [c](auto y) {
    using T = typename decltype(y)::value_type;
    return T(c);
  });
}

SmoothFunction SmoothFunction::coordinate(std::size_t arity, std::size_t i) {
  return exact(arity, [i](auto y) { return y[i]; });
}

void SmoothFunction::check_arity(const Eigen::VectorXd& y) const {
  if (static_cast<std::size_t>(y.size()) != arity_) {
    throw std::invalid_argument("SmoothFunction: argument has size " + std::to_string(y.size()) +
                                ", expected " + std::to_string(arity_));
  }
}

double SmoothFunction::value(const Eigen::VectorXd& y) const {
  check_arity(y);
  return f_.get<double>()(std::span<const double>(y.data(), arity_));
}

Eigen::VectorXd SmoothFunction::gradient(const Eigen::VectorXd& y) const {
  check_arity(y);
  if (!is_exact()) return fd_gradient(y);
  const std::size_t n = arity_;
  std::vector<Dual1> a(n);
  for (std::size_t k = 0; k < n; ++k) a[k] = Dual1(y[k], 0.0);
  Eigen::VectorXd g(n);
  const auto& f = f_.get<Dual1>();
  for (std::size_t i = 0; i < n; ++i) {
    a[i].d = 1.0;
    g[i] = f(std::span<const Dual1>(a)).d;
    a[i].d = 0.0;
  }
  return g;
}

void SmoothFunction::gradient_hessian(const Eigen::VectorXd& y, Eigen::VectorXd& g, Eigen::MatrixXd& h) const {
  check_arity(y);
  const std::size_t n = arity_;
  if (!is_exact()) {
    g = fd_gradient(y);
    h = fd_hessian(y);
    return;
  }
  g.resize(n);
  h.resize(n, n);
  std::vector<Dual2> a(n);
  for (std::size_t k = 0; k < n; ++k) a[k] = Dual2(Dual1(y[k], 0.0), Dual1(0.0, 0.0));
  const auto& f = f_.get<Dual2>();
  for (std::size_t i = 0; i < n; ++i) {
    a[i].d.v = 1.0;
    for (std::size_t j = i; j < n; ++j) {
      a[j].v.d = 1.0;
      const Dual2 r = f(std::span<const Dual2>(a));
      a[j].v.d = 0.0;
      h(i, j) = h(j, i) = r.d.d;
      if (i == j) g[i] = r.d.v;
    }
    a[i].d.v = 0.0;
  }
}

Eigen::MatrixXd SmoothFunction::hessian(const Eigen::VectorXd& y) const {
  Eigen::VectorXd g;
  Eigen::MatrixXd h;
  gradient_hessian(y, g, h);
  return h;
}

Eigen::VectorXd SmoothFunction::fd_gradient(const Eigen::VectorXd& y) const {
  check_arity(y);
  Eigen::VectorXd yy = y;
  Eigen::VectorXd g(arity_);
  for (std::size_t i = 0; i < arity_; ++i) {
    const double h = fd_step(y[i]);
    const double fm2 = stencil_eval(*this, yy, i, -2.0 * h);
    const double fm1 = stencil_eval(*this, yy, i, -h);
    const double fp1 = stencil_eval(*this, yy, i, h);
    const double fp2 = stencil_eval(*this, yy, i, 2.0 * h);
    g[i] = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
  }
  return g;
}

Eigen::MatrixXd SmoothFunction::fd_hessian(const Eigen::VectorXd& y) const {
  check_arity(y);
  // Central differences of the FD gradient; only used for numeric functions.
  const std::size_t n = arity_;
  Eigen::MatrixXd h(n, n);
  Eigen::VectorXd yy = y;
  for (std::size_t j = 0; j < n; ++j) {
    const double s = 1e-4 * std::max(1.0, std::abs(y[j]));
    yy[j] = y[j] + s;
    Eigen::VectorXd gp = fd_gradient(yy);
    yy[j] = y[j] - s;
    Eigen::VectorXd gm = fd_gradient(yy);
    yy[j] = y[j];
    h.col(j) = (gp - gm) / (2.0 * s);
  }
  return 0.5 * (h + h.transpose());
}

}  // namespace geolab
