#include "geolab/core/model.hpp"

#include <cmath>

#include "geolab/core/errors.hpp"
#include "geolab/core/linalg.hpp"

namespace geolab {

Eigen::VectorXd CotangentState::phase() const {
  Eigen::VectorXd y(x.size() + p.size());
  y << x, p;
  return y;
}

CotangentState CotangentState::from_phase(const Eigen::VectorXd& y) {
  const Eigen::Index d = y.size() / 2;
  return {y.head(d), y.tail(d)};
}

GradientPair FirstIntegral::gradient(const CotangentState& s) const { return derivative(fn, s); }

GradientPair derivative(const SmoothFunction& fn, const CotangentState& s) {
  const Eigen::VectorXd g = fn.gradient(s.phase());
  const Eigen::Index d = s.x.size();
  return {g.head(d), g.tail(d)};
}

Eigen::MatrixXd ChartMetric::eval(const Eigen::VectorXd& x) const {
  const auto v = g.get<double>()(std::span<const double>(x.data(), dim));
  Eigen::MatrixXd m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) m(i, j) = v[i * dim + j];
  return m;
}

EmbeddedMetric quadric_surface(const Eigen::VectorXd& d) {
  const std::size_t n = d.size();
  std::vector<double> dv(d.data(), d.data() + n);
  EmbeddedMetric m;
  m.ambient_dim = n;
  m.constraint = SmoothFunction::exact(n, [dv](auto q) {
    using T = typename decltype(q)::value_type;
    T s(0.0);
    for (std::size_t i = 0; i < dv.size(); ++i) s += dv[i] * q[i] * q[i];
    return 0.5 * (s - 1.0);
  });
  m.normal = Multi<VectorSig>([dv](auto q) {
    using T = typename decltype(q)::value_type;
    std::vector<T> n(dv.size());
    for (std::size_t i = 0; i < dv.size(); ++i) n[i] = dv[i] * q[i];
    return n;
  });
  return m;
}

SmoothFunction chart_hamiltonian(const ChartMetric& metric) {
  const std::size_t d = metric.dim;
  return SmoothFunction::exact(2 * d, [metric, d](auto y) {
    using T = typename decltype(y)::value_type;
    const std::vector<T> g = metric.g.get<T>()(y.first(d));
    return 0.5 * inverse_quadratic_form<T>(g, y.subspan(d, d), d);
  });
}

SmoothFunction embedded_hamiltonian(const EmbeddedMetric& metric) {
  const std::size_t n = metric.ambient_dim;
  if (metric.euclidean()) {
    return SmoothFunction::exact(2 * n, [n](auto y) {
      using T = typename decltype(y)::value_type;
      T s(0.0);
      for (std::size_t i = 0; i < n; ++i) s += y[n + i] * y[n + i];
      return 0.5 * s;
    });
  }
  Eigen::MatrixXd k0 = metric.base_inverse_form.size() ? metric.base_inverse_form : Eigen::MatrixXd::Identity(n, n);
  return SmoothFunction::exact(2 * n, [metric, k0, n](auto y) {
    using T = typename decltype(y)::value_type;
    const auto q = y.first(n);
    const auto p = y.subspan(n, n);
    const std::vector<T> nv = metric.normal.get<T>()(q);
    std::vector<T> kp(n, T(0.0)), kn(n, T(0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (k0(i, j) == 0.0) continue;
        kp[i] += k0(i, j) * p[j];
        kn[i] += k0(i, j) * nv[j];
      }
    T pkp(0.0), nkp(0.0), nkn(0.0), nn(0.0), np(0.0);
    for (std::size_t i = 0; i < n; ++i) {
      pkp += p[i] * kp[i];
      nkp += nv[i] * kp[i];
      nkn += nv[i] * kn[i];
      nn += nv[i] * nv[i];
      np += nv[i] * p[i];
    }
    const T k = metric.inverse_factor.valid() ? metric.inverse_factor.template eval<T>(q) : T(1.0);
    return 0.5 * k * (pkp - nkp * nkp / nkn) + 0.5 * np * np / nn;
  });
}

SmoothFunction gauge_fix_hamiltonian(const EmbeddedMetric& metric, const SmoothFunction& h) {
  const std::size_t n = metric.ambient_dim;
  return SmoothFunction::exact(2 * n, [metric, h, n](auto y) {
    using T = typename decltype(y)::value_type;
    const auto q = y.first(n);
    const std::vector<T> nv = metric.normal.get<T>()(q);
    T nn(0.0), np(0.0);
    for (std::size_t i = 0; i < n; ++i) {
      nn += nv[i] * nv[i];
      np += nv[i] * y[n + i];
    }
    const T t = np / nn;
    std::vector<T> z(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = q[i];
      z[n + i] = y[n + i] - t * nv[i];
    }
    return h.template eval<T>(std::span<const T>(z)) + 0.5 * np * t;
  });
}

const FirstIntegral& GeodesicModel::integral(std::string_view name) const {
  return integrals.at(integral_index(name));
}

std::size_t GeodesicModel::integral_index(std::string_view name) const {
  for (std::size_t i = 0; i < integrals.size(); ++i)
    if (integrals[i].name == name) return i;
  throw std::out_of_range("model '" + key + "' has no integral named '" + std::string(name) + "'");
}

void GeodesicModel::check_domain(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != dim)
    throw DomainError("state dimension " + std::to_string(x.size()) + " does not match model dimension " +
                      std::to_string(dim));
  if (!x.allFinite()) throw DomainError("non-finite configuration");
  if (domain_check) domain_check(x);
}

double GeodesicModel::constraint_residual(const CotangentState& s) const {
  if (kind != ModelKind::embedded) return 0.0;
  return std::abs(embedded->constraint.value(s.x));
}

double GeodesicModel::tangency_residual(const CotangentState& s) const {
  if (kind != ModelKind::embedded) return 0.0;
  const Eigen::VectorXd n = surface_normal(*this, s.x);
  return std::abs(n.dot(s.p)) / n.norm();
}

Eigen::VectorXd surface_normal(const GeodesicModel& model, const Eigen::VectorXd& q) {
  const auto v = model.embedded->normal.get<double>()(std::span<const double>(q.data(), q.size()));
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double hamiltonian_eval(const GeodesicModel& model, const CotangentState& s) {
  model.check_domain(s.x);
  return model.hamiltonian.value(s.phase());
}

GradientPair hamiltonian_flow_field(const GeodesicModel& model, const CotangentState& s) {
  model.check_domain(s.x);
  const GradientPair g = derivative(model.hamiltonian, s);
  return {g.dp, -g.dx};
}

Eigen::VectorXd project_tangent(const Eigen::VectorXd& n, const Eigen::VectorXd& p) {
  return p - (n.dot(p) / n.squaredNorm()) * n;
}

CotangentState sample_on_quadric(const Eigen::VectorXd& d, std::mt19937_64& rng, double p_scale) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const Eigen::Index n = d.size();
  Eigen::VectorXd q(n), p(n);
  for (Eigen::Index i = 0; i < n; ++i) q[i] = nd(rng);
  for (Eigen::Index i = 0; i < n; ++i) p[i] = p_scale * nd(rng);
  q /= std::sqrt(q.dot(d.asDiagonal() * q));
  const Eigen::VectorXd nrm = d.asDiagonal() * q;
  return {q, project_tangent(nrm, p)};
}

}  // namespace geolab
