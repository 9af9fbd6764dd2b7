#include <cmath>
#include <numbers>

#include "geolab/catalog/catalog.hpp"
#include "geolab/core/errors.hpp"
#include "geolab/core/linalg.hpp"

namespace geolab {

namespace {

std::vector<double> to_vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

// Energy of any model, declared as an integral.
FirstIntegral energy_integral(const GeodesicModel& m) { return {"energy", m.hamiltonian, m.kinetic ? 2 : -1}; }

// (q_i p_j - q_j p_i) for a phase vector of an ambient dimension n.
template <class Y>
auto ang(const Y& y, std::size_t n, std::size_t i, std::size_t j) {
  return y[i] * y[n + j] - y[j] * y[n + i];
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

void add_scaled(std::vector<double>& acc, const std::vector<double>& p, double s) {
  if (acc.size() < p.size()) acc.resize(p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) acc[i] += s * p[i];
}

}  // namespace

void EllipsoidParams::validate() const {
  if (a.size() < 2) throw ParameterError("EllipsoidParams: need at least 2 semi-axes");
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (!std::isfinite(a[i])) throw ParameterError("EllipsoidParams: non-finite entry");
  if (!(a[a.size() - 1] > 0.0)) throw ParameterError("EllipsoidParams: a_n must be > 0");
  for (Eigen::Index i = 0; i + 1 < a.size(); ++i) {
    if (!(a[i] > a[i + 1])) throw ParameterError("EllipsoidParams: a must be strictly decreasing");
    if (a[i] - a[i + 1] < 1e-8) throw ParameterError("EllipsoidParams: gap a_k - a_l below 1e-8");
  }
}

GeodesicModel ellipsoid_moser(const EllipsoidParams& params) {
  params.validate();
  const std::size_t n = params.a.size();
  const std::vector<double> a = to_vec(params.a);
  const Eigen::VectorXd d = params.a.cwiseInverse();

  GeodesicModel model;
  model.key = "ellipsoid";
  model.description = "triaxial ellipsoid <A^{-1}x, x> = 1 with Moser's integrals";
  model.anchor = "§2 Theorem 4 (Moser)";
  model.kind = ModelKind::embedded;
  model.dim = n;
  model.embedded = quadric_surface(d);
  model.hamiltonian = embedded_hamiltonian(*model.embedded);
  for (std::size_t k = 0; k < n; ++k) {
    SmoothFunction Fk = SmoothFunction::exact(2 * n, [a, n, k](auto y) {
      auto s = y[n + k] * y[n + k];
      for (std::size_t l = 0; l < n; ++l) {
        if (l == k) continue;
        const auto L = ang(y, n, k, l);
        s += L * L / (a[k] - a[l]);
      }
      return s;
    });
    model.integrals.push_back({"F" + std::to_string(k + 1), Fk, 2, Smoothness::analytic});
  }
  std::vector<std::size_t> all(n);
  for (std::size_t k = 0; k < n; ++k) all[k] = k;
  model.commuting_sets = {all};
  model.periodic.assign(n, false);
  model.sampler = [d](std::mt19937_64& rng) { return sample_on_quadric(d, rng); };
  model.params = {{"a", a}};
  return model;
}

std::vector<double> chasles_tangency(const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                                     const EllipsoidParams& params) {
  params.validate();
  const std::size_t n = params.a.size();
  if (static_cast<std::size_t>(x.size()) != n || static_cast<std::size_t>(v.size()) != n)
    throw std::invalid_argument("chasles_tangency: dimension mismatch");
  if (v.norm() == 0.0) throw std::invalid_argument("chasles_tangency: zero direction");
  const Eigen::VectorXd& a = params.a;
  if (std::abs(x.dot(a.cwiseInverse().asDiagonal() * x) - 1.0) > 1e-8)
    throw std::invalid_argument("chasles_tangency: x is not on the ellipsoid");

  // Discriminant times prod_i (a_i - alpha):
  //   P(alpha) = sum_j v_j^2 prod_{i != j} d_i - sum_{i<j} L_ij^2 prod_{k != i,j} d_k,
  // d_i = a_i - alpha. Coefficients are in increasing powers of alpha.
  auto prod_except = [&](std::size_t i, std::size_t j) {
    std::vector<double> r{1.0};
    for (std::size_t k = 0; k < n; ++k)
      if (k != i && k != j) r = poly_mul(r, {a[k], -1.0});
    return r;
  };
  std::vector<double> P;
  for (std::size_t j = 0; j < n; ++j) add_scaled(P, prod_except(j, j), v[j] * v[j]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double L = x[i] * v[j] - x[j] * v[i];
      add_scaled(P, prod_except(i, j), -L * L);
    }
  // alpha = 0 is the tangency to Q itself; deflate it.
  std::vector<double> deflated(P.begin() + 1, P.end());
  std::vector<double> roots = real_polynomial_roots(deflated);
  std::vector<double> kept;
  for (double r : roots) {
    bool near_pole = false;
    for (std::size_t i = 0; i < n; ++i) near_pole = near_pole || std::abs(r - a[i]) < 1e-8;
    if (!near_pole) kept.push_back(r);
  }
  if (kept.size() != n - 2)
    throw DegenerateLineError("found " + std::to_string(kept.size()) + " tangency parameters, expected " +
                              std::to_string(n - 2));
  return kept;
}

void MaupertuisConfig::validate() const {
  if (a.size() < 2) throw ParameterError("MaupertuisConfig: need at least 2 entries in A");
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = i + 1; j < a.size(); ++j)
      if (std::abs(a[i] - a[j]) < 1e-8) throw ParameterError("MaupertuisConfig: entries of A must be distinct");
  if (!(h > 0.5 * a.maxCoeff()))
    throw ParameterError("MaupertuisConfig: need h > max V = a_max / 2 on the unit sphere");
}

NeumannMaupertuis neumann_maupertuis(const MaupertuisConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.a.size();
  const std::vector<double> a = to_vec(cfg.a);
  const double h = cfg.h;
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  std::vector<std::size_t> all(n);
  for (std::size_t k = 0; k < n; ++k) all[k] = k;

  NeumannMaupertuis out;
  {
    GeodesicModel& g = out.geodesic;
    g.key = "neumann";
    g.description = "Maupertuis metric (h - <Aq,q>/2)<dq,dq> on the unit sphere";
    g.anchor = "§9 Neumann system / Maupertuis principle";
    g.kind = ModelKind::embedded;
    g.dim = n;
    EmbeddedMetric m = quadric_surface(ones);
    m.inverse_factor = SmoothFunction::exact(n, [a, h](auto q) {
      using T = typename decltype(q)::value_type;
      T v(0.0);
      for (std::size_t i = 0; i < a.size(); ++i) v += a[i] * q[i] * q[i];
      return 1.0 / (h - 0.5 * v);
    });
    g.embedded = m;
    g.hamiltonian = embedded_hamiltonian(m);
    for (std::size_t k = 0; k < n; ++k) {
      SmoothFunction Fk = SmoothFunction::exact(2 * n, [a, h, n, k](auto y) {
        using T = typename decltype(y)::value_type;
        T pp(0.0), aqq(0.0);
        for (std::size_t i = 0; i < n; ++i) {
          pp += y[n + i] * y[n + i];
          aqq += a[i] * y[i] * y[i];
        }
        T s = pp / (2.0 * h - aqq) * y[k] * y[k];
        for (std::size_t i = 0; i < n; ++i) {
          if (i == k) continue;
          const T L = ang(y, n, k, i);
          s += L * L / (a[k] - a[i]);
        }
        return s;
      });
      g.integrals.push_back({"Fbar" + std::to_string(k + 1), Fk, 2, Smoothness::analytic});
    }
    g.integrals.push_back(energy_integral(g));
    std::vector<std::size_t> with_h = all;
    with_h.push_back(n);
    g.commuting_sets = {with_h};
    g.periodic.assign(n, false);
    g.sampler = [ones](std::mt19937_64& rng) { return sample_on_quadric(ones, rng); };
    g.params = {{"a", a}, {"h", h}};
  }
  {
    GeodesicModel& s = out.neumann;
    s.key = "neumann_system";
    s.description = "Neumann system H = <p,p>/2 + <Aq,q>/2 on the unit sphere";
    s.anchor = "§9 Neumann system";
    s.kind = ModelKind::embedded;
    s.kinetic = false;
    s.dim = n;
    s.embedded = quadric_surface(ones);
    s.hamiltonian = SmoothFunction::exact(2 * n, [a, n](auto y) {
      using T = typename decltype(y)::value_type;
      T e(0.0);
      for (std::size_t i = 0; i < n; ++i) e += y[n + i] * y[n + i] + a[i] * y[i] * y[i];
      return 0.5 * e;
    });
    for (std::size_t k = 0; k < n; ++k) {
      SmoothFunction Fk = SmoothFunction::exact(2 * n, [a, n, k](auto y) {
        auto s2 = y[k] * y[k];
        for (std::size_t i = 0; i < n; ++i) {
          if (i == k) continue;
          const auto L = ang(y, n, k, i);
          s2 += L * L / (a[k] - a[i]);
        }
        return s2;
      });
      s.integrals.push_back({"F" + std::to_string(k + 1), Fk, 2, Smoothness::analytic});
    }
    s.commuting_sets = {all};
    s.periodic.assign(n, false);
    s.sampler = [ones](std::mt19937_64& rng) { return sample_on_quadric(ones, rng); };
    s.params = {{"a", a}};
  }
  return out;
}

GeodesicModel brailov_manakov_sphere(const Eigen::VectorXd& av, const Eigen::VectorXd& bv, bool deformed) {
  if (av.size() != bv.size() || av.size() < 3)
    throw ParameterError("brailov: a and b must have the same length n + 1 >= 3");
  const std::size_t n = av.size() - 1;
  for (std::size_t i = 0; i < n; ++i)
    if (!(av[i] > av[i + 1])) throw ParameterError("brailov: need a_1 > ... > a_n > a_{n+1}");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(bv[i] > bv[i + 1])) throw ParameterError("brailov: need b_1 > ... > b_n");
  if (!(bv[n] > bv[0])) throw ParameterError("brailov: need b_{n+1} > b_1");
  const std::vector<double> a = to_vec(av), b = to_vec(bv);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);

  GeodesicModel model;
  model.key = "brailov";
  model.anchor = "§9 Brailov theorem";
  model.kind = ModelKind::embedded;
  model.dim = n;
  model.embedded = quadric_surface(ones);
  SmoothFunction raw = SmoothFunction::exact(2 * n, [a, b, n, deformed](auto y) {
    using T = typename decltype(y)::value_type;
    T s(0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const T L = ang(y, n, i, j);
        s += (b[i] - b[j]) / (a[i] - a[j]) * L * L;
      }
    if (deformed) {
      for (std::size_t i = 0; i < n; ++i) s += (b[n] - b[i]) / (a[i] - a[n]) * y[n + i] * y[n + i];
    }
    return 0.5 * s;
  });
  model.hamiltonian = gauge_fix_hamiltonian(*model.embedded, raw);
  model.kinetic = true;
  model.description = deformed ? "deformed Brailov-Manakov Hamiltonian on the sphere"
                               : "Brailov-Manakov metric H_{a,b} on the sphere";
  for (std::size_t k = 1; k <= n; ++k) {
    SmoothFunction Fk = SmoothFunction::exact(2 * n, [a, n, k, deformed](auto y) {
      using T = typename decltype(y)::value_type;
      auto coef = [&](double x, double z) { return (std::pow(x, double(k)) - std::pow(z, double(k))) / (x - z); };
      T s(0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
          const T L = ang(y, n, i, j);
          s += coef(a[i], a[j]) * L * L;
        }
      // Without the deformation only the so(n) part commutes with H_{a,b}.
      if (deformed)
        for (std::size_t i = 0; i < n; ++i) s -= coef(a[n], a[i]) * y[n + i] * y[n + i];
      return s;
    });
    model.integrals.push_back({"F" + std::to_string(k), Fk, 2, Smoothness::analytic});
  }
  model.integrals.push_back(energy_integral(model));
  std::vector<std::size_t> all(n + 1);
  for (std::size_t k = 0; k <= n; ++k) all[k] = k;
  model.commuting_sets = {all};
  model.periodic.assign(n, false);
  model.sampler = [ones](std::mt19937_64& rng) { return sample_on_quadric(ones, rng); };
  model.params = {{"a", a}, {"b", b}, {"deformed", deformed}};
  return model;
}

// ---- projective family ------------------------------------------------------

ProjectiveFamily projective_family(const EllipsoidParams& params) {
  params.validate();
  const std::size_t n = params.a.size();
  const std::vector<double> a = to_vec(params.a);
  const Eigen::VectorXd d = params.a.cwiseInverse();
  ProjectiveFamily fam;
  fam.params = params;
  fam.g = ellipsoid_moser(params);
  fam.g.key = "projective_g";

  GeodesicModel& gb = fam.g_bar;
  gb.key = "projective";
  gb.description = "companion metric <A^{-1}dx,dx>/<A^{-1}x,A^{-1}x> on the ellipsoid";
  gb.anchor = "§9 projectively equivalent metrics";
  gb.kind = ModelKind::embedded;
  gb.dim = n;
  EmbeddedMetric m = quadric_surface(d);
  m.inverse_factor = SmoothFunction::exact(n, [a](auto q) {
    using T = typename decltype(q)::value_type;
    T s(0.0);
    for (std::size_t i = 0; i < a.size(); ++i) s += q[i] * q[i] / (a[i] * a[i]);
    return s;
  });
  m.base_inverse_form = params.a.asDiagonal();
  gb.embedded = m;
  gb.hamiltonian = embedded_hamiltonian(m);
  gb.integrals = {energy_integral(gb)};
  gb.commuting_sets = {{0}};
  gb.periodic.assign(n, false);
  gb.sampler = [d](std::mt19937_64& rng) { return sample_on_quadric(d, rng); };
  gb.params = {{"a", a}};
  return fam;
}

Eigen::MatrixXd ProjectiveFamily::tangent_basis(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd n = params.a.cwiseInverse().asDiagonal() * x;
  return orthonormal_complement(n);
}

Eigen::MatrixXd ProjectiveFamily::metric_g(const Eigen::VectorXd&, const Eigen::MatrixXd& E) const {
  return E.transpose() * E;
}

Eigen::MatrixXd ProjectiveFamily::metric_g_bar(const Eigen::VectorXd& x, const Eigen::MatrixXd& E) const {
  const Eigen::VectorXd ax = params.a.cwiseInverse().asDiagonal() * x;
  return E.transpose() * params.a.cwiseInverse().asDiagonal() * E / ax.squaredNorm();
}

Eigen::MatrixXd ProjectiveFamily::S_from_definition(const Eigen::VectorXd& x, const Eigen::MatrixXd& E) const {
  const Eigen::MatrixXd G = metric_g(x, E);
  const Eigen::MatrixXd Gb = metric_g_bar(x, E);
  const double m = static_cast<double>(E.cols());
  const double ratio = Gb.determinant() / G.determinant();
  return std::pow(ratio, 1.0 / (m + 1.0)) * Gb.partialPivLu().solve(G);
}

Eigen::MatrixXd ProjectiveFamily::S_closed_form(const Eigen::VectorXd& x, const Eigen::MatrixXd& E) const {
  const Eigen::MatrixXd A = params.a.asDiagonal();
  return E.transpose() * (A - x * x.transpose()) * E;
}

namespace {
Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& S, int k) {
  Eigen::MatrixXd base = k < 0 ? Eigen::MatrixXd(S.inverse()) : S;
  Eigen::MatrixXd r = Eigen::MatrixXd::Identity(S.rows(), S.cols());
  for (int i = 0; i < std::abs(k); ++i) r = r * base;
  return r;
}
}  // namespace

Eigen::MatrixXd ProjectiveFamily::member_g(int k, const Eigen::VectorXd& x, const Eigen::MatrixXd& E) const {
  return metric_g(x, E) * matrix_power(S_closed_form(x, E), k);
}

Eigen::MatrixXd ProjectiveFamily::member_g_bar(int k, const Eigen::VectorXd& x, const Eigen::MatrixXd& E) const {
  return metric_g_bar(x, E) * matrix_power(S_closed_form(x, E), k);
}

Eigen::MatrixXd ProjectiveFamily::conformal_companion(const Eigen::VectorXd& x, const Eigen::MatrixXd& E) const {
  const Eigen::VectorXd ax = params.a.cwiseInverse().asDiagonal() * x;
  return E.transpose() * E / ax.squaredNorm();
}

// ---- rigid body metrics -----------------------------------------------------

GeodesicModel rigid_body_maupertuis(RigidBodyCase which, double h) {
  if (!(h > 1.0)) throw ParameterError("rigid_body_maupertuis: need h > 1");
  const bool kov = which == RigidBodyCase::kovalevskaya;
  const std::vector<double> a = kov ? std::vector<double>{1.0, 1.0, 2.0} : std::vector<double>{1.0, 1.0, 4.0};
  const double divisor = kov ? 2.0 : 4.0;
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(3);
  EmbeddedMetric m = quadric_surface(ones);
  // Metric c(q) <A dx,dx>/<A^{-1}q,q> with c = (h - q_1)/divisor; co-metric factor is its inverse.
  m.inverse_factor = SmoothFunction::exact(3, [a, h, divisor](auto q) {
    using T = typename decltype(q)::value_type;
    T s(0.0);
    for (std::size_t i = 0; i < 3; ++i) s += q[i] * q[i] / a[i];
    return s * divisor / (h - q[0]);
  });
  m.base_inverse_form = Eigen::Vector3d(1.0 / a[0], 1.0 / a[1], 1.0 / a[2]).asDiagonal();

  GeodesicModel model;
  model.key = kov ? "kovalevskaya" : "goryachev_chaplygin";
  model.description = kov ? "Kovalevskaya metric ((h-q1)/2)<A dx,dx>/<A^{-1}q,q>, A = diag(1,1,2)"
                          : "Goryachev-Chaplygin metric ((h-q1)/4)<A dx,dx>/<A^{-1}q,q>, A = diag(1,1,4)";
  model.anchor = kov ? "§9 Kovalevskaya metric" : "§9 Goryachev-Chaplygin metric";
  model.kind = ModelKind::embedded;
  model.dim = 3;
  model.embedded = m;
  model.hamiltonian = embedded_hamiltonian(m);
  model.integrals = {energy_integral(model)};
  model.commuting_sets = {{0}};
  model.periodic.assign(3, false);
  model.domain_check = [h](const Eigen::VectorXd& q) {
    if (!(h - q[0] > 0.0)) throw DomainError("rigid body metric: h - q1 <= 0");
  };
  model.sampler = [ones](std::mt19937_64& rng) { return sample_on_quadric(ones, rng); };
  model.params = {{"h", h}, {"A", a}};
  return model;
}

}  // namespace geolab
