#include <cmath>
#include <numbers>

#include "geolab/catalog/catalog.hpp"
#include "geolab/core/errors.hpp"

namespace geolab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Charts reject states this close to a coordinate singularity.
constexpr double kSingularMargin = 1e-6;

CotangentState sample_chart(std::mt19937_64& rng, const std::vector<std::pair<double, double>>& box) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const Eigen::Index d = static_cast<Eigen::Index>(box.size());
  CotangentState s{Eigen::VectorXd(d), Eigen::VectorXd(d)};
  for (Eigen::Index i = 0; i < d; ++i) {
    std::uniform_real_distribution<double> ud(box[i].first, box[i].second);
    s.x[i] = ud(rng);
  }
  for (Eigen::Index i = 0; i < d; ++i) s.p[i] = nd(rng);
  return s;
}

}  // namespace

double TrigSeries::sampled_min(int samples) const {
  double m = eval(0.0);
  for (int i = 1; i < samples; ++i) m = std::min(m, eval(kTwoPi * i / samples));
  return m;
}

GeodesicModel flat_torus(double a, double b, double c) {
  if (!(a > 0.0) || !(a * c - b * b > 0.0))
    throw ParameterError("flat_torus: form (a b; b c) must be positive definite");
  const double det = a * c - b * b;
  // The co-metric is (a b; b c); the metric is its inverse.
  const std::vector<double> g{c / det, -b / det, -b / det, a / det};
  ChartMetric m;
  m.dim = 2;
  m.g = Multi<MatrixSig>([g](auto x) {
    using T = typename decltype(x)::value_type;
    return std::vector<T>{T(g[0]), T(g[1]), T(g[2]), T(g[3])};
  });
  m.periodic = {true, true};

  GeodesicModel model;
  model.key = "flat_torus";
  model.description = "flat torus with constant co-metric (a b; b c)";
  model.anchor = "§2 flat torus";
  model.kind = ModelKind::chart;
  model.dim = 2;
  model.hamiltonian = chart_hamiltonian(m);
  model.chart = m;
  model.periodic = m.periodic;
  model.integrals = {{"p1", SmoothFunction::coordinate(4, 2), 1, Smoothness::analytic},
                     {"p2", SmoothFunction::coordinate(4, 3), 1, Smoothness::analytic}};
  model.commuting_sets = {{0, 1}};
  model.sampler = [](std::mt19937_64& rng) { return sample_chart(rng, {{0.0, kTwoPi}, {0.0, kTwoPi}}); };
  model.params = {{"a", a}, {"b", b}, {"c", c}};
  return model;
}

GeodesicModel round_sphere() {
  const Eigen::Vector3d d(1.0, 1.0, 1.0);
  GeodesicModel model;
  model.key = "sphere";
  model.description = "unit sphere in R^3 with the vector integral F = [x, xdot]";
  model.anchor = "§2 sphere";
  model.kind = ModelKind::embedded;
  model.dim = 3;
  model.embedded = quadric_surface(d);
  model.hamiltonian = embedded_hamiltonian(*model.embedded);
  auto component = [](int k) {
    return SmoothFunction::exact(6, [k](auto y) {
      // (q x p)_k
      const int i = (k + 1) % 3, j = (k + 2) % 3;
      return y[i] * y[3 + j] - y[j] * y[3 + i];
    });
  };
  SmoothFunction energy = SmoothFunction::exact(6, [](auto y) {
    using T = typename decltype(y)::value_type;
    T s(0.0);
    for (int k = 0; k < 3; ++k) {
      const int i = (k + 1) % 3, j = (k + 2) % 3;
      const T f = y[i] * y[3 + j] - y[j] * y[3 + i];
      s += f * f;
    }
    return 0.5 * s;
  });
  model.integrals = {{"f1", component(0), 1, Smoothness::analytic},
                     {"f2", component(1), 1, Smoothness::analytic},
                     {"f3", component(2), 1, Smoothness::analytic},
                     {"energy", energy, 2, Smoothness::analytic}};
  model.commuting_sets = {{0, 3}, {1, 3}, {2, 3}};
  model.periodic = {false, false, false};
  model.sampler = [d](std::mt19937_64& rng) { return sample_on_quadric(d, rng); };
  return model;
}

RevolutionProfile torus_profile(double R, double rho) {
  if (!(rho > 0.0) || !(R > rho)) throw ParameterError("torus_profile: need R > rho > 0");
  RevolutionProfile p;
  p.name = "torus";
  p.r = SmoothFunction::exact(1, [R, rho](auto z) { return R + rho * cos(z[0] / rho); });
  p.periodic = rho == 1.0;
  p.z_min = 0.0;
  p.z_max = kTwoPi * rho;
  return p;
}

RevolutionProfile sphere_profile() {
  RevolutionProfile p;
  p.name = "sphere";
  p.r = SmoothFunction::exact(1, [](auto z) { return sin(z[0]); });
  p.periodic = false;
  p.z_min = 0.0;
  p.z_max = std::numbers::pi;
  return p;
}

GeodesicModel surface_of_revolution(const RevolutionProfile& profile) {
  if (!profile.r.valid() || profile.r.arity() != 1) throw ParameterError("surface_of_revolution: bad profile");
  // Positivity on the (open) domain, checked on a dense sample.
  const int samples = 2048;
  for (int i = 0; i < samples; ++i) {
    double z = profile.z_min + (profile.z_max - profile.z_min) * (i + 0.5) / samples;
    if (!profile.periodic && (z - profile.z_min < kSingularMargin || profile.z_max - z < kSingularMargin)) continue;
    Eigen::VectorXd zz(1);
    zz << z;
    if (!(profile.r.value(zz) > 0.0))
      throw ParameterError("surface_of_revolution: r(z) <= 0 at z = " + std::to_string(z));
  }
  const SmoothFunction r = profile.r;
  ChartMetric m;
  m.dim = 2;
  m.g = Multi<MatrixSig>([r](auto x) {
    using T = typename decltype(x)::value_type;
    const T rz = r.template eval<T>(x.first(1));
    return std::vector<T>{T(1.0), T(0.0), T(0.0), rz * rz};
  });
  m.periodic = {profile.periodic, true};
  if (!profile.periodic) {
    const double lo = profile.z_min, hi = profile.z_max;
    m.domain_check = [lo, hi](const Eigen::VectorXd& x) {
      if (x[0] - lo < kSingularMargin || hi - x[0] < kSingularMargin)
        throw DomainError("surface_of_revolution: z = " + std::to_string(x[0]) +
                          " is outside the chart or within 1e-6 of its singular boundary");
    };
  }

  GeodesicModel model;
  model.key = "revolution";
  model.description = "surface of revolution ds^2 = dz^2 + r(z)^2 dphi^2, profile " + profile.name;
  model.anchor = "§2 Theorem 2 (Clairaut)";
  model.kind = ModelKind::chart;
  model.dim = 2;
  model.chart = m;
  model.hamiltonian = chart_hamiltonian(m);
  model.domain_check = m.domain_check;
  model.periodic = m.periodic;
  SmoothFunction geometric = SmoothFunction::exact(4, [r](auto y) {
    using T = typename decltype(y)::value_type;
    const T rz = r.template eval<T>(y.first(1));
    const T zdot = y[2];
    const T phidot = y[3] / (rz * rz);
    const T speed = sqrt(zdot * zdot + rz * rz * phidot * phidot);
    // psi is the angle between the velocity and the parallel.
    const T psi = atan2(zdot, rz * phidot);
    return rz * speed * cos(psi);
  });
  model.integrals = {{"p_phi", SmoothFunction::coordinate(4, 3), 1, Smoothness::analytic},
                     {"clairaut", geometric, 1, Smoothness::smooth},
                     {"energy", model.hamiltonian, 2, Smoothness::analytic}};
  model.commuting_sets = {{0, 2}, {1, 2}};
  const double lo = profile.periodic ? 0.0 : profile.z_min + 0.1 * (profile.z_max - profile.z_min);
  const double hi = profile.periodic ? kTwoPi : profile.z_max - 0.1 * (profile.z_max - profile.z_min);
  model.sampler = [lo, hi](std::mt19937_64& rng) { return sample_chart(rng, {{lo, hi}, {0.0, kTwoPi}}); };
  model.params = {{"profile", profile.name}};
  return model;
}

GeodesicModel liouville_surface(const TrigSeries& f, const TrigSeries& g) {
  if (!(f.sampled_min() + g.sampled_min() > 0.0))
    throw ParameterError("liouville_surface: f + g must be positive everywhere");
  ChartMetric m;
  m.dim = 2;
  m.g = Multi<MatrixSig>([f, g](auto x) {
    using T = typename decltype(x)::value_type;
    const T c = f.eval(x[0]) + g.eval(x[1]);
    return std::vector<T>{c, T(0.0), T(0.0), c};
  });
  m.periodic = {true, true};

  GeodesicModel model;
  model.key = "liouville";
  model.description = "Liouville surface (f(x1) + g(x2))(dx1^2 + dx2^2)";
  model.anchor = "§2 Theorem 3 (Liouville)";
  model.kind = ModelKind::chart;
  model.dim = 2;
  model.chart = m;
  model.hamiltonian = chart_hamiltonian(m);
  model.periodic = m.periodic;
  SmoothFunction F = SmoothFunction::exact(4, [f, g](auto y) {
    const auto fx = f.eval(y[0]);
    const auto gx = g.eval(y[1]);
    return (gx * y[2] * y[2] - fx * y[3] * y[3]) / (fx + gx);
  });
  model.integrals = {{"F", F, 2, Smoothness::analytic}, {"energy", model.hamiltonian, 2, Smoothness::analytic}};
  model.commuting_sets = {{0, 1}};
  model.sampler = [](std::mt19937_64& rng) { return sample_chart(rng, {{0.0, kTwoPi}, {0.0, kTwoPi}}); };
  auto series = [](const TrigSeries& s) {
    return nlohmann::json{{"c0", s.c0}, {"cos", s.cos_coeffs}, {"sin", s.sin_coeffs}};
  };
  model.params = {{"f", series(f)}, {"g", series(g)}};
  return model;
}

}  // namespace geolab
