#include <cmath>
#include <numbers>

#include "geolab/catalog/catalog.hpp"
#include "geolab/core/errors.hpp"

namespace geolab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Makes the first non-negligible component positive so eigenvectors are reproducible.
Eigen::Vector2d canonical_sign(Eigen::Vector2d v) {
  const int i = std::abs(v[0]) > 1e-12 ? 0 : 1;
  return v[i] < 0 ? Eigen::Vector2d(-v) : v;
}

}  // namespace

SolModel make_sol_model(const Eigen::Matrix2d& B) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (!std::isfinite(B(i, j)) || std::abs(B(i, j) - std::round(B(i, j))) > 1e-12)
        throw ParameterError("sol: B must have integer entries");
  if (std::abs(B.determinant() - 1.0) > 1e-12) throw ParameterError("sol: det B must be 1");
  const double tr = B.trace();
  SolModel s;
  s.B = B;
  if (tr > 2.0 + 1e-12) {
    if (std::abs(B(0, 1) - B(1, 0)) > 1e-12)
      throw ParameterError("sol: hyperbolic B must be symmetric positive definite");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(B);
    s.hyperbolic = true;
    s.lambda = es.eigenvalues()[1];
    s.u = canonical_sign(es.eigenvectors().col(1));
    s.w = canonical_sign(es.eigenvectors().col(0));
    return s;
  }
  if (std::abs(tr - 2.0) <= 1e-12 && !B.isApprox(Eigen::Matrix2d::Identity())) {
    // K = B - I satisfies K^2 = 0: its image is its kernel.
    const Eigen::Matrix2d K = B - Eigen::Matrix2d::Identity();
    const int j = K.col(0).norm() > K.col(1).norm() ? 0 : 1;
    s.hyperbolic = false;
    s.lambda = 1.0;
    s.e = K.col(j);
    s.f = Eigen::Vector2d::Unit(j);
    s.shift = 1.0;
    return s;
  }
  throw ParameterError("sol: B must have trace > 2 (hyperbolic) or trace 2 with B != I (parabolic)");
}

Eigen::Matrix2d SolModel::G(double z) const {
  const auto g = G<double>(z);
  Eigen::Matrix2d m;
  m << g[0], g[1], g[2], g[3];
  return m;
}

Eigen::Matrix2d SolModel::transport_integral() const {
  if (hyperbolic) {
    const double L = std::log(lambda);
    return u * u.transpose() * (std::numbers::pi / L) * (1.0 - 1.0 / (lambda * lambda)) +
           w * w.transpose() * (std::numbers::pi / L) * (lambda * lambda - 1.0);
  }
  const Eigen::Matrix2d K = B - Eigen::Matrix2d::Identity();
  return kTwoPi * (Eigen::Matrix2d::Identity() - 0.5 * (K + K.transpose()) + K * K.transpose() / 3.0);
}

GeodesicModel sol_manifold(const Eigen::Matrix2d& B) { return sol_manifold(make_sol_model(B)); }

GeodesicModel sol_manifold(const SolModel& sol) {
  ChartMetric m;
  m.dim = 3;
  m.g = Multi<MatrixSig>([sol](auto x) {
    using T = typename decltype(x)::value_type;
    const auto g = sol.G<T>(x[2]);
    return std::vector<T>{g[0], g[1], T(0.0), g[2], g[3], T(0.0), T(0.0), T(0.0), T(1.0)};
  });
  m.periodic = {false, false, false};

  GeodesicModel model;
  model.key = sol.hyperbolic ? "sol" : "nil";
  model.description = sol.hyperbolic ? "torus bundle with hyperbolic monodromy B (SOL geometry)"
                                     : "torus bundle with parabolic monodromy B (NIL geometry)";
  model.anchor = sol.hyperbolic ? "§4 Theorem 9" : "§4 Theorem 8";
  model.kind = ModelKind::chart;
  model.dim = 3;
  model.chart = m;
  model.hamiltonian = chart_hamiltonian(m);
  model.periodic = m.periodic;

  // l1, l2: linear forms in (p_x, p_y), phase layout (x, y, z, px, py, pz).
  const Eigen::Vector2d a = sol.hyperbolic ? sol.u : sol.e;
  const Eigen::Vector2d b = sol.hyperbolic ? sol.w : sol.f;
  const bool hyp = sol.hyperbolic;
  const double lnl = std::log(sol.lambda), shift = sol.shift;
  SmoothFunction F1 = SmoothFunction::exact(6, [a, b, hyp](auto y) {
    const auto l1 = a[0] * y[3] + a[1] * y[4];
    if (hyp) return l1 * (b[0] * y[3] + b[1] * y[4]);
    return l1 * l1;
  });
  SmoothFunction F2 = SmoothFunction::exact(6, [a, b, hyp, lnl, shift](auto y) {
    using T = typename decltype(y)::value_type;
    const T l1 = a[0] * y[3] + a[1] * y[4];
    const T l2 = b[0] * y[3] + b[1] * y[4];
    const T f1 = hyp ? l1 * l2 : l1 * l1;
    // exp(-1/F1^2) underflows to 0 (with all derivatives) well before |F1| = 0.02.
    if (std::abs(value_of(f1)) < 0.02) return T(0.0);
    const T phase = hyp ? T(kTwoPi * log(abs(l1)) / lnl) : T(kTwoPi * l2 / (shift * l1));
    return exp(-1.0 / (f1 * f1)) * cos(phase);
  });
  model.integrals = {{"F1", F1, 2, Smoothness::analytic},
                     {"F2", F2, -1, Smoothness::smooth},
                     {"energy", model.hamiltonian, 2, Smoothness::analytic}};
  model.commuting_sets = {{0, 1, 2}};
  model.sampler = [](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ud(0.0, kTwoPi);
    std::normal_distribution<double> nd(0.0, 1.0);
    CotangentState s{Eigen::VectorXd(3), Eigen::VectorXd(3)};
    for (int i = 0; i < 3; ++i) s.x[i] = ud(rng);
    for (int i = 0; i < 3; ++i) s.p[i] = nd(rng);
    return s;
  };
  model.params = {{"B", {{sol.B(0, 0), sol.B(0, 1)}, {sol.B(1, 0), sol.B(1, 1)}}}};
  return model;
}

}  // namespace geolab
