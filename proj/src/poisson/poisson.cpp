#include "geolab/poisson/poisson.hpp"

#include <algorithm>
#include <cmath>

#include "geolab/core/linalg.hpp"

namespace geolab {

namespace {

// a_x . b_p - b_x . a_p; swapping a and b negates the result exactly.
double canon(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::Index n = a.size() / 2;
  const double s1 = a.head(n).dot(b.tail(n));
  const double s2 = b.head(n).dot(a.tail(n));
  return s1 - s2;
}

double antisym(const Eigen::MatrixXd& pi, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return 0.5 * (a.dot(pi * b) - b.dot(pi * a));
}

}  // namespace

Eigen::MatrixXd PhaseSpace::basis(const Eigen::VectorXd& y) const {
  if (tangent_basis) return tangent_basis(y);
  return Eigen::MatrixXd::Identity(coord_dim, coord_dim);
}

Eigen::MatrixXd PhaseSpace::poisson_matrix(const Eigen::VectorXd& y) const {
  const Eigen::MatrixXd E = basis(y);
  Eigen::MatrixXd M(E.cols(), E.cols());
  for (Eigen::Index i = 0; i < E.cols(); ++i)
    for (Eigen::Index j = 0; j < E.cols(); ++j) M(i, j) = bracket(y, E.col(i), E.col(j));
  return M;
}

PhaseSpace canonical_space(std::size_t n) {
  PhaseSpace s;
  s.name = "canonical R^" + std::to_string(2 * n);
  s.coord_dim = 2 * n;
  s.manifold_dim = 2 * n;
  s.bracket = [](const Eigen::VectorXd&, const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return canon(a, b); };
  s.sampler = [n](std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::VectorXd y(2 * n);
    for (auto& v : y) v = nd(rng);
    return y;
  };
  return s;
}

PhaseSpace model_phase_space(const GeodesicModel& model) {
  if (model.kind == ModelKind::chart) {
    PhaseSpace s = canonical_space(model.dim);
    s.name = model.key;
    s.sampler = [model](std::mt19937_64& rng) { return model.sample(rng).phase(); };
    return s;
  }
  const std::size_t N = model.dim;
  const EmbeddedMetric& em = *model.embedded;
  const SmoothFunction c = em.constraint;
  // Second constraint <grad c(q), p>.
  const SmoothFunction phi2 = SmoothFunction::exact(2 * N, [normal = em.normal, N](auto y) {
    using T = typename decltype(y)::value_type;
    const std::vector<T> n = normal.template get<T>()(y.first(N));
    T s(0.0);
    for (std::size_t i = 0; i < N; ++i) s += n[i] * y[N + i];
    return s;
  });
  auto constraint_gradients = [c, phi2, N](const Eigen::VectorXd& y) {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2 * N, 2);
    D.col(0).head(N) = c.gradient(y.head(N));
    D.col(1) = phi2.gradient(y);
    return D;
  };

  PhaseSpace s;
  s.name = model.key;
  s.coord_dim = 2 * N;
  s.manifold_dim = 2 * N - 2;
  s.bracket = [constraint_gradients](const Eigen::VectorXd& y, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const Eigen::MatrixXd D = constraint_gradients(y);
    const double C = canon(D.col(0), D.col(1));
    const double ua = canon(a, D.col(0)), wa = canon(a, D.col(1));
    const double ub = canon(b, D.col(0)), wb = canon(b, D.col(1));
    return canon(a, b) - (ua * wb - wa * ub) / C;
  };
  s.tangent_basis = [constraint_gradients](const Eigen::VectorXd& y) {
    return orthonormal_complement(constraint_gradients(y));
  };
  s.sampler = [model](std::mt19937_64& rng) { return model.sample(rng).phase(); };
  return s;
}

PhaseSpace poisson_space(std::string name, std::size_t dim, std::size_t corank,
                         std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> pi,
                         std::function<Eigen::VectorXd(std::mt19937_64&)> sampler) {
  PhaseSpace s;
  s.name = std::move(name);
  s.coord_dim = dim;
  s.manifold_dim = dim;
  s.corank = corank;
  s.bracket = [pi](const Eigen::VectorXd& y, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return antisym(pi(y), a, b);
  };
  s.sampler = std::move(sampler);
  return s;
}

FunctionFamily model_family(const GeodesicModel& model, const std::vector<std::string>& names) {
  FunctionFamily fam;
  fam.name = model.key;
  fam.space = model_phase_space(model);
  if (names.empty()) {
    fam.members = model.integrals;
  } else {
    for (const auto& n : names) fam.members.push_back(model.integral(n));
    fam.name += "{";
    for (std::size_t i = 0; i < names.size(); ++i) fam.name += (i ? "," : "") + names[i];
    fam.name += "}";
  }
  return fam;
}

double canonical_bracket(const SmoothFunction& f, const SmoothFunction& g, const CotangentState& s) {
  const Eigen::VectorXd y = s.phase();
  return canon(f.gradient(y), g.gradient(y));
}

double bracket(const PhaseSpace& space, const SmoothFunction& f, const SmoothFunction& g, const Eigen::VectorXd& y) {
  return space.bracket(y, f.gradient(y), g.gradient(y));
}

std::vector<Eigen::VectorXd> sample_states(const PhaseSpace& space, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(space.sampler(rng));
  return out;
}

namespace {

std::vector<Eigen::VectorXd> gradients(const FunctionFamily& family, const Eigen::VectorXd& y) {
  std::vector<Eigen::VectorXd> g;
  g.reserve(family.members.size());
  for (const auto& f : family.members) g.push_back(f.fn.gradient(y));
  return g;
}

}  // namespace

Eigen::MatrixXd commutation_residual(const FunctionFamily& family, const std::vector<Eigen::VectorXd>& states) {
  const std::size_t k = family.members.size();
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(k, k);
  for (const auto& y : states) {
    const auto g = gradients(family, y);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) {
        const double b = std::abs(family.space.bracket(y, g[i], g[j]));
        R(i, j) = R(j, i) = std::max(R(i, j), b);
      }
  }
  return R;
}

namespace {

// Rows: gradients restricted to the manifold.
Eigen::MatrixXd restricted_gradients(const FunctionFamily& family, const Eigen::VectorXd& y,
                                     const std::vector<Eigen::VectorXd>& g) {
  const Eigen::MatrixXd E = family.space.basis(y);
  Eigen::MatrixXd G(g.size(), E.cols());
  for (std::size_t i = 0; i < g.size(); ++i) G.row(i) = (E.transpose() * g[i]).transpose();
  return G;
}

}  // namespace

int independence_rank(const FunctionFamily& family, const std::vector<Eigen::VectorXd>& states, double rel_tol) {
  int best = 0;
  for (const auto& y : states)
    best = std::max(best, numerical_rank(restricted_gradients(family, y, gradients(family, y)), rel_tol));
  return best;
}

std::vector<double> conservation_drift(const GeodesicModel& model, const TrajectoryRecord& record) {
  if (record.states.empty()) throw std::invalid_argument("conservation_drift: empty record");
  std::vector<double> out;
  for (const auto& f : model.integrals) {
    std::vector<double> v;
    v.reserve(record.states.size());
    for (const auto& s : record.states) v.push_back(f.value(s));
    out.push_back(relative_drift(v));
  }
  return out;
}

CompletenessReport ddim_dind(const FunctionFamily& family, const std::vector<Eigen::VectorXd>& states,
                             double rel_tol, std::uint64_t seed) {
  CompletenessReport r;
  r.family = family.name;
  r.sample_points = states.size();
  r.residual_matrix = commutation_residual(family, states);
  r.phase_dim = family.space.manifold_dim;
  r.corank = family.space.corank;
  r.rank_tolerance = rel_tol;
  r.seed = seed;
  int gram_rank = 0;
  for (const auto& y : states) {
    auto g = gradients(family, y);
    const Eigen::MatrixXd G = restricted_gradients(family, y, g);
    r.ddim = std::max(r.ddim, numerical_rank(G, rel_tol));
    // Unit gradients keep the Gram entries on the scale of the bracket itself.
    // Members whose restricted gradient is negligible (e.g. vanishing
    // identically on the manifold) are dropped rather than normalized. The
    // reference includes the full gradients: if every restricted row is
    // roundoff, max_row alone would promote that roundoff to unit vectors.
    double max_row = G.rows() ? G.rowwise().norm().maxCoeff() : 0.0;
    for (const auto& gi : g) max_row = std::max(max_row, gi.norm());
    std::vector<Eigen::VectorXd> kept;
    for (Eigen::Index i = 0; i < G.rows(); ++i) {
      const double nrm = G.row(i).norm();
      if (nrm > rel_tol * max_row) kept.push_back(g[i] / nrm);
    }
    g = std::move(kept);
    const std::size_t k = g.size();
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) {
        gram(i, j) = family.space.bracket(y, g[i], g[j]);
        gram(j, i) = -gram(i, j);
      }
    const Eigen::MatrixXd pi = family.space.poisson_matrix(y);
    const double scale = pi.size() ? Eigen::JacobiSVD<Eigen::MatrixXd>(pi).singularValues()[0] : 0.0;
    if (k == 0 || scale == 0.0) continue;
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(gram).singularValues();
    int rk = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) rk += sv[i] > rel_tol * scale;
    gram_rank = std::max(gram_rank, rk);
  }
  r.dind = r.ddim - gram_rank;
  r.complete = static_cast<std::size_t>(r.ddim + r.dind) == r.phase_dim + r.corank;
  return r;
}

nlohmann::json CompletenessReport::to_json() const {
  nlohmann::json res = nlohmann::json::array();
  for (Eigen::Index i = 0; i < residual_matrix.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < residual_matrix.cols(); ++j) row.push_back(residual_matrix(i, j));
    res.push_back(row);
  }
  return {{"family", family},
          {"states", sample_points},
          {"residual_matrix", res},
          {"rank", ddim},
          {"ddim", ddim},
          {"dind", dind},
          {"phase_dim", phase_dim},
          {"corank", corank},
          {"complete", complete},
          {"tolerances", {{"rank_rel", rank_tolerance}}},
          {"seed", seed}};
}

}  // namespace geolab
