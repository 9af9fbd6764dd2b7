#include "geolab/entropy/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <unordered_map>

#include "geolab/core/errors.hpp"
#include "geolab/integrator/integrator.hpp"

namespace geolab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::Vector2d wrap(Eigen::Vector2d x) {
  x[0] -= std::floor(x[0]);
  x[1] -= std::floor(x[1]);
  return x;
}

double torus_dist(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  double dx = std::abs(a[0] - b[0]), dy = std::abs(a[1] - b[1]);
  dx = std::min(dx, 1.0 - dx);
  dy = std::min(dy, 1.0 - dy);
  return std::hypot(dx, dy);
}

void check_unimodular(const Eigen::Matrix2d& B) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (!std::isfinite(B(i, j)) || std::abs(B(i, j) - std::round(B(i, j))) > 1e-12)
        throw ParameterError("toral map: B must have integer entries");
  if (std::abs(std::abs(B.determinant()) - 1.0) > 1e-12) throw ParameterError("toral map: det B must be +-1");
}

double lsq_slope(const std::vector<double>& t, const std::vector<double>& y) {
  const double n = static_cast<double>(t.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    sy += y[i];
    stt += t[i] * t[i];
    sty += t[i] * y[i];
  }
  const double den = n * stt - st * st;
  return den > 0.0 ? (n * sty - st * sy) / den : 0.0;
}

// Cell index of a point for cell size h, packed with the orbit endpoint.
struct CellKey {
  std::int32_t a, b, c, d;
  bool operator==(const CellKey&) const = default;
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::int32_t v : {k.a, k.b, k.c, k.d}) {
      h ^= static_cast<std::uint32_t>(v);
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace

double toral_entropy_exact(const Eigen::Matrix2d& B) {
  check_unimodular(B);
  // Integer trace and determinant fix the characteristic polynomial exactly;
  // an eigensolver loses sqrt(eps) on the defective conjugates of [[1,1],[0,1]].
  const double tr = std::round(B.trace()), det = std::round(B.determinant());
  const double disc = tr * tr - 4.0 * det;
  if (disc <= 0.0) return 0.0;  // complex pair on the unit circle, or a double root +-1
  const double rho = (std::abs(tr) + std::sqrt(disc)) / 2.0;
  return rho > 1.0 ? std::log(rho) : 0.0;
}

TorusMap linear_torus_map(const Eigen::Matrix2d& B) {
  check_unimodular(B);
  return {"linear", [B](const Eigen::Vector2d& x) { return wrap(B * x); }};
}

TorusMap rotation_map(const Eigen::Vector2d& shift) {
  return {"rotation", [shift](const Eigen::Vector2d& x) { return wrap(x + shift); }};
}

TorusMap doubling_map() {
  return {"doubling", [](const Eigen::Vector2d& x) { return wrap(Eigen::Vector2d(2.0 * x[0], x[1])); }};
}

nlohmann::json EntropyEstimate::to_json() const {
  return {{"map", map_name},       {"epsilons", epsilons},           {"horizons", horizons},
          {"counts", counts},      {"saturated", saturated},         {"slopes", slopes},
          {"value", value},        {"monotone_in_T", monotone_in_t}, {"monotone_in_eps", monotone_in_eps},
          {"slopes_nondecreasing", slopes_nondecreasing}, {"fitted_points", fitted_points},
          {"grid", grid},          {"seed", seed}};
}

void EntropyEstimate::write_csv(std::ostream& out) const {
  out << "eps,T,N,lnN_over_T\n";
  out.precision(17);
  for (std::size_t e = 0; e < epsilons.size(); ++e)
    for (std::size_t t = 0; t < horizons.size(); ++t) {
      if (counts[e][t] < 0) continue;
      out << epsilons[e] << ',' << horizons[t] << ',' << counts[e][t] << ',';
      if (horizons[t] > 0) out << std::log(static_cast<double>(counts[e][t])) / horizons[t];
      out << '\n';
    }
}

EntropyEstimate spanning_entropy_estimate(const TorusMap& map, EntropyConfig cfg) {
  if (cfg.grid < 2) throw ParameterError("entropy: grid must be >= 2");
  if (cfg.epsilons.empty() || cfg.horizons.empty()) throw ParameterError("entropy: empty eps or T list");
  std::sort(cfg.epsilons.begin(), cfg.epsilons.end(), std::greater<>());
  std::sort(cfg.horizons.begin(), cfg.horizons.end());
  const double spacing = 1.0 / cfg.grid;
  for (double e : cfg.epsilons)
    if (!(e > 0.0) || spacing > e / 4.0)
      throw ParameterError("entropy: grid spacing " + std::to_string(spacing) + " is too coarse for eps = " +
                           std::to_string(e) + " (need spacing <= eps/4)");
  if (cfg.horizons.front() < 0) throw ParameterError("entropy: horizons must be >= 0");

  const int tmax = cfg.horizons.back();
  const std::size_t npts = static_cast<std::size_t>(cfg.grid) * cfg.grid;
  std::vector<Eigen::Vector2d> orbit(npts * (tmax + 1));
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  for (int i = 0; i < cfg.grid; ++i)
    for (int j = 0; j < cfg.grid; ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * cfg.grid + j;
      Eigen::Vector2d x((i + ud(rng)) * spacing, (j + ud(rng)) * spacing);
      orbit[k * (tmax + 1)] = x;
      for (int t = 1; t <= tmax; ++t) orbit[k * (tmax + 1) + t] = x = map.f(x);
    }

  // Greedy order is randomized; a scan order lines centres up along the grid axes.
  std::vector<std::size_t> order(npts);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  EntropyEstimate est;
  est.map_name = map.name;
  est.epsilons = cfg.epsilons;
  est.horizons = cfg.horizons;
  est.grid = cfg.grid;
  est.seed = cfg.seed;
  for (double eps : cfg.epsilons) {
    std::vector<long> row;
    std::vector<bool> sat;
    const int cells = std::max(1, static_cast<int>(std::floor(1.0 / eps)));  // cell side >= eps
    auto cell = [cells](double v) { return std::min(static_cast<int>(v * cells), cells - 1); };
    bool saturated = false;
    for (int T : cfg.horizons) {
      if (saturated) {
        // Counts past saturation measure the grid rather than the map.
        row.push_back(-1);
        sat.push_back(true);
        continue;
      }
      // Candidate centres share a cell (up to one step, with wrap) at t = 0 and at t = T.
      // Buckets hold the centre orbits inline so a scan stays in cache.
      const std::size_t stride = 2 * static_cast<std::size_t>(T + 1);
      std::unordered_map<CellKey, std::vector<double>, CellHash> table;
      long n = 0;
      const long cap = static_cast<long>(cfg.saturation * static_cast<double>(npts));
      for (std::size_t k : order) {
        if (n > cap) break;  // saturated; the partial count is discarded
        const Eigen::Vector2d* ox = &orbit[k * (tmax + 1)];
        const int c0 = cell(ox[0][0]), c1 = cell(ox[0][1]), c2 = cell(ox[T][0]), c3 = cell(ox[T][1]);
        bool covered = false;
        for (int da = -1; da <= 1 && !covered; ++da)
          for (int db = -1; db <= 1 && !covered; ++db)
            for (int dc = -1; dc <= 1 && !covered; ++dc)
              for (int dd = -1; dd <= 1 && !covered; ++dd) {
                const CellKey key{(c0 + da + cells) % cells, (c1 + db + cells) % cells, (c2 + dc + cells) % cells,
                                  (c3 + dd + cells) % cells};
                const auto it = table.find(key);
                if (it == table.end()) continue;
                const std::vector<double>& bucket = it->second;
                for (std::size_t off = 0; off < bucket.size() && !covered; off += stride) {
                  bool close = true;
                  for (int t = T; t >= 0 && close; --t)
                    close = torus_dist(ox[t], Eigen::Vector2d(bucket[off + 2 * t], bucket[off + 2 * t + 1])) < eps;
                  covered = close;
                }
              }
        if (!covered) {
          auto& bucket = table[{c0, c1, c2, c3}];
          for (int t = 0; t <= T; ++t) {
            bucket.push_back(ox[t][0]);
            bucket.push_back(ox[t][1]);
          }
          ++n;
        }
      }
      saturated = n > cap;
      row.push_back(saturated ? -1 : n);
      sat.push_back(saturated);
    }
    est.counts.push_back(row);
    est.saturated.push_back(sat);
    // ln of the increments N(T_{i+1}) - N(T_i) grows like h T while a polynomial
    // factor in N drops out (linear growth gives constant increments). Only the
    // upper half of the unsaturated increments is fitted, past the transient.
    std::vector<double> ts, ys;
    std::size_t m = 0;
    while (m < row.size() && !sat[m]) ++m;
    const std::size_t first = (m > 0 ? m - 1 : 0) / 2;
    bool any_growth = false;
    for (std::size_t i = first; i + 1 < m; ++i) {
      const double dn = static_cast<double>(row[i + 1] - row[i]) / (cfg.horizons[i + 1] - cfg.horizons[i]);
      if (dn <= 0.0) continue;
      any_growth = true;
      ts.push_back(cfg.horizons[i + 1]);
      ys.push_back(std::log(dn));
    }
    est.slopes.push_back(ts.size() >= 2 ? lsq_slope(ts, ys) : 0.0);
    est.fitted_points.push_back(any_growth ? ts.size() : 0);
  }
  for (std::size_t e = 0; e < est.counts.size(); ++e)
    for (std::size_t t = 0; t < est.horizons.size(); ++t) {
      if (t > 0 && est.counts[e][t] >= 0 && est.counts[e][t] < est.counts[e][t - 1]) est.monotone_in_t = false;
      if (e > 0 && est.counts[e][t] >= 0 && est.counts[e - 1][t] >= 0 && est.counts[e][t] < est.counts[e - 1][t])
        est.monotone_in_eps = false;
    }
  for (std::size_t e = 1; e < est.slopes.size(); ++e)
    if (est.slopes[e] < est.slopes[e - 1]) est.slopes_nondecreasing = false;
  est.value = est.slopes.back();
  return est;
}

nlohmann::json ReturnMap::to_json() const {
  auto m = [](const Eigen::Matrix2d& a) {
    return nlohmann::json{{a(0, 0), a(0, 1)}, {a(1, 0), a(1, 1)}};
  };
  return {{"fiber", m(fiber)},
          {"transport", m(transport)},
          {"transport_exact", m(transport_exact)},
          {"transport_error", transport_error()},
          {"dt", dt},
          {"steps", steps},
          {"closure_error", closure_error}};
}

ReturnMap sol_return_map(const SolModel& sol, double dt) {
  if (!(dt > 0.0)) throw ParameterError("sol_return_map: dt must be positive");
  const GeodesicModel model = sol_manifold(sol);
  const std::size_t steps = static_cast<std::size_t>(std::ceil(kTwoPi / dt));
  StepConfig cfg;
  cfg.dt = kTwoPi / static_cast<double>(steps);

  // Unit-speed vertical geodesic x, y = 0, z = t.
  CotangentState s{Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3)};
  s.p[2] = 1.0;
  const CotangentState s0 = s;
  Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(6, 6), jac;
  for (std::size_t i = 0; i < steps; ++i) {
    s = implicit_midpoint_step(model, s, cfg, &jac);
    phi = jac * phi;
  }
  ReturnMap r;
  r.dt = cfg.dt;
  r.steps = steps;
  r.closure_error = std::abs(s.x[2] - kTwoPi) + (s.x.head<2>() - s0.x.head<2>()).norm();
  // (v, 2 pi) is glued to (B v, 0).
  r.fiber = sol.B * phi.block<2, 2>(0, 0);
  r.transport = phi.block<2, 2>(0, 3);
  r.transport_exact = sol.transport_integral();
  return r;
}

ReturnMap sol_return_map(const GeodesicModel& model, double dt) {
  if ((model.key != "sol" && model.key != "nil") || !model.params.contains("B"))
    throw ParameterError("sol_return_map: model was not built by sol_manifold");
  const auto& b = model.params.at("B");
  Eigen::Matrix2d B;
  B << b[0][0].get<double>(), b[0][1].get<double>(), b[1][0].get<double>(), b[1][1].get<double>();
  return sol_return_map(make_sol_model(B), dt);
}

}  // namespace geolab
