#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "geolab/catalog/catalog.hpp"
#include "json.hpp"

namespace geolab {

/// ln of the spectral radius of an integer unimodular 2x2 matrix, 0 if it is <= 1.
double toral_entropy_exact(const Eigen::Matrix2d& B);

/// Self-map of the unit torus R^2 / Z^2.
struct TorusMap {
  std::string name;
  std::function<Eigen::Vector2d(const Eigen::Vector2d&)> f;
};

TorusMap linear_torus_map(const Eigen::Matrix2d& B);
TorusMap rotation_map(const Eigen::Vector2d& shift);
/// (x, y) -> (2x, y).
TorusMap doubling_map();

struct EntropyConfig {
  std::vector<double> epsilons{0.2, 0.15, 0.1};  // sorted decreasing on use
  std::vector<int> horizons{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};  // sorted increasing on use
  int grid = 512;
  std::uint64_t seed = 1;
  /// Once N exceeds this fraction of the grid the count stops resolving the
  /// map; larger horizons for that eps are skipped.
  double saturation = 0.05;
};

struct EntropyEstimate {
  std::string map_name;
  std::vector<double> epsilons;
  std::vector<int> horizons;
  std::vector<std::vector<long>> counts;  // [eps][T], -1 past saturation
  std::vector<std::vector<bool>> saturated;
  std::vector<double> slopes;  // per eps, least squares slope of ln(increment of N) against T
  std::vector<std::size_t> fitted_points;
  double value = 0.0;          // slope at the smallest eps
  bool monotone_in_t = true;
  bool monotone_in_eps = true;
  bool slopes_nondecreasing = true;  // as eps decreases
  int grid = 0;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
  /// Columns eps, T, N, lnN_over_T.
  void write_csv(std::ostream& out) const;
};

/// Greedy (eps, T)-spanning sets of a jittered grid under the dynamical metric
/// max_{0<=t<=T} dist(F^t x, F^t y).
EntropyEstimate spanning_entropy_estimate(const TorusMap& map, EntropyConfig cfg);

/// Time-2 pi map of the vertical geodesics on a SOL/NIL torus bundle.
struct ReturnMap {
  Eigen::Matrix2d fiber;      // action on the fiber after gluing
  Eigen::Matrix2d transport;  // d v / d p_v block of the linearized flow
  Eigen::Matrix2d transport_exact;
  double dt = 0.0;
  std::size_t steps = 0;
  double closure_error = 0.0;  // |z(2 pi) - 2 pi| + |v(2 pi) - v(0)|

  double transport_error() const { return (transport - transport_exact).cwiseAbs().maxCoeff(); }
  nlohmann::json to_json() const;
};

ReturnMap sol_return_map(const SolModel& sol, double dt = 1e-4);
/// Model must come from sol_manifold (reads B from its parameters).
ReturnMap sol_return_map(const GeodesicModel& model, double dt = 1e-4);

}  // namespace geolab
