#pragma once

#include <Eigen/Dense>
#include <ostream>
#include <string>
#include <vector>

#include "geolab/core/model.hpp"
#include "json.hpp"

namespace geolab {

struct StepConfig {
  double dt = 1e-3;
  double newton_tol = 1e-12;
  int newton_max_iter = 50;

  /// Throws std::invalid_argument unless dt > 0 and newton_tol > 0.
  void validate() const;
};

/// One step of the implicit midpoint rule z1 = z0 + dt J grad H((z0+z1)/2),
/// solved by Newton with the exact Hessian. Chart models only.
CotangentState implicit_midpoint_step(const GeodesicModel& model, const CotangentState& s, const StepConfig& cfg);

/// Same step, also returning d z1 / d z0 in *jacobian.
CotangentState implicit_midpoint_step(const GeodesicModel& model, const CotangentState& s, const StepConfig& cfg,
                                      Eigen::MatrixXd* jacobian);

/// Constrained symmetric step for embedded models: generalized Stoermer-Verlet
/// with a position multiplier (implicit) and a momentum multiplier enforcing
/// <grad c(q1), p1> = 0 (explicit).
CotangentState rattle_step(const GeodesicModel& model, const CotangentState& s, const StepConfig& cfg);

/// Dispatches on model.kind.
CotangentState advance(const GeodesicModel& model, const CotangentState& s, const StepConfig& cfg);

struct TrajectoryRecord {
  std::string model_key;
  std::vector<std::string> integral_names;
  std::vector<bool> periodic;
  bool embedded = false;

  std::vector<double> times;
  std::vector<CotangentState> states;
  std::vector<double> energy;
  std::vector<std::vector<double>> integral_values;  // [integral][sample]
  std::vector<double> constraint_residual;           // embedded only
  std::vector<double> tangency_residual;             // embedded only

  double energy_drift = 0.0;
  std::vector<double> integral_drift;
  double max_constraint_residual = 0.0;
  double max_tangency_residual = 0.0;

  std::size_t size() const { return times.size(); }
  /// One row per sample: t, x..., p..., H, integrals..., residuals.
  void write_csv(std::ostream& out) const;
  /// Drift statistics only.
  nlohmann::json summary() const;
};

/// max_t |f(t) - f(0)| / max(1, |f(0)|).
double relative_drift(const std::vector<double>& values);

/// Integrates from s0 to t_end with fixed steps of cfg.dt (the last step is
/// shortened to land on t_end) and records every sample_every-th state plus
/// the final one.
TrajectoryRecord integrate(const GeodesicModel& model, const CotangentState& s0, const StepConfig& cfg,
                           double t_end, std::size_t sample_every = 1);

}  // namespace geolab
