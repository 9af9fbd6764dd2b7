#include "geolab/integrator/integrator.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "geolab/core/errors.hpp"

namespace geolab {

namespace {

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// J applied to a gradient (gx, gp) -> (gp, -gx).
Eigen::VectorXd apply_j(const Eigen::VectorXd& g) {
  const Eigen::Index d = g.size() / 2;
  Eigen::VectorXd r(g.size());
  r << g.tail(d), -g.head(d);
  return r;
}

Eigen::MatrixXd apply_j(const Eigen::MatrixXd& h) {
  const Eigen::Index d = h.rows() / 2;
  Eigen::MatrixXd r(h.rows(), h.cols());
  r.topRows(d) = h.bottomRows(d);
  r.bottomRows(d) = -h.topRows(d);
  return r;
}

std::string format_history(const std::vector<double>& h) {
  std::ostringstream os;
  os << "residual history [";
  for (std::size_t i = 0; i < h.size(); ++i) os << (i ? ", " : "") << std::scientific << std::setprecision(3) << h[i];
  os << "]";
  return os.str();
}

}  // namespace

void StepConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("StepConfig: dt must be > 0");
  if (!(newton_tol > 0.0)) throw std::invalid_argument("StepConfig: newton_tol must be > 0");
  if (newton_max_iter < 1) throw std::invalid_argument("StepConfig: newton_max_iter must be >= 1");
}

CotangentState implicit_midpoint_step(const GeodesicModel& model, const CotangentState& s, const StepConfig& cfg) {
  return implicit_midpoint_step(model, s, cfg, nullptr);
}

CotangentState implicit_midpoint_step(const GeodesicModel& model, const CotangentState& s, const StepConfig& cfg,
                                      Eigen::MatrixXd* jacobian) {
  if (model.kind != ModelKind::chart) throw std::invalid_argument("implicit_midpoint_step: chart model required");
  const double h = cfg.dt;
  const Eigen::VectorXd z0 = s.phase();
  const Eigen::Index n = z0.size();
  if (h == 0.0) {
    if (jacobian) *jacobian = Eigen::MatrixXd::Identity(n, n);
    return s;
  }
  model.check_domain(s.x);
  const SmoothFunction& H = model.hamiltonian;

  Eigen::VectorXd z = z0 + h * apply_j(H.gradient(z0));
  Eigen::VectorXd g;
  Eigen::MatrixXd hess;
  std::vector<double> history;
  bool converged = false;
  for (int it = 0; it < cfg.newton_max_iter; ++it) {
    const Eigen::VectorXd m = 0.5 * (z0 + z);
    try {
      model.check_domain(m.head(n / 2));
    } catch (const DomainError& e) {
      throw DomainError(std::string("domain exit mid-step: ") + e.what());
    }
    H.gradient_hessian(m, g, hess);
    const Eigen::VectorXd F = z - z0 - h * apply_j(g);
    history.push_back(inf_norm(F));
    const Eigen::MatrixXd jac = Eigen::MatrixXd::Identity(n, n) - 0.5 * h * apply_j(hess);
    const Eigen::VectorXd delta = jac.partialPivLu().solve(-F);
    z += delta;
    if (!z.allFinite()) break;
    if (inf_norm(delta) <= cfg.newton_tol * std::max(1.0, inf_norm(z))) {
      converged = true;
      break;
    }
  }
  if (converged) {
    const Eigen::VectorXd m = 0.5 * (z0 + z);
    model.check_domain(m.head(n / 2));
    const Eigen::VectorXd F = z - z0 - h * apply_j(H.gradient(m));
    history.push_back(inf_norm(F));
    converged = history.back() <= cfg.newton_tol * std::max(1.0, inf_norm(z));
  }
  if (!converged) throw StepFailedError("implicit midpoint Newton did not converge, " + format_history(history), history);

  CotangentState out = CotangentState::from_phase(z);
  model.check_domain(out.x);
  if (jacobian) {
    H.gradient_hessian(0.5 * (z0 + z), g, hess);
    const Eigen::MatrixXd a = 0.5 * h * apply_j(hess);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    *jacobian = (id - a).partialPivLu().solve(id + a);
  }
  return out;
}

CotangentState rattle_step(const GeodesicModel& model, const CotangentState& s, const StepConfig& cfg) {
  if (model.kind != ModelKind::embedded) throw std::invalid_argument("rattle_step: embedded model required");
  const double h = cfg.dt;
  if (h == 0.0) return s;
  const Eigen::Index N = static_cast<Eigen::Index>(model.dim);
  const SmoothFunction& H = model.hamiltonian;
  const SmoothFunction& c = model.embedded->constraint;
  const Eigen::VectorXd& q0 = s.x;
  const Eigen::VectorXd& p0 = s.p;
  const Eigen::VectorXd n0 = surface_normal(model, q0);

  // Unknowns u = (P, Q, lambda).
  Eigen::VectorXd y(2 * N);
  y << q0, p0;
  const Eigen::VectorXd g0 = H.gradient(y);
  Eigen::VectorXd P = p0 - 0.5 * h * g0.head(N);
  Eigen::VectorXd Q = q0 + h * g0.tail(N);
  double lambda = 0.0;

  Eigen::VectorXd ga, gb;
  Eigen::MatrixXd ha, hb;
  Eigen::VectorXd R(2 * N + 1);
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2 * N + 1, 2 * N + 1);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(N, N);
  std::vector<double> history;
  bool converged = false;
  for (int it = 0; it < cfg.newton_max_iter; ++it) {
    y << q0, P;
    H.gradient_hessian(y, ga, ha);
    y << Q, P;
    H.gradient_hessian(y, gb, hb);
    const Eigen::VectorXd nq = surface_normal(model, Q);
    R.segment(0, N) = P - p0 + 0.5 * h * (ga.head(N) + lambda * n0);
    R.segment(N, N) = Q - q0 - 0.5 * h * (ga.tail(N) + gb.tail(N));
    R[2 * N] = c.value(Q);
    history.push_back(inf_norm(R));
    // At small h the multiplier is ill-conditioned (impulse ~ residual / h), so
    // the step test below can stall at roundoff; accept a residual at that floor.
    if (history.back() <= 16.0 * std::numeric_limits<double>::epsilon() *
                              std::max({1.0, inf_norm(P), inf_norm(Q)})) {
      converged = true;
      break;
    }

    jac.setZero();
    jac.block(0, 0, N, N) = id + 0.5 * h * ha.block(0, N, N, N);
    jac.block(0, 2 * N, N, 1) = 0.5 * h * n0;
    jac.block(N, 0, N, N) = -0.5 * h * (ha.block(N, N, N, N) + hb.block(N, N, N, N));
    jac.block(N, N, N, N) = id - 0.5 * h * hb.block(N, 0, N, N);
    jac.block(2 * N, N, 1, N) = nq.transpose();
    const Eigen::VectorXd delta = jac.partialPivLu().solve(-R);
    P += delta.segment(0, N);
    Q += delta.segment(N, N);
    lambda += delta[2 * N];
    if (!P.allFinite() || !Q.allFinite() || !std::isfinite(lambda)) break;
    const double scale = std::max({1.0, inf_norm(P), inf_norm(Q)});
    // lambda enters only through the impulse (h/2) lambda n0; measure it there.
    const double step_size = std::max({inf_norm(delta.segment(0, N)), inf_norm(delta.segment(N, N)),
                                       0.5 * std::abs(h * delta[2 * N]) * inf_norm(n0)});
    if (step_size <= cfg.newton_tol * scale) {
      converged = true;
      break;
    }
  }
  if (converged) {
    const double cr = std::abs(c.value(Q));
    history.push_back(cr);
    converged = cr <= cfg.newton_tol;
  }
  if (!converged) throw ConstraintSolveError(format_history(history), history);

  y << Q, P;
  const Eigen::VectorXd gc = H.gradient(y);
  const Eigen::VectorXd n1 = surface_normal(model, Q);
  const Eigen::VectorXd w = P - 0.5 * h * gc.head(N);
  const double mu = n1.dot(w) / (0.5 * h * n1.squaredNorm());
  Eigen::VectorXd p1 = w - 0.5 * h * mu * n1;
  return {Q, p1};
}

CotangentState advance(const GeodesicModel& model, const CotangentState& s, const StepConfig& cfg) {
  return model.kind == ModelKind::embedded ? rattle_step(model, s, cfg) : implicit_midpoint_step(model, s, cfg);
}

double relative_drift(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  const double f0 = values.front();
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v - f0));
  return m / std::max(1.0, std::abs(f0));
}

namespace {

[[noreturn]] void rethrow_at_step(std::size_t k) {
  const std::string where = "at step " + std::to_string(k) + ": ";
  try {
    throw;
  } catch (const StepFailedError& e) {
    throw StepFailedError(where + e.what(), e.residual_history);
  } catch (const ConstraintSolveError& e) {
    throw ConstraintSolveError(where + e.what(), e.residual_history);
  } catch (const DomainError& e) {
    throw DomainError(where + e.what());
  } catch (const DegenerateMetricError& e) {
    throw Error(where + e.what());
  }
}

void record_sample(const GeodesicModel& model, TrajectoryRecord& rec, double t, const CotangentState& s) {
  rec.times.push_back(t);
  rec.states.push_back(s);
  const Eigen::VectorXd y = s.phase();
  rec.energy.push_back(model.hamiltonian.value(y));
  for (std::size_t i = 0; i < model.integrals.size(); ++i)
    rec.integral_values[i].push_back(model.integrals[i].fn.value(y));
  if (rec.embedded) {
    rec.constraint_residual.push_back(model.constraint_residual(s));
    rec.tangency_residual.push_back(model.tangency_residual(s));
  }
}

}  // namespace

TrajectoryRecord integrate(const GeodesicModel& model, const CotangentState& s0, const StepConfig& cfg,
                           double t_end, std::size_t sample_every) {
  cfg.validate();
  if (!(t_end >= 0.0)) throw std::invalid_argument("integrate: t_end must be >= 0");
  if (sample_every < 1) throw std::invalid_argument("integrate: sample_every must be >= 1");
  TrajectoryRecord rec;
  rec.model_key = model.key;
  rec.embedded = model.kind == ModelKind::embedded;
  rec.periodic = model.periodic;
  for (const auto& f : model.integrals) rec.integral_names.push_back(f.name);
  rec.integral_values.resize(model.integrals.size());

  model.check_domain(s0.x);
  record_sample(model, rec, 0.0, s0);
  const double steps_f = t_end / cfg.dt;
  const std::size_t nsteps = t_end == 0.0 ? 0 : static_cast<std::size_t>(std::ceil(steps_f - 1e-9));
  CotangentState s = s0;
  StepConfig c = cfg;
  for (std::size_t k = 1; k <= nsteps; ++k) {
    c.dt = (k == nsteps) ? t_end - static_cast<double>(nsteps - 1) * cfg.dt : cfg.dt;
    try {
      s = advance(model, s, c);
    } catch (const Error&) {
      rethrow_at_step(k);
    }
    if (k % sample_every == 0 || k == nsteps) {
      const double t = (k == nsteps) ? t_end : static_cast<double>(k) * cfg.dt;
      record_sample(model, rec, t, s);
    }
  }

  rec.energy_drift = relative_drift(rec.energy);
  for (const auto& v : rec.integral_values) rec.integral_drift.push_back(relative_drift(v));
  for (double r : rec.constraint_residual) rec.max_constraint_residual = std::max(rec.max_constraint_residual, r);
  for (double r : rec.tangency_residual) rec.max_tangency_residual = std::max(rec.max_tangency_residual, r);
  return rec;
}

void TrajectoryRecord::write_csv(std::ostream& out) const {
  const std::size_t d = states.empty() ? 0 : states.front().dim();
  out << "t";
  for (std::size_t i = 0; i < d; ++i) out << ",x" << i;
  for (std::size_t i = 0; i < d; ++i) out << ",p" << i;
  out << ",H";
  for (const auto& n : integral_names) out << "," << n;
  if (embedded) out << ",constraint_residual,tangency_residual";
  out << "\n";
  out << std::setprecision(17);
  for (std::size_t k = 0; k < times.size(); ++k) {
    out << times[k];
    for (std::size_t i = 0; i < d; ++i) {
      double x = states[k].x[i];
      // Periodic coordinates are wrapped here and nowhere else.
      if (i < periodic.size() && periodic[i]) {
        x = std::fmod(x, 2.0 * std::numbers::pi);
        if (x < 0.0) x += 2.0 * std::numbers::pi;
      }
      out << "," << x;
    }
    for (std::size_t i = 0; i < d; ++i) out << "," << states[k].p[i];
    out << "," << energy[k];
    for (const auto& v : integral_values) out << "," << v[k];
    if (embedded) out << "," << constraint_residual[k] << "," << tangency_residual[k];
    out << "\n";
  }
}

nlohmann::json TrajectoryRecord::summary() const {
  nlohmann::json j;
  j["model"] = model_key;
  j["samples"] = times.size();
  j["t_end"] = times.empty() ? 0.0 : times.back();
  j["energy_drift"] = energy_drift;
  nlohmann::json drift = nlohmann::json::object();
  for (std::size_t i = 0; i < integral_names.size(); ++i) drift[integral_names[i]] = integral_drift[i];
  j["integral_drift"] = drift;
  if (embedded) {
    j["max_constraint_residual"] = max_constraint_residual;
    j["max_tangency_residual"] = max_tangency_residual;
  }
  return j;
}

}  // namespace geolab
