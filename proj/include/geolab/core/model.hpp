#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "geolab/core/smooth_function.hpp"
#include "json.hpp"

namespace geolab {

/// Phase-space point: configuration x (chart coordinates or ambient q) and
/// conjugate momenta p of the same length.
struct CotangentState {
  Eigen::VectorXd x;
  Eigen::VectorXd p;

  std::size_t dim() const { return static_cast<std::size_t>(x.size()); }
  /// (x, p) stacked.
  Eigen::VectorXd phase() const;
  static CotangentState from_phase(const Eigen::VectorXd& y);
};

/// Partial derivatives split into the configuration and momentum blocks.
struct GradientPair {
  Eigen::VectorXd dx;
  Eigen::VectorXd dp;
};

enum class Smoothness { analytic, smooth };

/// Scalar phase-space function with metadata. degree < 0 means the function
/// is not polynomial in the momenta.
struct FirstIntegral {
  std::string name;
  SmoothFunction fn;
  int degree = 2;
  Smoothness smoothness = Smoothness::analytic;

  double value(const CotangentState& s) const { return fn.value(s.phase()); }
  GradientPair gradient(const CotangentState& s) const;
};

template <class T> using MatrixSig = std::vector<T>(std::span<const T>);

/// Metric given by its coefficient matrix in one chart.
struct ChartMetric {
  std::size_t dim = 0;
  Multi<MatrixSig> g;  // row-major dim x dim
  std::vector<bool> periodic;
  std::function<void(const Eigen::VectorXd&)> domain_check;  // throws DomainError

  Eigen::MatrixXd eval(const Eigen::VectorXd& x) const;
};

/// Hypersurface {c = 0} of R^N with kinetic co-metric k(q) * K0 restricted
/// to the cotangent bundle of the hypersurface.
struct EmbeddedMetric {
  std::size_t ambient_dim = 0;
  SmoothFunction constraint;        // c(q)
  Multi<VectorSig> normal;          // grad c(q) in closed form
  SmoothFunction inverse_factor;    // k(q) > 0; invalid means k = 1
  Eigen::MatrixXd base_inverse_form;  // K0; empty means identity

  bool euclidean() const { return !inverse_factor.valid() && base_inverse_form.size() == 0; }
};

/// Centered quadric <D q, q> = 1 with D diagonal, as c(q) = (<Dq,q> - 1)/2.
EmbeddedMetric quadric_surface(const Eigen::VectorXd& d);

/// H = 1/2 p^T g(x)^{-1} p.
SmoothFunction chart_hamiltonian(const ChartMetric& metric);

/// Kinetic Hamiltonian of an embedded metric. Contains the term
/// <n,p>^2 / (2|n|^2) so that the hidden constraint of the flow is <n,p> = 0.
SmoothFunction embedded_hamiltonian(const EmbeddedMetric& metric);

/// Wraps h(q, p) as h(q, P p) + <n,p>^2/(2|n|^2) with P the tangential
/// projector, for Hamiltonians that are not invariant under p -> p + t n.
SmoothFunction gauge_fix_hamiltonian(const EmbeddedMetric& metric, const SmoothFunction& h);

enum class ModelKind { chart, embedded };

struct GeodesicModel {
  std::string key;
  std::string description;
  std::string anchor;
  ModelKind kind = ModelKind::chart;
  std::size_t dim = 0;  // chart dimension, or ambient dimension N
  SmoothFunction hamiltonian;
  std::optional<ChartMetric> chart;
  std::optional<EmbeddedMetric> embedded;
  std::vector<FirstIntegral> integrals;
  std::vector<std::vector<std::size_t>> commuting_sets;
  /// H is a quadratic form in p (false for mechanical systems such as Neumann).
  bool kinetic = true;
  std::vector<bool> periodic;
  std::function<void(const Eigen::VectorXd&)> domain_check;
  std::function<CotangentState(std::mt19937_64&)> sampler;
  nlohmann::json params = nlohmann::json::object();

  /// Dimension of the phase manifold (2*dim, or 2*dim - 2 when embedded).
  std::size_t phase_dim() const { return kind == ModelKind::embedded ? 2 * dim - 2 : 2 * dim; }
  const FirstIntegral& integral(std::string_view name) const;
  std::size_t integral_index(std::string_view name) const;
  void check_domain(const Eigen::VectorXd& x) const;
  /// |c(q)|, zero for chart models.
  double constraint_residual(const CotangentState& s) const;
  /// |<grad c(q), p>| / |grad c(q)|, zero for chart models.
  double tangency_residual(const CotangentState& s) const;
  CotangentState sample(std::mt19937_64& rng) const { return sampler(rng); }
};

double hamiltonian_eval(const GeodesicModel& model, const CotangentState& s);

/// (dH/dp, -dH/dx) at s.
GradientPair hamiltonian_flow_field(const GeodesicModel& model, const CotangentState& s);

/// Gradient of a phase-space function, exact when fn is exact.
GradientPair derivative(const SmoothFunction& fn, const CotangentState& s);

/// Random tangent state on a centered quadric: q is a normalized Gaussian
/// vector, p a Gaussian vector projected onto the tangent space.
CotangentState sample_on_quadric(const Eigen::VectorXd& d, std::mt19937_64& rng, double p_scale = 1.0);

/// Projects p onto the tangent space at q of the surface with normal n.
Eigen::VectorXd project_tangent(const Eigen::VectorXd& n, const Eigen::VectorXd& p);

/// Normal vector of an embedded model at q.
Eigen::VectorXd surface_normal(const GeodesicModel& model, const Eigen::VectorXd& q);

}  // namespace geolab
