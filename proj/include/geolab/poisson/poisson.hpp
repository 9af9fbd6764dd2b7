#pragma once

#include <Eigen/Dense>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "geolab/core/model.hpp"
#include "geolab/integrator/integrator.hpp"
#include "json.hpp"

namespace geolab {

/// Poisson manifold on which families are evaluated. Points are coordinate
/// vectors of length coord_dim; the manifold may be a submanifold of that
/// coordinate space (embedded models), described by its tangent basis.
struct PhaseSpace {
  std::string name;
  std::size_t coord_dim = 0;
  std::size_t manifold_dim = 0;
  /// Generic corank of the bracket on the manifold (0 when symplectic).
  std::size_t corank = 0;
  /// {f, g}(y) from coordinate gradients; exactly antisymmetric in (df, dg).
  std::function<double(const Eigen::VectorXd& y, const Eigen::VectorXd& df, const Eigen::VectorXd& dg)> bracket;
  /// Orthonormal basis (columns) of the tangent space at y; unset means identity.
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> tangent_basis;
  std::function<Eigen::VectorXd(std::mt19937_64&)> sampler;

  Eigen::MatrixXd basis(const Eigen::VectorXd& y) const;
  /// Bracket matrix in the tangent basis, E^T Pi E.
  Eigen::MatrixXd poisson_matrix(const Eigen::VectorXd& y) const;
};

/// Standard symplectic R^{2n} with layout (x, p).
PhaseSpace canonical_space(std::size_t n);

/// Phase space of a catalog model: canonical for charts, the Dirac bracket on
/// {c(q) = 0, <grad c(q), p> = 0} for embedded models.
PhaseSpace model_phase_space(const GeodesicModel& model);

/// Linear Poisson structure {f,g}(y) = sum_ij Pi_ij(y) df_i dg_j with a generic
/// corank; Pi(y) must be antisymmetric.
PhaseSpace poisson_space(std::string name, std::size_t dim, std::size_t corank,
                         std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> pi,
                         std::function<Eigen::VectorXd(std::mt19937_64&)> sampler);

struct FunctionFamily {
  std::string name;
  std::vector<FirstIntegral> members;
  PhaseSpace space;
};

/// Family of the declared integrals of a model, optionally restricted to the given names.
FunctionFamily model_family(const GeodesicModel& model, const std::vector<std::string>& names = {});

/// sum_i (df/dx_i dg/dp_i - dg/dx_i df/dp_i).
double canonical_bracket(const SmoothFunction& f, const SmoothFunction& g, const CotangentState& s);
double bracket(const PhaseSpace& space, const SmoothFunction& f, const SmoothFunction& g, const Eigen::VectorXd& y);

/// Seeded sample of points of the family's phase space.
std::vector<Eigen::VectorXd> sample_states(const PhaseSpace& space, std::size_t count, std::uint64_t seed);

/// max over states of |{f_i, f_j}|; symmetric with zero diagonal.
Eigen::MatrixXd commutation_residual(const FunctionFamily& family, const std::vector<Eigen::VectorXd>& states);

/// Max over states of the numerical rank of the gradients restricted to the manifold.
int independence_rank(const FunctionFamily& family, const std::vector<Eigen::VectorXd>& states,
                      double rel_tol = 1e-8);

/// Per-integral max_t |F(t) - F(0)| / max(1, |F(0)|), evaluated from the stored states.
std::vector<double> conservation_drift(const GeodesicModel& model, const TrajectoryRecord& record);

struct CompletenessReport {
  std::string family;
  std::size_t sample_points = 0;
  Eigen::MatrixXd residual_matrix;
  int ddim = 0;
  int dind = 0;
  std::size_t phase_dim = 0;
  std::size_t corank = 0;
  bool complete = false;
  double rank_tolerance = 1e-8;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
};

/// ddim = independence rank; dind = ddim - rank of the Gram matrix {f_i, f_j},
/// both at their generic (maximal over states) values. Complete iff
/// ddim + dind = phase_dim + corank.
CompletenessReport ddim_dind(const FunctionFamily& family, const std::vector<Eigen::VectorXd>& states,
                             double rel_tol = 1e-8, std::uint64_t seed = 0);

}  // namespace geolab
