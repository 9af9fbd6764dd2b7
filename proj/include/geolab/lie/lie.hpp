#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "geolab/core/model.hpp"
#include "geolab/poisson/poisson.hpp"
#include "json.hpp"

namespace geolab {

/// Coordinate-dependent bivector acting on coordinate gradients.
using TensorField = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

/// Real and imaginary parts of a matrix realization X(x) = sum_i x_i B_i.
struct MatrixRealization {
  std::size_t n = 0;
  std::vector<Eigen::MatrixXd> re, im;

  bool empty() const { return re.empty(); }
  Eigen::MatrixXcd matrix(const Eigen::VectorXd& x) const;
};

/// Finite-dimensional Lie algebra in a fixed basis e_1..e_dim. Elements are
/// coordinate vectors; g* is identified with g through the pairing P, so the
/// gradient of f is P^{-1} df.
struct LieAlgebraModel {
  std::string name;
  std::size_t dim = 0;
  std::vector<double> c;  // c[(i * dim + j) * dim + k] = c^k_ij, [e_i, e_j] = c^k_ij e_k
  Eigen::MatrixXd pairing;
  Eigen::MatrixXd pairing_inv;
  MatrixRealization realization;
  std::vector<FirstIntegral> invariants;  // generators of the invariant polynomials
  std::size_t rank = 0;                   // number of independent invariants

  double structure(std::size_t i, std::size_t j, std::size_t k) const { return c[(i * dim + j) * dim + k]; }
  Eigen::VectorXd bracket(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
  /// Matrix of xi -> [xi, v].
  Eigen::MatrixXd right_ad(const Eigen::VectorXd& v) const;
  double inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const { return u.dot(pairing * v); }
  /// M(x)_ij = <x, [e_i, e_j]>.
  Eigen::MatrixXd form(const Eigen::VectorXd& x) const;
  /// P^{-1} M(x) P^{-1}: {f, g}(x) = df^T Pi(x) dg.
  Eigen::MatrixXd lie_poisson_tensor(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const SmoothFunction& f, const Eigen::VectorXd& x) const;
  /// Orthonormal basis of the coadjoint-orbit tangent space {[xi, x]} at x.
  Eigen::MatrixXd orbit_tangent_basis(const Eigen::VectorXd& x) const;
  /// max |Jacobi| over all basis triples.
  double jacobi_residual() const;
  /// max |<[a,b],c> + <b,[a,c]>| over random triples.
  double invariance_residual(std::size_t trials = 20, std::uint64_t seed = 1) const;
  std::vector<Eigen::VectorXd> sample(std::size_t count, std::uint64_t seed) const;
};

LieAlgebraModel so_algebra(std::size_t n);
LieAlgebraModel u_algebra(std::size_t n);
LieAlgebraModel su_algebra(std::size_t n);
LieAlgebraModel direct_sum(const LieAlgebraModel& a, const LieAlgebraModel& b);
/// "so(4)", "u(3)", "su(3)", "so(3)+so(3)".
LieAlgebraModel lie_algebra(const std::string& name);

/// Invariant generators of the top-left k x k block of a matrix algebra
/// (so-type for real realizations, u-type otherwise), as functions on g.
std::vector<FirstIntegral> block_invariants(const LieAlgebraModel& g, std::size_t k, bool traceless = false);

/// {f, g}(x) = <x, [grad f, grad g]>.
double lie_poisson_bracket(const SmoothFunction& f, const SmoothFunction& g, const Eigen::VectorXd& x,
                           const LieAlgebraModel& algebra);

/// Lie-Poisson structure of the algebra as a phase space (corank = rank).
PhaseSpace lie_poisson_space(const LieAlgebraModel& algebra);
/// Lie-Poisson structure restricted to coadjoint orbits (symplectic leaves).
PhaseSpace orbit_space(const LieAlgebraModel& algebra);

// ---- reductive decompositions ---------------------------------------------

/// g = h + v with v the pairing-orthogonal complement of h. Columns of v are
/// P-orthonormal, so v-coordinates carry the standard inner product.
struct ReductiveDecomposition {
  LieAlgebraModel algebra;
  Eigen::MatrixXd h;  // dim x dim h
  Eigen::MatrixXd v;  // dim x dim v
  bool symmetric = false;  // (g, h) symmetric pair with l = h, w = v

  std::size_t dim_v() const { return static_cast<std::size_t>(v.cols()); }
  /// Checks closure of h, orthogonality, and the symmetric-pair relations when flagged.
  void validate(double tol = 1e-10) const;
  /// P-orthogonal projector onto v, in coordinates.
  Eigen::MatrixXd v_projector() const;
  /// Bracket on v from {f,g}_v(v) = -<v, [grad f, grad g]>, on v-coordinates.
  Eigen::MatrixXd v_tensor(const Eigen::VectorXd& s) const;
  /// Same decomposition with the v basis rotated by an orthogonal matrix.
  ReductiveDecomposition rotated(const Eigen::MatrixXd& Q) const;
};

ReductiveDecomposition decompose(const LieAlgebraModel& g, const Eigen::MatrixXd& h_basis, bool symmetric = false);

// ---- modified brackets ----------------------------------------------------

enum class ModifiedKind { a_bracket, theta_bracket };

struct ModifiedBracket {
  ModifiedKind kind = ModifiedKind::a_bracket;
  TensorField tensor;
};

/// {f,g}_a = <a, [grad g, grad f]>.
ModifiedBracket a_bracket(const LieAlgebraModel& g, const Eigen::VectorXd& a);
/// {f,g}_theta = <x, [grad g, grad f]_theta>, where [.,.]_theta kills [w, w].
ModifiedBracket theta_bracket(const ReductiveDecomposition& d);

double modified_bracket(const ModifiedBracket& b, const SmoothFunction& f, const SmoothFunction& g,
                        const Eigen::VectorXd& x);

/// Jacobi residual of an affine bivector field: max over index triples of
/// |sum_cyc sum_l Pi_il d_l Pi_jk| at x.
double jacobi_tensor_residual(const TensorField& pi, const Eigen::VectorXd& x);

// ---- families -------------------------------------------------------------

struct PolynomialFamily {
  std::string provenance;  // argument_shift, chain, symmetric_pair, aloff_wallach, custom
  std::vector<FirstIntegral> members;
  std::size_t space_dim = 0;
  bool on_v = false;

  nlohmann::json to_json() const;
};

/// lambda-coefficients of p(x + lambda a) for every invariant generator p;
/// the constant top coefficient is dropped. degree_cap < 0 keeps all.
PolynomialFamily argument_shift_family(const LieAlgebraModel& g, const Eigen::VectorXd& a, int degree_cap = -1);

/// Family on g with the Lie-Poisson bracket, or on v with the bracket of the decomposition.
FunctionFamily lie_family(const PolynomialFamily& fam, const LieAlgebraModel& g, bool on_orbits = false);
FunctionFamily v_family(const PolynomialFamily& fam, const ReductiveDecomposition& d);

struct PencilReport {
  bool complete = false;
  int generic_rank = 0;
  std::size_t samples = 0;
  std::vector<std::complex<double>> drops;  // finite rank-dropping lambda
  bool drop_at_infinity = false;
  std::size_t candidates = 0;  // finite roots of the compressed pencil that were verified

  nlohmann::json to_json() const;
};

/// 16 points on each of |lambda| = 0.5 and 2 plus 8 real points.
std::vector<std::complex<double>> default_lambda_samples();

/// Rank of Pi1 + lambda Pi2 at x over the sampled lambda, lambda = infinity, and
/// the finite eigenvalues of a random compression of the pencil.
PencilReport pencil_completeness_check(const TensorField& pi1, const TensorField& pi2, const Eigen::VectorXd& x,
                                       const std::vector<std::complex<double>>& samples = default_lambda_samples(),
                                       double rel_tol = 1e-8, std::uint64_t seed = 0);

enum class Preset { shift, chain, symmetric_pair, aloff_wallach };

struct PresetSpec {
  Preset kind = Preset::shift;
  Eigen::VectorXd a;                 // shift
  std::vector<std::size_t> chain;    // chain: block sizes k_1 < k_2 < ... (top-left blocks)
  int k = 1, l = 2;                  // aloff_wallach
};

/// Ad_H-invariant family on v-coordinates.
PolynomialFamily restricted_invariant_family(const ReductiveDecomposition& d, const PresetSpec& preset);

/// su(3) = t_{k,l} + v with the four generators of the chain t_{k,l} in u(2) in su(3).
ReductiveDecomposition aloff_wallach_decomposition(int k, int l);

struct OrbitCompleteness {
  CompletenessReport report;  // ddim/dind of the family under the v bracket
  std::size_t dim_v = 0;
  std::size_t dim_ann_g = 0;
  std::size_t dim_ann_h = 0;
  std::size_t orbit_dim = 0;
  std::size_t required_ddim = 0;  // dim v - orbit_dim / 2
  // Full invariant algebra R[v]^H from annihilator dimensions.
  std::size_t invariant_ddim = 0;
  std::size_t invariant_dind = 0;
  std::size_t generic_samples = 0;
  bool nongeneric_warning = false;
  double max_residual = 0.0;
  bool complete = false;

  nlohmann::json to_json() const;
};

OrbitCompleteness completeness_on_v(const ReductiveDecomposition& d, const PolynomialFamily& fam,
                                    const std::vector<Eigen::VectorXd>& v_samples, double commute_tol = 1e-10);

/// Invariant generators of g restricted to v (provenance custom).
PolynomialFamily casimir_family(const ReductiveDecomposition& d);

/// p(lambda l + w) for x = l + w.
SmoothFunction symmetric_pair_member(const ReductiveDecomposition& d, const SmoothFunction& p, double lambda);

/// lambda-coefficients of p(lambda l + w) for every invariant p, plus inner_family (functions on g).
PolynomialFamily symmetric_pair_family(const ReductiveDecomposition& d, const std::vector<FirstIntegral>& inner_family);

/// Function on g depending only on the P-orthogonal projection onto span(basis).
SmoothFunction projected_coordinate(const LieAlgebraModel& g, const Eigen::MatrixXd& basis, std::size_t index);

}  // namespace geolab
