#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "geolab/core/model.hpp"
#include "json.hpp"

namespace geolab {

/// Semi-axis squares a_1 > ... > a_n > 0 of the ellipsoid <A^{-1}x, x> = 1.
struct EllipsoidParams {
  Eigen::VectorXd a;

  /// Strictly decreasing, positive, pairwise gaps >= 1e-8.
  void validate() const;
};

/// f(x) = c0 + sum_k cos_k cos(kx) + sin_k sin(kx), k = 1, 2, ...
struct TrigSeries {
  double c0 = 0.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;

  template <class T>
  T eval(const T& x) const {
    T s(c0);
    for (std::size_t k = 0; k < cos_coeffs.size(); ++k) s += cos_coeffs[k] * cos(double(k + 1) * x);
    for (std::size_t k = 0; k < sin_coeffs.size(); ++k) s += sin_coeffs[k] * sin(double(k + 1) * x);
    return s;
  }
  /// Lower bound from a dense sample (exact for constants).
  double sampled_min(int samples = 4096) const;
};

/// Meridian profile r(z) of a surface of revolution; z is meridian arclength.
struct RevolutionProfile {
  std::string name;
  SmoothFunction r;               // arity 1
  bool periodic = false;          // z identified mod 2*pi
  double z_min = 0.0, z_max = 0.0;  // open interval when !periodic
};

RevolutionProfile torus_profile(double R = 2.0, double rho = 1.0);
/// r = sin z on (0, pi): the round sphere in colatitude.
RevolutionProfile sphere_profile();

GeodesicModel flat_torus(double a = 1.0, double b = 0.0, double c = 1.0);
GeodesicModel round_sphere();
GeodesicModel surface_of_revolution(const RevolutionProfile& profile);
GeodesicModel liouville_surface(const TrigSeries& f, const TrigSeries& g);
GeodesicModel ellipsoid_moser(const EllipsoidParams& params);

/// Confocal parameters alpha (n - 2 of them, sorted) of the quadrics touched
/// by the line x + t v.
std::vector<double> chasles_tangency(const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                                     const EllipsoidParams& params);

/// Potential V(q) with base metric and energy level for the Maupertuis metric.
struct MaupertuisConfig {
  double h = 2.0;
  Eigen::VectorXd a;  // V(q) = <Aq, q>/2 on the unit sphere

  void validate() const;
};

struct NeumannMaupertuis {
  GeodesicModel geodesic;  // metric (h - V)<dq,dq> on the sphere, integrals Fbar_k
  GeodesicModel neumann;   // H = <p,p>/2 + V, Uhlenbeck integrals F_k
};

NeumannMaupertuis neumann_maupertuis(const MaupertuisConfig& cfg);

/// a, b of length n + 1; the sphere is S^{n-1} in R^n. With deformed = false the
/// Hamiltonian is H_{a,b}; otherwise the deformation with the extra p_i^2 terms.
GeodesicModel brailov_manakov_sphere(const Eigen::VectorXd& a, const Eigen::VectorXd& b, bool deformed = false);

/// Ellipsoid metric g, its projectively equivalent companion gbar and the
/// operator field S on tangent spaces. Matrices are expressed in an
/// orthonormal tangent basis E (columns) at x.
struct ProjectiveFamily {
  EllipsoidParams params;
  GeodesicModel g;
  GeodesicModel g_bar;

  Eigen::MatrixXd tangent_basis(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd metric_g(const Eigen::VectorXd& x, const Eigen::MatrixXd& E) const;
  Eigen::MatrixXd metric_g_bar(const Eigen::VectorXd& x, const Eigen::MatrixXd& E) const;
  /// (det gbar / det g)^{1/(m+1)} gbar^{-1} g with m = dim Q.
  Eigen::MatrixXd S_from_definition(const Eigen::VectorXd& x, const Eigen::MatrixXd& E) const;
  /// (A - x x^T) restricted to T_x Q.
  Eigen::MatrixXd S_closed_form(const Eigen::VectorXd& x, const Eigen::MatrixXd& E) const;
  /// g_k = g S^k, with S in closed form.
  Eigen::MatrixXd member_g(int k, const Eigen::VectorXd& x, const Eigen::MatrixXd& E) const;
  /// gbar_k = gbar S^k.
  Eigen::MatrixXd member_g_bar(int k, const Eigen::VectorXd& x, const Eigen::MatrixXd& E) const;
  /// <dx,dx> / <A^{-1}x, A^{-1}x> restricted to T_x Q.
  Eigen::MatrixXd conformal_companion(const Eigen::VectorXd& x, const Eigen::MatrixXd& E) const;
};

ProjectiveFamily projective_family(const EllipsoidParams& params);

enum class RigidBodyCase { kovalevskaya, goryachev_chaplygin };

GeodesicModel rigid_body_maupertuis(RigidBodyCase which, double h);

/// Torus bundle data for the SOL (hyperbolic B) and NIL (parabolic B) cases.
struct SolModel {
  Eigen::Matrix2d B;
  bool hyperbolic = true;
  double lambda = 1.0;  // largest eigenvalue (hyperbolic case)
  Eigen::Vector2d u;    // eigenvector for lambda; l1(p) = <u, p>
  Eigen::Vector2d w;    // eigenvector for 1/lambda; l2(p) = <w, p>
  Eigen::Vector2d e;    // parabolic: kernel of B - I; l1(p) = <e, p>
  Eigen::Vector2d f;    // parabolic: (B - I) f = shift * e; l2(p) = <f, p>
  double shift = 1.0;

  /// N(s) = B^s, s = z / (2 pi); G(z) = N^T N. Row-major 2x2.
  template <class T>
  std::array<T, 4> G(const T& z) const;
  Eigen::Matrix2d G(double z) const;
  /// \int_0^{2 pi} G(z)^{-1} dz in closed form.
  Eigen::Matrix2d transport_integral() const;
};

/// B: 2x2 integer, det 1, symmetric with trace > 2 or parabolic (trace 2, B != I).
SolModel make_sol_model(const Eigen::Matrix2d& B);
GeodesicModel sol_manifold(const Eigen::Matrix2d& B);
GeodesicModel sol_manifold(const SolModel& sol);

// ---- registry -------------------------------------------------------------

struct CatalogEntry {
  std::string key;
  std::string description;
  std::string anchor;
  nlohmann::json defaults;
  std::vector<std::string> integrals;
};

/// Stable-ordered listing of every catalog key.
std::vector<CatalogEntry> list_catalog();
/// Builds a model from its key; missing parameters take the defaults.
GeodesicModel build_model(const std::string& key, const nlohmann::json& params = nlohmann::json::object());
bool has_model(const std::string& key);

// ---- SolModel template body -------------------------------------------------

template <class T>
std::array<T, 4> SolModel::G(const T& z) const {
  const double two_pi = 6.283185307179586476925286766559;
  if (hyperbolic) {
    // G = lambda^{2s} u u^T + lambda^{-2s} w w^T for symmetric B.
    const T s = z / two_pi;
    const T lp = exp(2.0 * std::log(lambda) * s);
    const T lm = exp(-2.0 * std::log(lambda) * s);
    return {lp * (u[0] * u[0]) + lm * (w[0] * w[0]), lp * (u[0] * u[1]) + lm * (w[0] * w[1]),
            lp * (u[1] * u[0]) + lm * (w[1] * w[0]), lp * (u[1] * u[1]) + lm * (w[1] * w[1])};
  }
  // N = I + s K with K = B - I nilpotent.
  const T s = z / two_pi;
  const T n00 = 1.0 + s * (B(0, 0) - 1.0), n01 = s * B(0, 1);
  const T n10 = s * B(1, 0), n11 = 1.0 + s * (B(1, 1) - 1.0);
  return {n00 * n00 + n10 * n10, n00 * n01 + n10 * n11, n01 * n00 + n11 * n10, n01 * n01 + n11 * n11};
}

}  // namespace geolab
