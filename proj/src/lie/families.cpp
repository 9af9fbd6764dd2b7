#include <algorithm>
#include <cmath>

#include "geolab/core/errors.hpp"
#include "geolab/core/linalg.hpp"
#include "geolab/lie/lie.hpp"

namespace geolab {

namespace {

// Weights W with coef_k = sum_j W(k, j) p(t_j) for a polynomial of degree d.
Eigen::MatrixXd interpolation_weights(int d, std::vector<double>& nodes) {
  nodes.resize(d + 1);
  for (int j = 0; j <= d; ++j) nodes[j] = j - 0.5 * d;
  Eigen::MatrixXd V(d + 1, d + 1);
  for (int j = 0; j <= d; ++j)
    for (int k = 0; k <= d; ++k) V(j, k) = std::pow(nodes[j], k);
  return V.inverse();
}

// sum_j w_j p(M_j x) for a list of linear maps M_j (row-major).
SmoothFunction linear_combination(const SmoothFunction& p, std::size_t dim, std::vector<std::vector<double>> maps,
                                  std::vector<double> offsets_scale, std::vector<double> shift,
                                  std::vector<double> weights) {
  return SmoothFunction::exact(dim, [p, dim, maps, offsets_scale, shift, weights](auto x) {
    using T = typename decltype(x)::value_type;
    T acc(0.0);
    std::vector<T> y(dim);
    for (std::size_t j = 0; j < weights.size(); ++j) {
      if (weights[j] == 0.0) continue;
      for (std::size_t r = 0; r < dim; ++r) {
        T s(0.0);
        if (maps.empty()) {
          s = x[r];
        } else {
          for (std::size_t c = 0; c < dim; ++c)
            if (maps[j][r * dim + c] != 0.0) s += maps[j][r * dim + c] * x[c];
        }
        if (!shift.empty()) s += offsets_scale[j] * shift[r];
        y[r] = s;
      }
      acc += weights[j] * p.template eval<T>(std::span<const T>(y));
    }
    return acc;
  });
}

// f(V s) for a function on g and v-coordinates s.
SmoothFunction restrict_to(const SmoothFunction& f, const Eigen::MatrixXd& V) {
  const std::size_t dim = V.rows(), dv = V.cols();
  std::vector<double> Vr(dim * dv);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dv; ++j) Vr[i * dv + j] = V(i, j);
  return SmoothFunction::exact(dv, [f, Vr, dim, dv](auto s) {
    using T = typename decltype(s)::value_type;
    std::vector<T> x(dim, T(0.0));
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dv; ++j)
        if (Vr[i * dv + j] != 0.0) x[i] += Vr[i * dv + j] * s[j];
    return f.template eval<T>(std::span<const T>(x));
  });
}

std::vector<double> row_major(const Eigen::MatrixXd& m) {
  std::vector<double> r(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r[i * m.cols() + j] = m(i, j);
  return r;
}

std::string coef_name(const std::string& base, int k) { return base + "[l^" + std::to_string(k) + "]"; }

// Residual of the P-orthogonal projection of y onto span(B).
double outside_span(const LieAlgebraModel& g, const Eigen::MatrixXd& B, const Eigen::VectorXd& y) {
  if (B.cols() == 0) return y.norm();
  const Eigen::MatrixXd G = B.transpose() * g.pairing * B;
  const Eigen::VectorXd c = G.ldlt().solve(B.transpose() * g.pairing * y);
  return (y - B * c).norm();
}

}  // namespace

// ---- reductive decompositions ---------------------------------------------

ReductiveDecomposition decompose(const LieAlgebraModel& g, const Eigen::MatrixXd& h_basis, bool symmetric) {
  ReductiveDecomposition d;
  d.algebra = g;
  d.h = h_basis.rows() ? h_basis : Eigen::MatrixXd(g.dim, 0);
  d.symmetric = symmetric;
  if (static_cast<std::size_t>(d.h.rows()) != g.dim) throw std::invalid_argument("decompose: h basis has wrong size");
  if (d.h.cols() && numerical_rank(d.h) != d.h.cols()) throw PreconditionError("decompose: h basis is dependent");
  const Eigen::MatrixXd v0 = d.h.cols() ? null_space(d.h.transpose() * g.pairing) : Eigen::MatrixXd::Identity(g.dim, g.dim);
  const Eigen::MatrixXd G = v0.transpose() * g.pairing * v0;
  const Eigen::MatrixXd L = G.llt().matrixL();
  d.v = v0 * L.transpose().inverse();
  d.validate();
  return d;
}

void ReductiveDecomposition::validate(double tol) const {
  const auto& g = algebra;
  for (Eigen::Index i = 0; i < h.cols(); ++i)
    for (Eigen::Index j = i + 1; j < h.cols(); ++j)
      if (outside_span(g, h, g.bracket(h.col(i), h.col(j))) > tol)
        throw PreconditionError("decomposition: h is not closed under the bracket");
  if (h.cols() && (h.transpose() * g.pairing * v).cwiseAbs().maxCoeff() > tol)
    throw PreconditionError("decomposition: h and v are not orthogonal");
  if (!symmetric) return;
  for (Eigen::Index i = 0; i < v.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < v.cols(); ++j)
      if (outside_span(g, h, g.bracket(v.col(i), v.col(j))) > tol)
        throw PreconditionError("symmetric pair: [w, w] is not contained in l");
    for (Eigen::Index j = 0; j < h.cols(); ++j)
      if (outside_span(g, v, g.bracket(h.col(j), v.col(i))) > tol)
        throw PreconditionError("symmetric pair: [l, w] is not contained in w");
  }
}

Eigen::MatrixXd ReductiveDecomposition::v_projector() const { return v * v.transpose() * algebra.pairing; }

Eigen::MatrixXd ReductiveDecomposition::v_tensor(const Eigen::VectorXd& s) const {
  return -(v.transpose() * algebra.form(v * s) * v);
}

ReductiveDecomposition ReductiveDecomposition::rotated(const Eigen::MatrixXd& Q) const {
  ReductiveDecomposition d = *this;
  d.v = v * Q;
  return d;
}

// ---- modified brackets ----------------------------------------------------

ModifiedBracket a_bracket(const LieAlgebraModel& g, const Eigen::VectorXd& a) {
  // <a, [grad g, grad f]> = -df^T P^{-1} M(a) P^{-1} dg.
  const Eigen::MatrixXd pi = -g.lie_poisson_tensor(a);
  return {ModifiedKind::a_bracket, [pi](const Eigen::VectorXd&) { return pi; }};
}

ModifiedBracket theta_bracket(const ReductiveDecomposition& d) {
  if (!d.symmetric) throw PreconditionError("theta bracket: decomposition is not flagged symmetric");
  const Eigen::MatrixXd Pw = d.v_projector();
  const LieAlgebraModel g = d.algebra;
  return {ModifiedKind::theta_bracket, [g, Pw](const Eigen::VectorXd& x) {
            const Eigen::MatrixXd M = g.form(x);
            return Eigen::MatrixXd(-(g.pairing_inv * (M - Pw.transpose() * M * Pw) * g.pairing_inv));
          }};
}

double modified_bracket(const ModifiedBracket& b, const SmoothFunction& f, const SmoothFunction& g,
                        const Eigen::VectorXd& x) {
  const Eigen::MatrixXd pi = b.tensor(x);
  const Eigen::VectorXd df = f.gradient(x), dg = g.gradient(x);
  return 0.5 * (df.dot(pi * dg) - dg.dot(pi * df));
}

double jacobi_tensor_residual(const TensorField& pi, const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  const Eigen::MatrixXd P0 = pi(x);
  std::vector<Eigen::MatrixXd> dP(n);
  for (Eigen::Index l = 0; l < n; ++l) dP[l] = pi(x + Eigen::VectorXd::Unit(n, l)) - P0;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) {
        double s = 0.0;
        for (Eigen::Index l = 0; l < n; ++l)
          s += P0(i, l) * dP[l](j, k) + P0(j, l) * dP[l](k, i) + P0(k, l) * dP[l](i, j);
        worst = std::max(worst, std::abs(s));
      }
  return worst;
}

// ---- families -------------------------------------------------------------

nlohmann::json PolynomialFamily::to_json() const {
  nlohmann::json names = nlohmann::json::array(), degrees = nlohmann::json::array();
  for (const auto& m : members) {
    names.push_back(m.name);
    degrees.push_back(m.degree);
  }
  return {{"provenance", provenance}, {"members", members.size()}, {"names", names},
          {"degrees", degrees},       {"space_dim", space_dim},     {"on_v", on_v}};
}

PolynomialFamily argument_shift_family(const LieAlgebraModel& g, const Eigen::VectorXd& a, int degree_cap) {
  if (static_cast<std::size_t>(a.size()) != g.dim) throw std::invalid_argument("argument_shift_family: bad a");
  if (a.norm() == 0.0) throw PreconditionError("argument_shift_family: a must be nonzero");
  PolynomialFamily fam;
  fam.provenance = "argument_shift";
  fam.space_dim = g.dim;
  const std::vector<double> av(a.data(), a.data() + a.size());
  for (const auto& p : g.invariants) {
    const int d = p.degree;
    std::vector<double> nodes;
    const Eigen::MatrixXd W = interpolation_weights(d, nodes);
    // The lambda^d coefficient is p(a), a constant.
    const int top = degree_cap < 0 ? d - 1 : std::min(d - 1, degree_cap);
    for (int k = 0; k <= top; ++k) {
      std::vector<double> w(d + 1);
      for (int j = 0; j <= d; ++j) w[j] = W(k, j);
      SmoothFunction fk = linear_combination(p.fn, g.dim, {}, nodes, av, w);
      fam.members.push_back({coef_name(p.name, k), fk, d - k, Smoothness::analytic});
    }
  }
  return fam;
}

FunctionFamily lie_family(const PolynomialFamily& fam, const LieAlgebraModel& g, bool on_orbits) {
  if (fam.on_v) throw PreconditionError("lie_family: family lives on v");
  return {fam.provenance, fam.members, on_orbits ? orbit_space(g) : lie_poisson_space(g)};
}

FunctionFamily v_family(const PolynomialFamily& fam, const ReductiveDecomposition& d) {
  if (!fam.on_v) throw PreconditionError("v_family: family does not live on v");
  const std::size_t dv = d.dim_v();
  auto sampler = [dv](std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::VectorXd s(dv);
    for (auto& x : s) x = nd(rng);
    return s;
  };
  // Generic corank of the v bracket.
  std::mt19937_64 rng(12345);
  int rk = 0;
  for (int i = 0; i < 8; ++i) rk = std::max(rk, numerical_rank(d.v_tensor(sampler(rng))));
  return {fam.provenance, fam.members,
          poisson_space("v", dv, dv - rk, [d](const Eigen::VectorXd& s) { return d.v_tensor(s); }, sampler)};
}

// ---- pencil ---------------------------------------------------------------

std::vector<std::complex<double>> default_lambda_samples() {
  std::vector<std::complex<double>> out;
  const double pi = std::acos(-1.0);
  for (double r : {0.5, 2.0})
    for (int k = 0; k < 16; ++k) out.push_back(std::polar(r, pi / 16.0 + 2.0 * pi * k / 16.0));
  for (double t : {0.25, 0.75, 1.5, 3.0}) {
    out.emplace_back(t, 0.0);
    out.emplace_back(-t, 0.0);
  }
  return out;
}

nlohmann::json PencilReport::to_json() const {
  nlohmann::json d = nlohmann::json::array();
  for (const auto& z : drops) d.push_back({z.real(), z.imag()});
  return {{"complete", complete}, {"generic_rank", generic_rank}, {"samples", samples},
          {"rank_drops", d},      {"drop_at_infinity", drop_at_infinity}, {"candidates", candidates}};
}

PencilReport pencil_completeness_check(const TensorField& pi1, const TensorField& pi2, const Eigen::VectorXd& x,
                                       const std::vector<std::complex<double>>& samples, double rel_tol,
                                       std::uint64_t seed) {
  const Eigen::MatrixXd A = pi1(x), B = pi2(x);
  auto rank_at = [&](std::complex<double> lam) {
    return numerical_rank(Eigen::MatrixXcd(A.cast<std::complex<double>>() + lam * B.cast<std::complex<double>>()),
                          rel_tol);
  };
  // A member that vanishes at x (proportional pencils) is the zero bracket, not a rank drop.
  auto vanishes = [&](std::complex<double> lam) {
    const Eigen::MatrixXcd M = A.cast<std::complex<double>>() + lam * B.cast<std::complex<double>>();
    return M.norm() <= rel_tol * (A.norm() + std::abs(lam) * B.norm());
  };
  PencilReport rep;
  rep.samples = samples.size();
  const int rA = numerical_rank(A, rel_tol), rB = numerical_rank(B, rel_tol);
  std::vector<int> ranks;
  for (const auto& lam : samples) ranks.push_back(rank_at(lam));
  int r = std::max(rA, rB);
  for (int v : ranks) r = std::max(r, v);
  rep.generic_rank = r;
  if (rA < r)
    throw NonGenericPointError("reference bracket has rank " + std::to_string(rA) + " < generic rank " +
                               std::to_string(r));
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (ranks[i] < r && !vanishes(samples[i])) rep.drops.push_back(samples[i]);
  rep.drop_at_infinity = rB < r;

  // Rank drops of the full pencil are roots of det(U^T (A + lambda B) V).
  if (r > 0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::MatrixXd U(A.rows(), r), V(A.cols(), r);
    for (Eigen::Index i = 0; i < U.size(); ++i) U.data()[i] = nd(rng);
    for (Eigen::Index i = 0; i < V.size(); ++i) V.data()[i] = nd(rng);
    const Eigen::MatrixXd cA = U.transpose() * A * V, cB = U.transpose() * B * V;
    Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges(cA, Eigen::MatrixXd(-cB), false);
    const double scale = std::max(1.0, cA.norm() / std::max(cB.norm(), 1e-300));
    for (Eigen::Index i = 0; i < ges.alphas().size(); ++i) {
      const std::complex<double> al = ges.alphas()[i];
      const double be = ges.betas()[i];
      if (std::abs(be) <= 1e-12 * std::abs(al)) continue;  // infinite eigenvalue, handled above
      const std::complex<double> lam = al / be;
      if (std::abs(lam) > 1e12 * scale) continue;
      ++rep.candidates;
      if (rank_at(lam) < r && !vanishes(lam)) {
        const bool dup = std::any_of(rep.drops.begin(), rep.drops.end(), [&](const auto& z) {
          return std::abs(z - lam) <= 1e-8 * std::max(1.0, std::abs(lam));
        });
        if (!dup) rep.drops.push_back(lam);
      }
    }
  }
  rep.complete = rep.drops.empty() && !rep.drop_at_infinity;
  return rep;
}

// ---- presets --------------------------------------------------------------

ReductiveDecomposition aloff_wallach_decomposition(int k, int l) {
  if (k == 0 && l == 0) throw ParameterError("aloff_wallach: need |k| + |l| != 0");
  const LieAlgebraModel g = su_algebra(3);
  // t_{k,l} = i diag(k, l, -(k+l)) = k i(e1 - e2) + (k+l) i(e2 - e3).
  Eigen::VectorXd t = Eigen::VectorXd::Zero(g.dim);
  t[6] = k;
  t[7] = k + l;
  return decompose(g, t);
}

namespace {

PolynomialFamily aloff_wallach_family(const ReductiveDecomposition& d) {
  const LieAlgebraModel& g = d.algebra;
  if (g.realization.n != 3 || g.dim != 8) throw PreconditionError("aloff_wallach preset needs su(3)");
  const MatrixRealization R = g.realization;
  // Entries of X(x) as (re, im) from the realization.
  auto entries = [R](auto x) {
    using T = typename decltype(x)::value_type;
    std::array<T, 9> re, im;
    re.fill(T(0.0));
    im.fill(T(0.0));
    for (std::size_t b = 0; b < R.re.size(); ++b)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          re[i * 3 + j] += R.re[b](i, j) * x[b];
          im[i * 3 + j] += R.im[b](i, j) * x[b];
        }
    return std::pair{re, im};
  };
  auto in_g1 = [](int i, int j) { return (i < 2 && j < 2) || (i == 2 && j == 2); };
  SmoothFunction f1 = SmoothFunction::exact(8, [entries](auto x) {
    const auto [re, im] = entries(x);
    return im[0] + im[4];
  });
  SmoothFunction f2 = SmoothFunction::exact(8, [entries, in_g1](auto x) {
    using T = typename decltype(x)::value_type;
    const auto [re, im] = entries(x);
    T s(0.0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (in_g1(i, j)) s += re[i * 3 + j] * re[i * 3 + j] + im[i * 3 + j] * im[i * 3 + j];
    return 0.5 * s;
  });
  const std::vector<FirstIntegral> inv = block_invariants(g, 3, true);
  PolynomialFamily fam;
  fam.provenance = "aloff_wallach";
  fam.on_v = true;
  fam.space_dim = d.dim_v();
  fam.members = {{"f1", restrict_to(f1, d.v), 1, Smoothness::analytic},
                 {"f2", restrict_to(f2, d.v), 2, Smoothness::analytic},
                 {"f3", restrict_to(inv[0].fn, d.v), 2, Smoothness::analytic},
                 {"f4", restrict_to(inv[1].fn, d.v), 3, Smoothness::analytic}};
  return fam;
}

}  // namespace

PolynomialFamily restricted_invariant_family(const ReductiveDecomposition& d, const PresetSpec& preset) {
  const LieAlgebraModel& g = d.algebra;
  PolynomialFamily fam;
  fam.on_v = true;
  fam.space_dim = d.dim_v();
  auto add_restricted = [&](const std::vector<FirstIntegral>& fs) {
    for (const auto& f : fs) fam.members.push_back({f.name, restrict_to(f.fn, d.v), f.degree, f.smoothness});
  };
  switch (preset.kind) {
    case Preset::shift: {
      fam.provenance = "shift";
      for (Eigen::Index i = 0; i < d.h.cols(); ++i)
        if (g.bracket(d.h.col(i), preset.a).norm() > 1e-10)
          throw PreconditionError("shift preset: h is not contained in ann(a)");
      add_restricted(argument_shift_family(g, preset.a).members);
      return fam;
    }
    case Preset::chain: {
      fam.provenance = "chain";
      if (g.realization.empty()) throw PreconditionError("chain preset needs a matrix algebra");
      const std::size_t n = g.realization.n;
      std::vector<std::size_t> sizes = preset.chain;
      if (sizes.empty() || sizes.back() != n) sizes.push_back(n);
      for (std::size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i] <= sizes[i - 1]) throw PreconditionError("chain preset: block sizes must increase");
      // h must sit inside the smallest block for the family to be Ad_H-invariant.
      const std::size_t k0 = sizes.front();
      const Eigen::MatrixXd& H = d.h;
      for (Eigen::Index c = 0; c < H.cols(); ++c) {
        const Eigen::MatrixXcd X = g.realization.matrix(H.col(c));
        Eigen::MatrixXcd outside = X;
        outside.topLeftCorner(k0, k0).setZero();
        if (outside.cwiseAbs().maxCoeff() > 1e-12) throw PreconditionError("chain preset: h is not inside g_1");
      }
      const bool traceless = g.name.rfind("su(", 0) == 0;
      for (std::size_t k : sizes) add_restricted(block_invariants(g, k, traceless && k == n));
      return fam;
    }
    case Preset::symmetric_pair: {
      fam.provenance = "symmetric_pair";
      if (!d.symmetric) throw PreconditionError("symmetric_pair preset: decomposition is not symmetric");
      add_restricted(g.invariants);
      return fam;
    }
    case Preset::aloff_wallach:
      return aloff_wallach_family(d);
  }
  throw std::invalid_argument("unknown preset");
}

nlohmann::json OrbitCompleteness::to_json() const {
  nlohmann::json j = report.to_json();
  j["dim_v"] = dim_v;
  j["dim_ann_g"] = dim_ann_g;
  j["dim_ann_h"] = dim_ann_h;
  j["orbit_dim"] = orbit_dim;
  j["required_ddim"] = required_ddim;
  j["invariant_ddim"] = invariant_ddim;
  j["invariant_dind"] = invariant_dind;
  j["generic_samples"] = generic_samples;
  j["nongeneric_warning"] = nongeneric_warning;
  j["max_residual"] = max_residual;
  j["complete"] = complete;
  return j;
}

OrbitCompleteness completeness_on_v(const ReductiveDecomposition& d, const PolynomialFamily& fam,
                                    const std::vector<Eigen::VectorXd>& v_samples, double commute_tol) {
  if (v_samples.empty()) throw std::invalid_argument("completeness_on_v: no samples");
  const LieAlgebraModel& g = d.algebra;
  std::vector<std::pair<std::size_t, std::size_t>> ann;
  for (const auto& s : v_samples) {
    const Eigen::MatrixXd ad = g.right_ad(d.v * s);
    const std::size_t ag = g.dim - numerical_rank(ad);
    const std::size_t ah = d.h.cols() ? d.h.cols() - numerical_rank(Eigen::MatrixXd(ad * d.h)) : 0;
    ann.emplace_back(ag, ah);
  }
  std::size_t min_g = ann[0].first, min_h = ann[0].second;
  for (const auto& [ag, ah] : ann) {
    min_g = std::min(min_g, ag);
    min_h = std::min(min_h, ah);
  }
  std::vector<Eigen::VectorXd> generic;
  for (std::size_t i = 0; i < ann.size(); ++i)
    if (ann[i].first == min_g && ann[i].second == min_h) generic.push_back(v_samples[i]);

  OrbitCompleteness out;
  out.dim_v = d.dim_v();
  out.dim_ann_g = min_g;
  out.dim_ann_h = min_h;
  out.orbit_dim = g.dim - min_g;
  out.required_ddim = out.dim_v - out.orbit_dim / 2;
  out.invariant_ddim = out.dim_v - d.h.cols() + min_h;
  out.invariant_dind = min_g - min_h;
  out.generic_samples = generic.size();
  out.nongeneric_warning = generic.empty() || 2 * generic.size() < v_samples.size();
  const FunctionFamily ff = v_family(fam, d);
  const auto& used = generic.empty() ? v_samples : generic;
  out.report = ddim_dind(ff, used);
  out.max_residual = out.report.residual_matrix.size() ? out.report.residual_matrix.maxCoeff() : 0.0;
  out.complete = static_cast<std::size_t>(out.report.ddim) == out.required_ddim && out.max_residual <= commute_tol;
  return out;
}

PolynomialFamily casimir_family(const ReductiveDecomposition& d) {
  PolynomialFamily fam;
  fam.provenance = "custom";
  fam.on_v = true;
  fam.space_dim = d.dim_v();
  for (const auto& f : d.algebra.invariants)
    fam.members.push_back({f.name, restrict_to(f.fn, d.v), f.degree, f.smoothness});
  return fam;
}

SmoothFunction symmetric_pair_member(const ReductiveDecomposition& d, const SmoothFunction& p, double lambda) {
  const std::size_t n = d.algebra.dim;
  const Eigen::MatrixXd Pw = d.v_projector();
  const Eigen::MatrixXd M = lambda * (Eigen::MatrixXd::Identity(n, n) - Pw) + Pw;
  return linear_combination(p, n, {row_major(M)}, {0.0}, {}, {1.0});
}

PolynomialFamily symmetric_pair_family(const ReductiveDecomposition& d, const std::vector<FirstIntegral>& inner_family) {
  if (!d.symmetric) throw PreconditionError("symmetric_pair_family: decomposition is not flagged symmetric");
  d.validate();
  const LieAlgebraModel& g = d.algebra;
  const std::size_t n = g.dim;
  const Eigen::MatrixXd Pw = d.v_projector();
  const Eigen::MatrixXd Pl = Eigen::MatrixXd::Identity(n, n) - Pw;
  PolynomialFamily fam;
  fam.provenance = "symmetric_pair";
  fam.space_dim = n;
  for (const auto& p : g.invariants) {
    const int deg = p.degree;
    std::vector<double> nodes;
    const Eigen::MatrixXd W = interpolation_weights(deg, nodes);
    std::vector<std::vector<double>> maps;
    for (double t : nodes) maps.push_back(row_major(Eigen::MatrixXd(t * Pl + Pw)));
    for (int k = 0; k <= deg; ++k) {
      std::vector<double> w(deg + 1);
      for (int j = 0; j <= deg; ++j) w[j] = W(k, j);
      fam.members.push_back(
          {coef_name(p.name, k), linear_combination(p.fn, n, maps, {}, {}, w), deg, Smoothness::analytic});
    }
  }
  for (const auto& f : inner_family) fam.members.push_back(f);
  return fam;
}

SmoothFunction projected_coordinate(const LieAlgebraModel& g, const Eigen::MatrixXd& basis, std::size_t index) {
  const Eigen::MatrixXd G = basis.transpose() * g.pairing * basis;
  const Eigen::MatrixXd C = G.inverse() * basis.transpose() * g.pairing;
  const Eigen::VectorXd r = C.row(index).transpose();
  const std::vector<double> rv(r.data(), r.data() + r.size());
  return SmoothFunction::exact(g.dim, [rv](auto x) {
    using T = typename decltype(x)::value_type;
    T s(0.0);
    for (std::size_t i = 0; i < rv.size(); ++i) s += rv[i] * x[i];
    return s;
  });
}

}  // namespace geolab
