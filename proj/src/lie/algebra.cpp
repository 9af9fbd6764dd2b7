#include <cmath>
#include <regex>

#include "geolab/core/errors.hpp"
#include "geolab/core/linalg.hpp"
#include "geolab/lie/lie.hpp"

namespace geolab {

namespace {

// Row-major m x m product.
template <class T>
std::vector<T> matmul(const std::vector<T>& a, const std::vector<T>& b, std::size_t m) {
  std::vector<T> r(m * m, T(0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k) {
      const T aik = a[i * m + k];
      for (std::size_t j = 0; j < m; ++j) r[i * m + j] += aik * b[k * m + j];
    }
  return r;
}

// Top-left k x k block of X(x): real and imaginary parts, row-major.
template <class T>
std::pair<std::vector<T>, std::vector<T>> block(const MatrixRealization& R, std::span<const T> x, std::size_t k) {
  std::vector<T> re(k * k, T(0.0)), im(k * k, T(0.0));
  for (std::size_t b = 0; b < R.re.size(); ++b)
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        if (R.re[b](i, j) != 0.0) re[i * k + j] += R.re[b](i, j) * x[b];
        if (R.im[b](i, j) != 0.0) im[i * k + j] += R.im[b](i, j) * x[b];
      }
  return {re, im};
}

// tr(H^j) for H = -iX, via the realification [[Xim, Xre], [-Xre, Xim]] of H.
template <class T>
T trace_power(const MatrixRealization& R, std::span<const T> x, std::size_t k, int j) {
  const auto [re, im] = block(R, x, k);
  const std::size_t m = 2 * k;
  std::vector<T> H(m * m);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < k; ++c) {
      H[r * m + c] = im[r * k + c];
      H[r * m + k + c] = re[r * k + c];
      H[(k + r) * m + c] = -re[r * k + c];
      H[(k + r) * m + k + c] = im[r * k + c];
    }
  std::vector<T> P = H;
  for (int i = 1; i < j; ++i) P = matmul(P, H, m);
  T tr(0.0);
  for (std::size_t i = 0; i < m; ++i) tr += P[i * m + i];
  return 0.5 * tr;
}

template <class T>
T pfaffian(const std::vector<T>& A, std::size_t n, const std::vector<std::size_t>& idx) {
  if (idx.empty()) return T(1.0);
  const std::size_t i0 = idx[0];
  T s(0.0);
  for (std::size_t m = 1; m < idx.size(); ++m) {
    std::vector<std::size_t> rest;
    for (std::size_t t = 1; t < idx.size(); ++t)
      if (t != m) rest.push_back(idx[t]);
    const T term = A[i0 * n + idx[m]] * pfaffian(A, n, rest);
    s += (m % 2 == 1) ? term : -term;
  }
  return s;
}

bool is_complex(const MatrixRealization& R) {
  for (const auto& m : R.im)
    if (m.cwiseAbs().maxCoeff() > 0.0) return true;
  return false;
}

FirstIntegral trace_invariant(const MatrixRealization& R, std::size_t k, int j, const std::string& suffix) {
  // j = 2 is normalized to the pairing <x, x> = -tr(X^2)/2 = tr(H^2)/2.
  const double scale = j == 2 ? 0.5 : 1.0;
  const std::string name = (j == 2 ? std::string("<x,x>") : "tr(H^" + std::to_string(j) + ")") + suffix;
  SmoothFunction f = SmoothFunction::exact(R.re.size(), [R, k, j, scale](auto x) {
    using T = typename decltype(x)::value_type;
    return scale * trace_power<T>(R, x, k, j);
  });
  return {name, f, j, Smoothness::analytic};
}

FirstIntegral pfaffian_invariant(const MatrixRealization& R, std::size_t k, const std::string& suffix) {
  SmoothFunction f = SmoothFunction::exact(R.re.size(), [R, k](auto x) {
    using T = typename decltype(x)::value_type;
    const auto [re, im] = block(R, x, k);
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    return pfaffian<T>(re, k, idx);
  });
  return {"pf" + suffix, f, static_cast<int>(k / 2), Smoothness::analytic};
}

LieAlgebraModel finalize(std::string name, std::size_t n, std::vector<Eigen::MatrixXcd> basis) {
  LieAlgebraModel g;
  g.name = std::move(name);
  g.dim = basis.size();
  const std::size_t d = g.dim;
  g.realization.n = n;
  for (const auto& b : basis) {
    g.realization.re.push_back(b.real());
    g.realization.im.push_back(b.imag());
  }
  auto form = [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return -0.5 * (a * b).trace().real(); };
  g.pairing.resize(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) g.pairing(i, j) = form(basis[i], basis[j]);
  g.pairing_inv = g.pairing.inverse();
  g.c.assign(d * d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const Eigen::MatrixXcd C = basis[i] * basis[j] - basis[j] * basis[i];
      Eigen::VectorXd rhs(d);
      for (std::size_t l = 0; l < d; ++l) rhs[l] = form(basis[l], C);
      const Eigen::VectorXd coef = g.pairing_inv * rhs;
      for (std::size_t k = 0; k < d; ++k) g.c[(i * d + j) * d + k] = std::abs(coef[k]) < 1e-15 ? 0.0 : coef[k];
    }
  return g;
}

Eigen::MatrixXcd elementary(std::size_t n, std::size_t r, std::size_t c, std::complex<double> v_rc,
                            std::complex<double> v_cr) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  m(r, c) = v_rc;
  if (r != c) m(c, r) = v_cr;
  return m;
}

}  // namespace

Eigen::MatrixXcd MatrixRealization::matrix(const Eigen::VectorXd& x) const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t b = 0; b < re.size(); ++b) {
    m.real() += x[b] * re[b];
    m.imag() += x[b] * im[b];
  }
  return m;
}

std::vector<FirstIntegral> block_invariants(const LieAlgebraModel& g, std::size_t k, bool traceless) {
  const MatrixRealization& R = g.realization;
  if (R.empty()) throw PreconditionError("block_invariants: algebra has no matrix realization");
  if (k == 0 || k > R.n) throw std::invalid_argument("block_invariants: bad block size");
  const std::string suffix = k == R.n ? "" : "|" + std::to_string(k);
  std::vector<FirstIntegral> out;
  if (!is_complex(R)) {
    for (std::size_t j = 1; 2 * j + 1 <= k; ++j) out.push_back(trace_invariant(R, k, static_cast<int>(2 * j), suffix));
    if (k % 2 == 0) out.push_back(pfaffian_invariant(R, k, suffix));
  } else {
    for (std::size_t j = traceless ? 2 : 1; j <= k; ++j) out.push_back(trace_invariant(R, k, static_cast<int>(j), suffix));
  }
  return out;
}

LieAlgebraModel so_algebra(std::size_t n) {
  if (n < 2) throw ParameterError("so(n): need n >= 2");
  std::vector<Eigen::MatrixXcd> basis;
  if (n == 3) {
    // e_1 = E_32, e_2 = E_13, e_3 = E_21, so that [e_i, e_j] = eps_ijk e_k.
    for (auto [r, c] : {std::pair{2, 1}, {0, 2}, {1, 0}}) basis.push_back(elementary(3, r, c, 1.0, -1.0));
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) basis.push_back(elementary(n, i, j, 1.0, -1.0));
  }
  LieAlgebraModel g = finalize("so(" + std::to_string(n) + ")", n, std::move(basis));
  g.invariants = block_invariants(g, n);
  g.rank = n / 2;
  return g;
}

namespace {
std::vector<Eigen::MatrixXcd> unitary_offdiagonal(std::size_t n) {
  const std::complex<double> I(0.0, 1.0);
  std::vector<Eigen::MatrixXcd> basis;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      basis.push_back(elementary(n, i, j, 1.0, -1.0));
      basis.push_back(elementary(n, i, j, I, I));
    }
  return basis;
}
}  // namespace

LieAlgebraModel u_algebra(std::size_t n) {
  if (n < 1) throw ParameterError("u(n): need n >= 1");
  const std::complex<double> I(0.0, 1.0);
  auto basis = unitary_offdiagonal(n);
  for (std::size_t k = 0; k < n; ++k) basis.push_back(elementary(n, k, k, I, 0.0));
  LieAlgebraModel g = finalize("u(" + std::to_string(n) + ")", n, std::move(basis));
  g.invariants = block_invariants(g, n);
  g.rank = n;
  return g;
}

LieAlgebraModel su_algebra(std::size_t n) {
  if (n < 2) throw ParameterError("su(n): need n >= 2");
  const std::complex<double> I(0.0, 1.0);
  auto basis = unitary_offdiagonal(n);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    m(k, k) = I;
    m(k + 1, k + 1) = -I;
    basis.push_back(m);
  }
  LieAlgebraModel g = finalize("su(" + std::to_string(n) + ")", n, std::move(basis));
  g.invariants = block_invariants(g, n, true);
  g.rank = n - 1;
  return g;
}

LieAlgebraModel direct_sum(const LieAlgebraModel& a, const LieAlgebraModel& b) {
  LieAlgebraModel g;
  g.name = a.name + "+" + b.name;
  const std::size_t da = a.dim, db = b.dim, d = da + db;
  g.dim = d;
  g.c.assign(d * d * d, 0.0);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j)
      for (std::size_t k = 0; k < da; ++k) g.c[(i * d + j) * d + k] = a.structure(i, j, k);
  for (std::size_t i = 0; i < db; ++i)
    for (std::size_t j = 0; j < db; ++j)
      for (std::size_t k = 0; k < db; ++k) g.c[((da + i) * d + da + j) * d + da + k] = b.structure(i, j, k);
  g.pairing = Eigen::MatrixXd::Zero(d, d);
  g.pairing.topLeftCorner(da, da) = a.pairing;
  g.pairing.bottomRightCorner(db, db) = b.pairing;
  g.pairing_inv = g.pairing.inverse();
  if (!a.realization.empty() && !b.realization.empty()) {
    const std::size_t na = a.realization.n, nb = b.realization.n;
    g.realization.n = na + nb;
    auto pad = [&](const Eigen::MatrixXd& m, bool first) {
      Eigen::MatrixXd r = Eigen::MatrixXd::Zero(na + nb, na + nb);
      if (first) r.topLeftCorner(na, na) = m;
      else r.bottomRightCorner(nb, nb) = m;
      return r;
    };
    for (std::size_t i = 0; i < da; ++i) {
      g.realization.re.push_back(pad(a.realization.re[i], true));
      g.realization.im.push_back(pad(a.realization.im[i], true));
    }
    for (std::size_t i = 0; i < db; ++i) {
      g.realization.re.push_back(pad(b.realization.re[i], false));
      g.realization.im.push_back(pad(b.realization.im[i], false));
    }
  }
  auto lift = [d](const FirstIntegral& f, std::size_t offset, std::size_t len, const std::string& tag) {
    SmoothFunction fn = SmoothFunction::exact(d, [inner = f.fn, offset, len](auto x) {
      using T = typename decltype(x)::value_type;
      return inner.template eval<T>(x.subspan(offset, len));
    });
    return FirstIntegral{f.name + tag, fn, f.degree, f.smoothness};
  };
  for (const auto& f : a.invariants) g.invariants.push_back(lift(f, 0, da, "[1]"));
  for (const auto& f : b.invariants) g.invariants.push_back(lift(f, da, db, "[2]"));
  g.rank = a.rank + b.rank;
  return g;
}

LieAlgebraModel lie_algebra(const std::string& name) {
  const auto plus = name.find('+');
  if (plus != std::string::npos) return direct_sum(lie_algebra(name.substr(0, plus)), lie_algebra(name.substr(plus + 1)));
  static const std::regex re(R"(\s*(so|su|u)\((\d+)\)\s*)");
  std::smatch m;
  if (!std::regex_match(name, m, re)) throw ParameterError("unknown algebra '" + name + "'");
  const std::size_t n = std::stoul(m[2]);
  if (m[1] == "so") return so_algebra(n);
  if (m[1] == "su") return su_algebra(n);
  return u_algebra(n);
}

Eigen::VectorXd LieAlgebraModel::bracket(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    if (u[i] == 0.0) continue;
    for (std::size_t j = 0; j < dim; ++j) {
      const double uv = u[i] * v[j];
      if (uv == 0.0) continue;
      for (std::size_t k = 0; k < dim; ++k) r[k] += uv * structure(i, j, k);
    }
  }
  return r;
}

Eigen::MatrixXd LieAlgebraModel::right_ad(const Eigen::VectorXd& v) const {
  Eigen::MatrixXd m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m.col(i) = bracket(Eigen::VectorXd::Unit(dim, i), v);
  return m;
}

Eigen::MatrixXd LieAlgebraModel::form(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd px = pairing * x;
  Eigen::MatrixXd M(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) s += structure(i, j, k) * px[k];
      M(i, j) = s;
    }
  return M;
}

Eigen::MatrixXd LieAlgebraModel::lie_poisson_tensor(const Eigen::VectorXd& x) const {
  return pairing_inv * form(x) * pairing_inv;
}

Eigen::VectorXd LieAlgebraModel::gradient(const SmoothFunction& f, const Eigen::VectorXd& x) const {
  return pairing_inv * f.gradient(x);
}

Eigen::MatrixXd LieAlgebraModel::orbit_tangent_basis(const Eigen::VectorXd& x) const {
  const Eigen::MatrixXd T = right_ad(x);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(T, Eigen::ComputeFullU);
  return svd.matrixU().leftCols(numerical_rank(T));
}

double LieAlgebraModel::jacobi_residual() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      for (std::size_t k = 0; k < dim; ++k) {
        const Eigen::VectorXd a = Eigen::VectorXd::Unit(dim, i), b = Eigen::VectorXd::Unit(dim, j),
                              c3 = Eigen::VectorXd::Unit(dim, k);
        const Eigen::VectorXd r = bracket(a, bracket(b, c3)) + bracket(b, bracket(c3, a)) + bracket(c3, bracket(a, b));
        worst = std::max(worst, r.cwiseAbs().maxCoeff());
      }
  return worst;
}

double LieAlgebraModel::invariance_residual(std::size_t trials, std::uint64_t seed) const {
  const auto xs = sample(3 * trials, seed);
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto &a = xs[3 * t], &b = xs[3 * t + 1], &c3 = xs[3 * t + 2];
    worst = std::max(worst, std::abs(inner(bracket(a, b), c3) + inner(b, bracket(a, c3))));
  }
  return worst;
}

std::vector<Eigen::VectorXd> LieAlgebraModel::sample(std::size_t count, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<Eigen::VectorXd> out;
  for (std::size_t i = 0; i < count; ++i) {
    Eigen::VectorXd x(dim);
    for (auto& v : x) v = nd(rng);
    out.push_back(x);
  }
  return out;
}

double lie_poisson_bracket(const SmoothFunction& f, const SmoothFunction& g, const Eigen::VectorXd& x,
                           const LieAlgebraModel& algebra) {
  const Eigen::MatrixXd pi = algebra.lie_poisson_tensor(x);
  const Eigen::VectorXd df = f.gradient(x), dg = g.gradient(x);
  return 0.5 * (df.dot(pi * dg) - dg.dot(pi * df));
}

namespace {
std::function<Eigen::VectorXd(std::mt19937_64&)> gaussian_sampler(std::size_t dim) {
  return [dim](std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::VectorXd x(dim);
    for (auto& v : x) v = nd(rng);
    return x;
  };
}
}  // namespace

PhaseSpace lie_poisson_space(const LieAlgebraModel& algebra) {
  return poisson_space(algebra.name, algebra.dim, algebra.rank,
                       [algebra](const Eigen::VectorXd& x) { return algebra.lie_poisson_tensor(x); },
                       gaussian_sampler(algebra.dim));
}

PhaseSpace orbit_space(const LieAlgebraModel& algebra) {
  PhaseSpace s = lie_poisson_space(algebra);
  s.name = algebra.name + " orbits";
  s.manifold_dim = algebra.dim - algebra.rank;
  s.corank = 0;
  s.tangent_basis = [algebra](const Eigen::VectorXd& x) { return algebra.orbit_tangent_basis(x); };
  return s;
}

}  // namespace geolab
