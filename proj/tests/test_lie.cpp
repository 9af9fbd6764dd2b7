#include <gtest/gtest.h>

#include <cmath>

#include "geolab/core/errors.hpp"
#include "geolab/core/linalg.hpp"
#include "geolab/lie/lie.hpp"
#include "support.hpp"

using namespace geolab;
using geolab::testing::Gen;

namespace {

const char* kAlgebras[] = {"so(3)", "so(4)", "so(5)", "u(3)", "su(3)", "so(3)+so(3)"};

Eigen::MatrixXcd element(const LieAlgebraModel& g, const Eigen::VectorXd& x) { return g.realization.matrix(x); }

double trace_pairing(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return -0.5 * (a * b).trace().real(); }

/// Lie-Poisson bracket through matrix commutators of the realization; never
/// touches the structure constants.
double matrix_bracket(const LieAlgebraModel& g, const SmoothFunction& f, const SmoothFunction& h,
                      const Eigen::VectorXd& x) {
  const Eigen::MatrixXcd X = element(g, x);
  const Eigen::MatrixXcd F = element(g, g.pairing_inv * f.gradient(x));
  const Eigen::MatrixXcd H = element(g, g.pairing_inv * h.gradient(x));
  return trace_pairing(X, F * H - H * F);
}

/// dim of {xi : [xi, x] = 0}, from commutators in the realization.
int annihilator_dim(const LieAlgebraModel& g, const Eigen::VectorXd& x) {
  const Eigen::MatrixXcd X = element(g, x);
  const auto n = static_cast<Eigen::Index>(g.realization.n);
  Eigen::MatrixXd A(2 * n * n, static_cast<Eigen::Index>(g.dim));
  for (std::size_t i = 0; i < g.dim; ++i) {
    const Eigen::MatrixXcd B = element(g, Eigen::VectorXd::Unit(static_cast<Eigen::Index>(g.dim), static_cast<Eigen::Index>(i)));
    const Eigen::MatrixXcd C = B * X - X * B;
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) {
        A(r * n + c, static_cast<Eigen::Index>(i)) = C(r, c).real();
        A(n * n + r * n + c, static_cast<Eigen::Index>(i)) = C(r, c).imag();
      }
  }
  return static_cast<int>(g.dim) - numerical_rank(A);
}

std::vector<Eigen::VectorXd> gaussian(std::size_t dim, std::size_t count, std::uint64_t seed) {
  Gen gen(seed);
  std::vector<Eigen::VectorXd> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(gen.vector(static_cast<Eigen::Index>(dim)));
  return out;
}

Eigen::MatrixXd coords(std::initializer_list<Eigen::VectorXd> cols) {
  Eigen::MatrixXd m(cols.begin()->size(), static_cast<Eigen::Index>(cols.size()));
  Eigen::Index j = 0;
  for (const auto& c : cols) m.col(j++) = c;
  return m;
}

Eigen::VectorXd e(std::size_t n, std::size_t i) {
  return Eigen::VectorXd::Unit(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(i));
}

TensorField lie_tensor(const LieAlgebraModel& g) {
  return [g](const Eigen::VectorXd& x) { return g.lie_poisson_tensor(x); };
}

ReductiveDecomposition so3_so2() { return decompose(so_algebra(3), e(3, 2), true); }

/// so(2) spanned by E_01 inside so(4).
ReductiveDecomposition so4_so2() { return decompose(so_algebra(4), e(6, 0)); }

}  // namespace

TEST(Algebra, StructureConstantsMatchCommutators) {
  for (const char* name : kAlgebras) {
    auto g = lie_algebra(name);
    Gen gen(1);
    for (int t = 0; t < 10; ++t) {
      const Eigen::VectorXd u = gen.vector(static_cast<Eigen::Index>(g.dim));
      const Eigen::VectorXd v = gen.vector(static_cast<Eigen::Index>(g.dim));
      const Eigen::MatrixXcd U = element(g, u), V = element(g, v);
      const Eigen::MatrixXcd diff = element(g, g.bracket(u, v)) - (U * V - V * U);
      EXPECT_LE(diff.cwiseAbs().maxCoeff(), 1e-12) << name;
    }
  }
}

// Property: Jacobi exact for the library-built algebras, invariance of the pairing.
TEST(Algebra, JacobiAndInvariance) {
  for (const char* name : kAlgebras) {
    auto g = lie_algebra(name);
    if (std::string(name).find('+') == std::string::npos)
      EXPECT_EQ(g.jacobi_residual(), 0.0) << name;
    else
      EXPECT_LE(g.jacobi_residual(), 1e-12) << name;
    EXPECT_LE(g.invariance_residual(20, 2), 1e-12) << name;
  }
}

TEST(Algebra, DimensionsAndRanks) {
  EXPECT_EQ(so_algebra(3).dim, 3u);
  EXPECT_EQ(so_algebra(4).rank, 2u);
  EXPECT_EQ(u_algebra(3).dim, 9u);
  EXPECT_EQ(u_algebra(3).invariants.size(), 3u);
  EXPECT_EQ(su_algebra(3).dim, 8u);
  EXPECT_EQ(lie_algebra("so(3)+so(3)").dim, 6u);
  EXPECT_THROW(lie_algebra("g2"), ParameterError);
  EXPECT_THROW(so_algebra(1), ParameterError);
}

// With {f, g}(x) = <x, [grad f, grad g]> and [e1, e2] = e3 we get {x1, x2} = x3.
TEST(LiePoisson, So3CoordinateSign) {
  auto g = so_algebra(3);
  auto x1 = SmoothFunction::coordinate(3, 0), x2 = SmoothFunction::coordinate(3, 1);
  for (const auto& x : gaussian(3, 10, 3)) {
    EXPECT_NEAR(lie_poisson_bracket(x1, x2, x, g), x[2], 1e-14);
    EXPECT_NEAR(lie_poisson_bracket(x1, x2, x, g), matrix_bracket(g, x1, x2, x), 1e-14);
  }
}

TEST(LiePoisson, MatchesCommutatorOracle) {
  for (const char* name : kAlgebras) {
    auto g = lie_algebra(name);
    Gen gen(4);
    for (const auto& x : g.sample(5, 4)) {
      const auto i = static_cast<std::size_t>(gen.integer(0, static_cast<int>(g.dim) - 1));
      const auto& p = g.invariants.back().fn;
      auto xi = SmoothFunction::coordinate(g.dim, i);
      auto q = SmoothFunction::compose({xi, p}, [](auto v) { return v[0] * v[1]; });
      for (const auto& [f, h] : {std::pair{xi, q}, std::pair{q, SmoothFunction::coordinate(g.dim, 0)}}) {
        const double want = matrix_bracket(g, f, h, x);
        EXPECT_LE(std::abs(lie_poisson_bracket(f, h, x, g) - want), 1e-10 * std::max(1.0, std::abs(want))) << name;
        EXPECT_EQ(lie_poisson_bracket(f, h, x, g), -lie_poisson_bracket(h, f, x, g)) << name;
      }
    }
  }
}

// Property: invariant generators are Casimirs.
TEST(LiePoisson, CasimirsBracketToZero) {
  for (const char* name : kAlgebras) {
    auto g = lie_algebra(name);
    for (const auto& x : g.sample(10, 5)) {
      const auto sq = SmoothFunction::compose({SmoothFunction::coordinate(g.dim, 0), SmoothFunction::coordinate(g.dim, 1)},
                                              [](auto v) { return v[0] * v[0] * v[1]; });
      for (const auto& p : g.invariants) {
        for (std::size_t i = 0; i < g.dim; ++i)
          EXPECT_LE(std::abs(lie_poisson_bracket(p.fn, SmoothFunction::coordinate(g.dim, i), x, g)), 1e-11) << name;
        EXPECT_LE(std::abs(lie_poisson_bracket(p.fn, sq, x, g)), 1e-11) << name;
      }
    }
  }
}

TEST(LiePoisson, So3NormIsCasimir) {
  auto g = so_algebra(3);
  ASSERT_EQ(g.invariants.size(), 1u);
  for (const auto& x : gaussian(3, 5, 6)) {
    EXPECT_NEAR(g.invariants[0].fn.value(x), x.squaredNorm(), 1e-13);
    for (std::size_t i = 0; i < 3; ++i)
      EXPECT_EQ(lie_poisson_bracket(g.invariants[0].fn, SmoothFunction::coordinate(3, i), x, g), 0.0);
  }
}

TEST(LiePoisson, U3TraceInvariantsCommute) {
  auto g = u_algebra(3);
  for (const auto& x : g.sample(20, 7))
    EXPECT_LE(std::abs(lie_poisson_bracket(g.invariants[1].fn, g.invariants[2].fn, x, g)), 1e-11);
}

TEST(ModifiedBracket, ZeroShiftVanishes) {
  auto g = so_algebra(4);
  auto b = a_bracket(g, Eigen::VectorXd::Zero(6));
  for (const auto& x : g.sample(5, 8))
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j)
        EXPECT_EQ(modified_bracket(b, SmoothFunction::coordinate(6, i), SmoothFunction::coordinate(6, j), x), 0.0);
}

// {x1, x2}_a = <a, [e2, e1]> = -<e3, e3> = -1 everywhere.
TEST(ModifiedBracket, So3ShiftIsConstant) {
  auto g = so_algebra(3);
  auto b = a_bracket(g, e(3, 2));
  auto x1 = SmoothFunction::coordinate(3, 0), x2 = SmoothFunction::coordinate(3, 1);
  for (const auto& x : gaussian(3, 10, 9)) {
    EXPECT_NEAR(modified_bracket(b, x1, x2, x), -1.0, 1e-15);
    EXPECT_EQ(modified_bracket(b, x2, x1, x), -modified_bracket(b, x1, x2, x));
  }
}

TEST(ModifiedBracket, ThetaKillsWW) {
  auto d = so3_so2();
  auto b = theta_bracket(d);
  const auto& g = d.algebra;
  auto w1 = projected_coordinate(g, d.v, 0), w2 = projected_coordinate(g, d.v, 1);
  auto l = projected_coordinate(g, d.h, 0);
  for (const auto& x : gaussian(3, 10, 10)) {
    EXPECT_EQ(modified_bracket(b, w1, w2, x), 0.0);
    EXPECT_NE(lie_poisson_bracket(w1, w2, x, g), 0.0);
    // [l, w] is untouched: same entry as the Lie-Poisson bracket up to the printed ordering.
    EXPECT_NEAR(std::abs(modified_bracket(b, l, w1, x)), std::abs(lie_poisson_bracket(l, w1, x, g)), 1e-14);
  }
  EXPECT_THROW(theta_bracket(so4_so2()), PreconditionError);
}

// Property: the Lie-Poisson tensor and the a- and theta-brackets are compatible.
TEST(ModifiedBracket, PencilCombinationsSatisfyJacobi) {
  Gen gen(11);
  for (const char* name : {"so(3)", "so(4)", "u(3)", "su(3)"}) {
    auto g = lie_algebra(name);
    auto lp = lie_tensor(g);
    auto ab = a_bracket(g, gen.vector(static_cast<Eigen::Index>(g.dim)));
    for (int t = 0; t < 5; ++t) {
      const double s = gen.uniform(-2, 2), r = gen.uniform(-2, 2);
      TensorField comb = [=](const Eigen::VectorXd& x) { return Eigen::MatrixXd(s * lp(x) + r * ab.tensor(x)); };
      EXPECT_LE(jacobi_tensor_residual(comb, gen.vector(static_cast<Eigen::Index>(g.dim))), 1e-10) << name;
    }
  }
  auto d = so3_so2();
  auto lp = lie_tensor(d.algebra);
  auto th = theta_bracket(d);
  for (int t = 0; t < 5; ++t) {
    const double s = gen.uniform(-2, 2), r = gen.uniform(-2, 2);
    TensorField comb = [=](const Eigen::VectorXd& x) { return Eigen::MatrixXd(s * lp(x) + r * th.tensor(x)); };
    EXPECT_LE(jacobi_tensor_residual(comb, gen.vector(3)), 1e-10);
  }
}

TEST(ArgumentShift, So3Coefficients) {
  auto g = so_algebra(3);
  auto fam = argument_shift_family(g, e(3, 2));
  ASSERT_EQ(fam.members.size(), 2u);
  EXPECT_EQ(fam.provenance, "argument_shift");
  for (const auto& x : gaussian(3, 10, 12)) {
    EXPECT_NEAR(fam.members[0].fn.value(x), x.squaredNorm(), 1e-12);
    EXPECT_NEAR(fam.members[1].fn.value(x), 2.0 * x[2], 1e-12);
    EXPECT_LE(std::abs(lie_poisson_bracket(fam.members[0].fn, fam.members[1].fn, x, g)), 1e-10);
  }
}

// Property: the members reassemble p(x + lambda a) once p(a) lambda^deg is added back.
TEST(ArgumentShift, ReassemblesShiftedInvariant) {
  Gen gen(13);
  for (const char* name : kAlgebras) {
    auto g = lie_algebra(name);
    const Eigen::VectorXd a = gen.vector(static_cast<Eigen::Index>(g.dim));
    auto fam = argument_shift_family(g, a);
    const Eigen::VectorXd x = gen.vector(static_cast<Eigen::Index>(g.dim));
    const double lambda = gen.uniform(-1.5, 1.5);
    std::size_t m = 0;
    for (const auto& p : g.invariants) {
      double sum = p.fn.value(a) * std::pow(lambda, p.degree);
      for (int k = 0; k < p.degree; ++k) sum += fam.members[m++].fn.value(x) * std::pow(lambda, k);
      const double want = p.fn.value(Eigen::VectorXd(x + lambda * a));
      EXPECT_LE(std::abs(sum - want), 1e-10 * std::max(1.0, std::abs(want))) << name << " " << p.name;
    }
    EXPECT_EQ(m, fam.members.size()) << name;
  }
}

// Property: shift families are involutive.
TEST(ArgumentShift, Involutive) {
  for (const char* name : {"so(3)", "so(4)", "u(3)", "su(3)", "so(3)+so(3)"}) {
    auto g = lie_algebra(name);
    auto fam = argument_shift_family(g, g.sample(1, 14)[0]);
    for (const auto& x : g.sample(20, 15))
      for (const auto& f : fam.members)
        for (const auto& h : fam.members) EXPECT_LE(std::abs(lie_poisson_bracket(f.fn, h.fn, x, g)), 1e-10) << name;
  }
}

TEST(ArgumentShift, DegreeCapAndPreconditions) {
  auto g = u_algebra(3);
  auto a = g.sample(1, 16)[0];
  EXPECT_EQ(argument_shift_family(g, a).members.size(), 6u);
  EXPECT_EQ(argument_shift_family(g, a, 0).members.size(), 3u);
  EXPECT_THROW(argument_shift_family(g, Eigen::VectorXd::Zero(9)), PreconditionError);
  auto j = argument_shift_family(g, a).to_json();
  EXPECT_EQ(j["provenance"], "argument_shift");
  EXPECT_EQ(j["members"], 6);
}

TEST(ArgumentShift, So4CompleteOnRegularOrbit) {
  auto g = so_algebra(4);
  auto fam = lie_family(argument_shift_family(g, g.sample(1, 17)[0]), g, true);
  EXPECT_EQ(fam.space.manifold_dim, 4u);
  auto rep = ddim_dind(fam, sample_states(fam.space, 20, 18));
  EXPECT_EQ(rep.ddim, 2);
  EXPECT_TRUE(rep.complete);
}

// Some sample sets contain a point where every restricted gradient is pure
// roundoff; that point must not register as a nondegenerate Gram block.
TEST(ArgumentShift, So4OrbitVerdictIsSeedStable) {
  auto g = so_algebra(4);
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 17ull, 20240601ull}) {
    auto fam = lie_family(argument_shift_family(g, g.sample(1, seed)[0]), g, true);
    for (std::uint64_t s : {18ull, 20240601ull}) {
      auto rep = ddim_dind(fam, sample_states(fam.space, 20, s));
      EXPECT_EQ(rep.ddim, 2) << seed << " " << s;
      EXPECT_EQ(rep.dind, 2) << seed << " " << s;
      EXPECT_TRUE(rep.complete) << seed << " " << s;
    }
  }
}

TEST(Pencil, ProportionalIsComplete) {
  auto g = so_algebra(4);
  auto lp = lie_tensor(g);
  TensorField twice = [lp](const Eigen::VectorXd& x) { return Eigen::MatrixXd(2.0 * lp(x)); };
  auto r = pencil_completeness_check(lp, twice, g.sample(1, 19)[0]);
  EXPECT_TRUE(r.complete);
  EXPECT_EQ(r.generic_rank, 4);
  EXPECT_TRUE(r.drops.empty());
}

TEST(Pencil, So3ShiftComplete) {
  auto g = so_algebra(3);
  auto r = pencil_completeness_check(lie_tensor(g), a_bracket(g, e(3, 2)).tensor, Eigen::Vector3d(0.3, -0.8, 1.1));
  EXPECT_TRUE(r.complete);
  EXPECT_EQ(r.generic_rank, 2);
  EXPECT_EQ(r.samples, 40u);
}

// x is built so that its self-dual half is 1.7 times that of a; the pencil drops
// rank at lambda = 1.7. The oracle scans the smallest singular value on a grid.
TEST(Pencil, ConstructedDropIsReported) {
  auto g = so_algebra(4);
  auto hodge = [&](const Eigen::VectorXd& v, int sign) {
    // Basis order E01, E02, E03, E12, E13, E23; * swaps 01<->23, 02<->13 (sign -), 03<->12.
    Eigen::VectorXd s(6);
    s << v[5], -v[4], v[3], v[2], -v[1], v[0];
    return Eigen::VectorXd(0.5 * (v + sign * s));
  };
  const Eigen::VectorXd a = g.sample(1, 20)[0];
  const Eigen::VectorXd x = 1.7 * hodge(a, 1) + hodge(g.sample(1, 21)[0], -1);
  auto lp = lie_tensor(g);
  auto ab = a_bracket(g, a);
  auto r = pencil_completeness_check(lp, ab.tensor, x);
  EXPECT_FALSE(r.complete);
  ASSERT_EQ(r.drops.size(), 1u);
  EXPECT_NEAR(r.drops[0].real(), 1.7, 1e-6);
  EXPECT_NEAR(r.drops[0].imag(), 0.0, 1e-6);

  double best = 1e300, best_lambda = 0.0;
  for (int k = 0; k <= 3000; ++k) {
    const double lambda = k * 1e-3;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(lp(x) + lambda * ab.tensor(x));
    const double s = svd.singularValues()[3] / svd.singularValues()[0];
    if (s < best) best = s, best_lambda = lambda;
  }
  EXPECT_NEAR(best_lambda, r.drops[0].real(), 1e-3);
  EXPECT_LE(best, 1e-10);
}

TEST(Pencil, SingularShiftDropsAtInfinity) {
  auto g = so_algebra(4);
  Eigen::VectorXd a(6);
  a << 1, 0, 0, 0, 0, 1;  // self-dual: its annihilator is 4-dimensional
  auto r = pencil_completeness_check(lie_tensor(g), a_bracket(g, a).tensor, g.sample(1, 22)[0]);
  EXPECT_FALSE(r.complete);
  EXPECT_TRUE(r.drop_at_infinity);
}

TEST(Pencil, NonGenericBasePoint) {
  auto g = so_algebra(3);
  EXPECT_THROW(pencil_completeness_check(lie_tensor(g), a_bracket(g, e(3, 2)).tensor, Eigen::Vector3d::Zero()),
               NonGenericPointError);
}

TEST(Decomposition, ValidatesStructure) {
  auto g = so_algebra(3);
  EXPECT_NO_THROW(so3_so2().validate());
  EXPECT_THROW(decompose(g, coords({e(3, 0), e(3, 1)})), PreconditionError);  // not a subalgebra
  EXPECT_THROW(decompose(g, coords({e(3, 0), e(3, 0)})), PreconditionError);
  auto d = so3_so2();
  EXPECT_EQ(d.dim_v(), 2u);
  const Eigen::MatrixXd P = d.v_projector();
  EXPECT_LE((P * P - P).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(RestrictedFamily, ShiftPrecondition) {
  auto d = so3_so2();
  PresetSpec bad;
  bad.kind = Preset::shift;
  bad.a = e(3, 0);
  EXPECT_THROW(restricted_invariant_family(d, bad), PreconditionError);
  PresetSpec good = bad;
  good.a = e(3, 2);
  auto fam = restricted_invariant_family(d, good);
  EXPECT_TRUE(fam.on_v);
  auto ff = v_family(fam, d);
  EXPECT_LE(commutation_residual(ff, sample_states(ff.space, 20, 23)).maxCoeff(), 1e-10);
}

TEST(RestrictedFamily, So3So2Complete) {
  auto d = so3_so2();
  PresetSpec ps;
  ps.kind = Preset::symmetric_pair;
  auto fam = restricted_invariant_family(d, ps);
  auto vs = gaussian(2, 20, 24);
  auto oc = completeness_on_v(d, fam, vs);
  for (const auto& v : vs) EXPECT_EQ(annihilator_dim(d.algebra, d.v * v), 1);
  EXPECT_EQ(oc.dim_ann_g, 1u);
  EXPECT_EQ(oc.orbit_dim, 2u);
  EXPECT_EQ(oc.required_ddim, 1u);
  EXPECT_EQ(oc.report.ddim, 1);
  EXPECT_TRUE(oc.complete);
  EXPECT_FALSE(oc.nongeneric_warning);
}

TEST(RestrictedFamily, AloffWallach) {
  auto d = aloff_wallach_decomposition(1, 2);
  EXPECT_EQ(d.dim_v(), 7u);
  PresetSpec ps;
  ps.kind = Preset::aloff_wallach;
  ps.k = 1;
  ps.l = 2;
  auto fam = restricted_invariant_family(d, ps);
  ASSERT_EQ(fam.members.size(), 4u);
  auto vs = gaussian(7, 20, 25);
  auto oc = completeness_on_v(d, fam, vs);
  EXPECT_LE(oc.max_residual, 1e-10);
  EXPECT_EQ(oc.orbit_dim, 6u);
  EXPECT_EQ(annihilator_dim(d.algebra, d.v * vs[0]), 2);
  EXPECT_EQ(oc.required_ddim, 4u);
  EXPECT_EQ(oc.report.ddim, 4);
  EXPECT_TRUE(oc.complete);
  EXPECT_THROW(aloff_wallach_decomposition(0, 0), ParameterError);
}

// For k = l the four functions still commute but one becomes dependent.
TEST(RestrictedFamily, AloffWallachEqualWeights) {
  auto d = aloff_wallach_decomposition(1, 1);
  PresetSpec ps;
  ps.kind = Preset::aloff_wallach;
  auto oc = completeness_on_v(d, restricted_invariant_family(d, ps), gaussian(7, 20, 26));
  EXPECT_LE(oc.max_residual, 1e-10);
  EXPECT_EQ(oc.report.ddim, 3);
  EXPECT_FALSE(oc.complete);
}

TEST(RestrictedFamily, U3Chain) {
  auto g = u_algebra(3);
  auto d = decompose(g, Eigen::MatrixXd(9, 0));
  PresetSpec ps;
  ps.kind = Preset::chain;
  ps.chain = {1, 2};
  auto fam = restricted_invariant_family(d, ps);
  EXPECT_EQ(fam.provenance, "chain");
  auto ff = v_family(fam, d);
  auto rep = ddim_dind(ff, sample_states(ff.space, 20, 27));
  EXPECT_LE(rep.residual_matrix.maxCoeff(), 1e-10);
  EXPECT_EQ(rep.ddim, (9 + 3) / 2);
  ps.chain = {2, 1};
  EXPECT_THROW(restricted_invariant_family(d, ps), PreconditionError);
}

TEST(RestrictedFamily, CasimirsOnlyIsIncomplete) {
  auto d = so4_so2();
  auto fam = casimir_family(d);
  auto oc = completeness_on_v(d, fam, gaussian(d.dim_v(), 20, 28));
  EXPECT_EQ(oc.dim_v, 5u);
  EXPECT_EQ(oc.required_ddim, 3u);
  EXPECT_EQ(oc.report.ddim, 2);
  EXPECT_FALSE(oc.complete);
}

// Property: verdicts do not depend on the orthonormal basis chosen for v.
TEST(RestrictedFamily, RotationInvariant) {
  Gen gen(29);
  struct Case {
    ReductiveDecomposition d;
    PresetSpec ps;
  };
  PresetSpec sp, aw;
  sp.kind = Preset::symmetric_pair;
  aw.kind = Preset::aloff_wallach;
  aw.l = 2;
  std::vector<Case> cases{{so3_so2(), sp}, {aloff_wallach_decomposition(1, 2), aw}};
  for (auto& c : cases) {
    auto base = completeness_on_v(c.d, restricted_invariant_family(c.d, c.ps), gaussian(c.d.dim_v(), 20, 30));
    for (int t = 0; t < 3; ++t) {
      auto r = c.d.rotated(gen.orthogonal(static_cast<Eigen::Index>(c.d.dim_v())));
      auto rot = completeness_on_v(r, restricted_invariant_family(r, c.ps), gaussian(r.dim_v(), 20, 31 + t));
      EXPECT_EQ(rot.complete, base.complete);
      EXPECT_EQ(rot.report.ddim, base.report.ddim);
    }
  }
  auto d = so4_so2();
  auto base = completeness_on_v(d, casimir_family(d), gaussian(5, 20, 32));
  auto r = d.rotated(gen.orthogonal(5));
  auto rot = completeness_on_v(r, casimir_family(r), gaussian(5, 20, 33));
  EXPECT_EQ(rot.complete, base.complete);
  EXPECT_EQ(rot.report.ddim, base.report.ddim);
}

TEST(SymmetricPair, So3So2Involutive) {
  auto d = so3_so2();
  auto spf = symmetric_pair_family(d, {{"l", projected_coordinate(d.algebra, d.h, 0), 1, Smoothness::analytic}});
  auto ff = lie_family(spf, d.algebra);
  EXPECT_LE(commutation_residual(ff, sample_states(ff.space, 20, 34)).maxCoeff(), 1e-10);
}

TEST(SymmetricPair, DiagonalSu2) {
  auto g = lie_algebra("so(3)+so(3)");
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(6, 3);
  for (Eigen::Index i = 0; i < 3; ++i) h(i, i) = h(i + 3, i) = 1.0;
  auto d = decompose(g, h, true);
  EXPECT_EQ(d.dim_v(), 3u);
  std::vector<SmoothFunction> l;
  for (std::size_t i = 0; i < 3; ++i) l.push_back(projected_coordinate(g, h, i));
  auto l2 = SmoothFunction::compose(l, [](auto v) { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; });
  auto spf = symmetric_pair_family(d, {{"|l|^2", l2, 2, Smoothness::analytic}, {"l3", l[2], 1, Smoothness::analytic}});
  auto ff = lie_family(spf, g);
  EXPECT_LE(commutation_residual(ff, sample_states(ff.space, 20, 35)).maxCoeff(), 1e-10);
  EXPECT_THROW(symmetric_pair_family(decompose(g, h), {}), PreconditionError);
}

TEST(SymmetricPair, UnitLambdaIsInvariant) {
  auto d = so3_so2();
  const auto& p = d.algebra.invariants[0].fn;
  auto m = symmetric_pair_member(d, p, 1.0);
  for (const auto& x : gaussian(3, 10, 36)) EXPECT_NEAR(m.value(x), p.value(x), 1e-13);
}
