#include <gtest/gtest.h>

#include <cmath>

#include "geolab/catalog/catalog.hpp"
#include "geolab/integrator/integrator.hpp"
#include "geolab/poisson/poisson.hpp"
#include "support.hpp"

using namespace geolab;
using geolab::testing::Gen;

namespace {

FirstIntegral named(std::string name, SmoothFunction fn) { return {std::move(name), std::move(fn), 2, Smoothness::analytic}; }

SmoothFunction product(const SmoothFunction& f, const SmoothFunction& g) {
  return SmoothFunction::compose({f, g}, [](auto v) { return v[0] * v[1]; });
}

/// so(3)* with {x_i, x_j} = eps_ijk x_k, written out directly.
PhaseSpace so3_dual() {
  return poisson_space(
      "so3*", 3, 1,
      [](const Eigen::VectorXd& x) {
        Eigen::Matrix3d pi;
        pi << 0, x[2], -x[1], -x[2], 0, x[0], x[1], -x[0], 0;
        return Eigen::MatrixXd(pi);
      },
      [](std::mt19937_64& rng) {
        std::normal_distribution<double> nd;
        return Eigen::VectorXd(Eigen::Vector3d(nd(rng), nd(rng), nd(rng)));
      });
}

}  // namespace

TEST(CanonicalBracket, CoordinateRelations) {
  CotangentState s{Eigen::Vector3d(0.3, -1.0, 2.0), Eigen::Vector3d(1.0, 0.5, -0.25)};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      auto xi = SmoothFunction::coordinate(6, i), pj = SmoothFunction::coordinate(6, 3 + j);
      EXPECT_EQ(canonical_bracket(xi, pj, s), i == j ? 1.0 : 0.0);
      EXPECT_EQ(canonical_bracket(xi, SmoothFunction::coordinate(6, j), s), 0.0);
    }
}

// Property: antisymmetry is exact and {f, f} = 0 exactly.
TEST(CanonicalBracket, ExactAntisymmetry) {
  for (const char* key : {"liouville", "ellipsoid", "neumann", "sol"}) {
    auto m = build_model(key);
    auto fam = model_family(m);
    Gen gen(1);
    for (const auto& y : sample_states(fam.space, 20, gen.seed())) {
      for (const auto& f : fam.members) {
        EXPECT_EQ(bracket(fam.space, f.fn, f.fn, y), 0.0) << key;
        for (const auto& g : fam.members)
          EXPECT_EQ(bracket(fam.space, f.fn, g.fn, y), -bracket(fam.space, g.fn, f.fn, y)) << key;
      }
      EXPECT_LE(std::abs(bracket(fam.space, m.hamiltonian, m.hamiltonian, y)), 1e-14);
    }
  }
}

TEST(CanonicalBracket, LiouvilleFiniteDifferenceCrossCheck) {
  auto m = build_model("liouville");
  auto F = m.integral("F").fn;
  auto F_fd = SmoothFunction::numeric(4, [F](std::span<const double> y) { return F.value(y); });
  auto H_fd = SmoothFunction::numeric(4, [m](std::span<const double> y) { return m.hamiltonian.value(y); });
  Gen gen(2);
  for (int k = 0; k < 20; ++k) {
    auto s = m.sample(gen.engine());
    EXPECT_LE(std::abs(canonical_bracket(m.hamiltonian, F, s)), 1e-10);
    EXPECT_LE(std::abs(canonical_bracket(H_fd, F_fd, s)), 1e-8);
  }
}

// Property: Leibniz rule on products of catalog integrals.
TEST(Bracket, LeibnizRule) {
  for (const char* key : {"liouville", "ellipsoid", "sphere"}) {
    auto m = build_model(key);
    auto fam = model_family(m);
    const auto& f = fam.members[0].fn;
    const auto& g = fam.members[1].fn;
    const auto& h = m.hamiltonian;
    auto fg = product(f, g);
    for (const auto& y : sample_states(fam.space, 20, 3)) {
      const double lhs = bracket(fam.space, fg, h, y);
      const double rhs = f.value(y) * bracket(fam.space, g, h, y) + g.value(y) * bracket(fam.space, f, h, y);
      EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::max(1.0, std::abs(rhs))) << key;
    }
  }
}

// Property: Jacobi identity on triples of catalog integrals. Inner brackets
// are differentiated with Richardson-extrapolated differences at a wide step;
// the library FD stencil and narrow steps leave ~1e-7 roundoff through the
// Dirac denominator on the ellipsoid.
TEST(Bracket, JacobiIdentity) {
  for (const char* key : {"liouville", "sol", "sphere", "ellipsoid"}) {
    auto m = build_model(key);
    auto fam = model_family(m);
    std::vector<SmoothFunction> fs;
    for (const auto& f : fam.members) fs.push_back(f.fn);
    fs.push_back(product(fam.members[0].fn, fam.members[0].fn));
    const auto& sp = fam.space;
    auto nested = [&](std::size_t a, std::size_t b, std::size_t c, const Eigen::VectorXd& y) {
      auto inner = [&](const Eigen::VectorXd& z) { return bracket(sp, fs[b], fs[c], z); };
      return sp.bracket(y, fs[a].gradient(y), geolab::testing::richardson_gradient(inner, y, 1e-2));
    };
    for (const auto& y : sample_states(sp, 5, 4)) {
      for (std::size_t a = 0; a < fs.size(); ++a)
        for (std::size_t b = a + 1; b < fs.size(); ++b)
          for (std::size_t c = b + 1; c < fs.size(); ++c) {
            const double j = nested(a, b, c, y) + nested(b, c, a, y) + nested(c, a, b, y);
            EXPECT_LE(std::abs(j), 1e-8) << key << " " << a << b << c;
          }
    }
  }
}

TEST(CommutationResidual, MoserFamilyCommutes) {
  auto m = build_model("ellipsoid");
  auto fam = model_family(m);
  auto r = commutation_residual(fam, sample_states(fam.space, 20, 5));
  EXPECT_LE(r.maxCoeff(), 1e-9);
  EXPECT_EQ(r.diagonal(), Eigen::VectorXd::Zero(3));
  EXPECT_EQ(r, r.transpose());
}

TEST(CommutationResidual, SphereLinearIntegralsDoNotCommute) {
  auto m = build_model("sphere");
  auto fam = model_family(m, {"f1", "f2", "f3"});
  auto states = sample_states(fam.space, 20, 6);
  auto r = commutation_residual(fam, states);
  double scale = 0.0;
  for (const auto& y : states)
    for (const auto& f : fam.members) scale = std::max(scale, std::abs(f.fn.value(y)));
  EXPECT_GE(r.maxCoeff(), 0.5 * scale);
  EXPECT_LE(r.maxCoeff(), scale + 1e-12);
}

TEST(CommutationResidual, TorusMomentaExactlyZero) {
  auto m = flat_torus();
  auto fam = model_family(m);
  EXPECT_EQ(commutation_residual(fam, sample_states(fam.space, 20, 7)).maxCoeff(), 0.0);
}

TEST(IndependenceRank, LinearDependence) {
  auto p1 = SmoothFunction::coordinate(4, 2), p2 = SmoothFunction::coordinate(4, 3);
  auto sum = SmoothFunction::compose({p1, p2}, [](auto v) { return v[0] + v[1]; });
  FunctionFamily fam{"dependent", {named("p1", p1), named("p2", p2), named("p1+p2", sum)}, canonical_space(2)};
  EXPECT_EQ(independence_rank(fam, sample_states(fam.space, 10, 8)), 2);
}

TEST(IndependenceRank, MoserAndSphere) {
  auto moser = model_family(build_model("ellipsoid"));
  EXPECT_EQ(independence_rank(moser, sample_states(moser.space, 50, 9)), 2);
  auto sphere = model_family(build_model("sphere"));
  EXPECT_EQ(independence_rank(sphere, sample_states(sphere.space, 20, 9)), 3);
}

// Property: rank never exceeds family size or phase dimension.
TEST(IndependenceRank, Bounded) {
  for (const auto& e : list_catalog()) {
    auto fam = model_family(build_model(e.key));
    const int r = independence_rank(fam, sample_states(fam.space, 10, 10));
    EXPECT_LE(r, static_cast<int>(fam.members.size())) << e.key;
    EXPECT_LE(r, static_cast<int>(fam.space.manifold_dim)) << e.key;
    EXPECT_GE(r, 1) << e.key;
  }
}

TEST(ConservationDrift, TorusExactEllipsoidSmall) {
  {
    auto m = flat_torus();
    std::mt19937_64 rng(11);
    StepConfig c;
    c.dt = 1e-2;
    auto d = conservation_drift(m, integrate(m, m.sample(rng), c, 10.0));
    for (double x : d) EXPECT_EQ(x, 0.0);
  }
  {
    auto m = build_model("ellipsoid");
    std::mt19937_64 rng(11);
    StepConfig c;
    c.dt = 1e-3;
    auto d = conservation_drift(m, integrate(m, m.sample(rng), c, 100.0, 100));
    for (double x : d) EXPECT_LE(x, 1e-6);
  }
}

TEST(ConservationDrift, WrongIntegralDriftsOrderOne) {
  auto m = build_model("ellipsoid");
  m.integrals.push_back(named("p1", SmoothFunction::coordinate(6, 3)));
  std::mt19937_64 rng(12);
  auto s = m.sample(rng);
  s.p /= std::sqrt(2.0 * hamiltonian_eval(m, s));
  StepConfig c;
  c.dt = 1e-3;
  auto d = conservation_drift(m, integrate(m, s, c, 20.0, 10));
  EXPECT_LE(d[0], 1e-6);
  EXPECT_GE(d.back(), 0.1);
}

TEST(DdimDind, TorusMomenta) {
  auto fam = model_family(flat_torus());
  auto r = ddim_dind(fam, sample_states(fam.space, 20, 13));
  EXPECT_EQ(r.ddim, 2);
  EXPECT_EQ(r.dind, 2);
  EXPECT_EQ(r.phase_dim, 4u);
  EXPECT_TRUE(r.complete);
}

TEST(DdimDind, So3LinearFunctions) {
  FunctionFamily fam{"coordinates",
                     {named("x1", SmoothFunction::coordinate(3, 0)), named("x2", SmoothFunction::coordinate(3, 1)),
                      named("x3", SmoothFunction::coordinate(3, 2))},
                     so3_dual()};
  auto r = ddim_dind(fam, sample_states(fam.space, 20, 14));
  EXPECT_EQ(r.ddim, 3);
  EXPECT_EQ(r.dind, 1);
  EXPECT_TRUE(r.complete);
}

TEST(DdimDind, SphereNonCommutativeIntegrability) {
  auto fam = model_family(build_model("sphere"));
  auto r = ddim_dind(fam, sample_states(fam.space, 20, 15));
  EXPECT_EQ(r.ddim, 3);
  EXPECT_EQ(r.dind, 1);
  EXPECT_EQ(r.phase_dim, 4u);
  EXPECT_TRUE(r.complete);
  auto j = r.to_json();
  for (const char* k : {"family", "states", "residual_matrix", "rank", "ddim", "dind", "complete", "tolerances", "seed"})
    EXPECT_TRUE(j.contains(k)) << k;
}

TEST(DdimDind, IncompleteFamily) {
  auto fam = model_family(build_model("ellipsoid"), {"F1"});
  auto r = ddim_dind(fam, sample_states(fam.space, 20, 16));
  EXPECT_EQ(r.ddim, 1);
  EXPECT_FALSE(r.complete);
}

// Property: invertible recombinations f_j -> f_j + f_i^3 leave ddim and dind alone.
TEST(DdimDind, InvariantUnderRecombination) {
  for (const char* key : {"sphere", "ellipsoid", "brailov"}) {
    auto fam = model_family(build_model(key));
    auto states = sample_states(fam.space, 20, 17);
    auto base = ddim_dind(fam, states);
    auto cubic = [](const SmoothFunction& a, const SmoothFunction& b) {
      return SmoothFunction::compose({a, b}, [](auto v) { return v[1] + v[0] * v[0] * v[0]; });
    };
    for (std::size_t k = 0; k < 3; ++k) {
      FunctionFamily alt = fam;
      const std::size_t i = k % fam.members.size(), j = (k + 1) % fam.members.size();
      alt.members[j].fn = cubic(fam.members[i].fn, fam.members[j].fn);
      auto r = ddim_dind(alt, states);
      EXPECT_EQ(r.ddim, base.ddim) << key << " recombination " << k;
      EXPECT_EQ(r.dind, base.dind) << key << " recombination " << k;
    }
  }
}

TEST(PhaseSpace, DiracBracketIsTangent) {
  auto m = build_model("ellipsoid");
  auto sp = model_phase_space(m);
  EXPECT_EQ(sp.coord_dim, 6u);
  EXPECT_EQ(sp.manifold_dim, 4u);
  for (const auto& y : sample_states(sp, 5, 18)) {
    Eigen::MatrixXd P = sp.poisson_matrix(y);
    EXPECT_EQ(P.rows(), 4);
    EXPECT_LE((P + P.transpose()).norm(), 1e-14);
    EXPECT_GT(std::abs(P.determinant()), 1e-8);
  }
}
