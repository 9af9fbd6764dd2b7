#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "geolab/catalog/catalog.hpp"
#include "geolab/core/errors.hpp"
#include "geolab/integrator/integrator.hpp"
#include "support.hpp"

using namespace geolab;
using geolab::testing::Gen;

namespace {

CotangentState state(Eigen::VectorXd x, Eigen::VectorXd p) {
  CotangentState s;
  s.x = std::move(x);
  s.p = std::move(p);
  return s;
}

/// Rescales p so that H = 1/2; geodesics at other speeds are the same curves.
CotangentState unit_speed(const GeodesicModel& m, CotangentState s) {
  s.p /= std::sqrt(2.0 * hamiltonian_eval(m, s));
  return s;
}

double distance(const CotangentState& a, const CotangentState& b) {
  return std::max((a.x - b.x).lpNorm<Eigen::Infinity>(), (a.p - b.p).lpNorm<Eigen::Infinity>());
}

}  // namespace

TEST(StepConfig, RejectsBadValues) {
  StepConfig c;
  c.dt = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.dt = 1e-3;
  c.newton_tol = -1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.newton_tol = 1e-12;
  EXPECT_NO_THROW(c.validate());
}

TEST(ImplicitMidpoint, FlatTorusStraightLine) {
  auto m = flat_torus();
  StepConfig c;
  c.dt = 0.1;
  auto s = implicit_midpoint_step(m, state(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 2)), c);
  EXPECT_NEAR(s.x[0], 0.1, 1e-15);
  EXPECT_NEAR(s.x[1], 0.2, 1e-15);
  EXPECT_EQ(s.p, Eigen::Vector2d(1, 2));
}

TEST(ImplicitMidpoint, RejectsEmbeddedModel) {
  auto m = build_model("sphere");
  std::mt19937_64 rng(1);
  EXPECT_THROW(implicit_midpoint_step(m, m.sample(rng), StepConfig{}), std::invalid_argument);
}

// Property: forward then backward step is the identity, for both steppers.
TEST(Steppers, Reversible) {
  for (const char* key : {"liouville", "revolution", "sol", "ellipsoid", "neumann", "kovalevskaya"}) {
    auto m = build_model(key);
    Gen gen(11);
    for (int k = 0; k < 10; ++k) {
      auto s = m.sample(gen.engine());
      StepConfig fwd;
      fwd.dt = 0.01;
      StepConfig back = fwd;
      back.dt = -fwd.dt;
      auto t = advance(m, advance(m, s, fwd), back);
      EXPECT_LE(distance(t, s), 1e-10) << key;
    }
  }
}

// One-step energy error of a second-order symmetric method is O(dt^3).
TEST(ImplicitMidpoint, LocalEnergyErrorIsThirdOrder) {
  for (const char* key : {"liouville", "revolution", "sol"}) {
    auto m = build_model(key);
    Gen gen(12);
    for (int k = 0; k < 5; ++k) {
      auto s = unit_speed(m, m.sample(gen.engine()));
      const double h0 = hamiltonian_eval(m, s);
      StepConfig c;
      c.dt = 0.2;
      const double e1 = std::abs(hamiltonian_eval(m, implicit_midpoint_step(m, s, c)) - h0);
      c.dt = 0.1;
      const double e2 = std::abs(hamiltonian_eval(m, implicit_midpoint_step(m, s, c)) - h0);
      if (e1 < 1e-13) continue;  // locally quadratic H, nothing to measure
      EXPECT_GE(e1 / e2, 7.0) << key << " sample " << k << " e1 " << e1 << " e2 " << e2;
    }
  }
}

TEST(ImplicitMidpoint, NewtonFailureCarriesHistory) {
  auto m = build_model("liouville");
  std::mt19937_64 rng(3);
  auto s = m.sample(rng);
  StepConfig c;
  c.dt = 0.5;
  c.newton_max_iter = 1;
  try {
    implicit_midpoint_step(m, s, c);
    FAIL() << "expected StepFailedError";
  } catch (const StepFailedError& e) {
    EXPECT_FALSE(e.residual_history.empty());
  }
}

TEST(ImplicitMidpoint, JacobianMatchesFiniteDifferences) {
  auto m = build_model("sol");
  std::mt19937_64 rng(4);
  auto s = m.sample(rng);
  StepConfig c;
  c.dt = 0.05;
  Eigen::MatrixXd J;
  implicit_midpoint_step(m, s, c, &J);
  const Eigen::VectorXd z = s.phase();
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    auto col = [&](double h) {
      Eigen::VectorXd a = z, b = z;
      a[j] += h;
      b[j] -= h;
      return Eigen::VectorXd((implicit_midpoint_step(m, CotangentState::from_phase(a), c).phase() -
                              implicit_midpoint_step(m, CotangentState::from_phase(b), c).phase()) /
                             (2 * h));
    };
    EXPECT_LE((J.col(j) - col(1e-5)).lpNorm<Eigen::Infinity>(), 1e-7) << "column " << j;
  }
}

TEST(Rattle, ZeroStepIsIdentity) {
  auto m = build_model("ellipsoid");
  std::mt19937_64 rng(5);
  auto s = m.sample(rng);
  StepConfig c;
  c.dt = 0.0;
  auto t = rattle_step(m, s, c);
  EXPECT_EQ(t.x, s.x);
  EXPECT_EQ(t.p, s.p);
}

// RATTLE advances a unit-speed great circle by exactly asin(dt) per step, so
// the discrete orbit is known in closed form.
TEST(Rattle, SphereEquatorFollowsDiscreteGreatCircle) {
  auto m = build_model("sphere");
  auto s = state(Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0));
  StepConfig c;
  c.dt = 1e-3;
  const int n = static_cast<int>(std::lround(2 * std::numbers::pi / c.dt));
  for (int k = 0; k < n; ++k) s = rattle_step(m, s, c);
  const double angle = n * std::asin(c.dt);
  EXPECT_LE((s.x - Eigen::Vector3d(std::cos(angle), std::sin(angle), 0)).norm(), 1e-10);
  EXPECT_EQ(s.x[2], 0.0);
}

TEST(Rattle, EllipsoidConstraintOverLongRun) {
  EllipsoidParams p;
  p.a = Eigen::Vector3d(3, 2, 1);
  auto m = ellipsoid_moser(p);
  std::mt19937_64 rng(6);
  auto s = m.sample(rng);
  StepConfig c;
  c.dt = 1e-3;
  double worst = 0.0, worst_tan = 0.0;
  for (int k = 0; k < 100000; ++k) {
    s = rattle_step(m, s, c);
    worst = std::max(worst, m.constraint_residual(s));
    worst_tan = std::max(worst_tan, m.tangency_residual(s));
  }
  EXPECT_LE(worst, 1e-12);
  EXPECT_LE(worst_tan, 1e-12);
}

TEST(Rattle, RejectsChartModel) {
  auto m = flat_torus();
  EXPECT_THROW(rattle_step(m, state(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0)), StepConfig{}),
               std::invalid_argument);
}

// Property: per-step residuals stay at roundoff for every embedded model.
TEST(Rattle, ResidualsPerStepOnEveryEmbeddedModel) {
  for (const auto& e : list_catalog()) {
    auto m = build_model(e.key);
    if (m.kind != ModelKind::embedded) continue;
    Gen gen(13);
    for (int k = 0; k < 5; ++k) {
      auto s = m.sample(gen.engine());
      StepConfig c;
      c.dt = 1e-3;
      for (int i = 0; i < 200; ++i) {
        s = rattle_step(m, s, c);
        ASSERT_LE(m.constraint_residual(s), 1e-12) << e.key;
        ASSERT_LE(m.tangency_residual(s), 1e-12) << e.key;
      }
    }
  }
}

TEST(Integrate, ZeroLengthGivesInitialState) {
  auto m = build_model("liouville");
  std::mt19937_64 rng(7);
  auto s = m.sample(rng);
  auto rec = integrate(m, s, StepConfig{}, 0.0);
  ASSERT_EQ(rec.size(), 1u);
  EXPECT_EQ(rec.states[0].x, s.x);
  EXPECT_EQ(rec.states[0].p, s.p);
  EXPECT_EQ(rec.times[0], 0.0);
}

TEST(Integrate, RecordShape) {
  auto m = build_model("ellipsoid");
  std::mt19937_64 rng(8);
  StepConfig c;
  c.dt = 0.01;
  auto rec = integrate(m, m.sample(rng), c, 1.005, 7);
  EXPECT_DOUBLE_EQ(rec.times.back(), 1.005);
  for (std::size_t i = 1; i < rec.size(); ++i) EXPECT_GT(rec.times[i], rec.times[i - 1]);
  EXPECT_EQ(rec.states.size(), rec.size());
  EXPECT_EQ(rec.energy.size(), rec.size());
  EXPECT_EQ(rec.constraint_residual.size(), rec.size());
  ASSERT_EQ(rec.integral_values.size(), m.integrals.size());
  for (const auto& v : rec.integral_values) EXPECT_EQ(v.size(), rec.size());

  std::ostringstream csv;
  rec.write_csv(csv);
  const std::string text = csv.str();
  const std::string header = text.substr(0, text.find('\n'));
  EXPECT_EQ(header, "t,x0,x1,x2,p0,p1,p2,H,F1,F2,F3,constraint_residual,tangency_residual");
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), rec.size() + 1);
  auto j = rec.summary();
  EXPECT_TRUE(j.contains("integral_drift"));
  EXPECT_FALSE(j.contains("states"));
}

TEST(Integrate, RejectsNegativeHorizon) {
  auto m = flat_torus();
  EXPECT_THROW(integrate(m, state(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0)), StepConfig{}, -1.0),
               std::invalid_argument);
}

TEST(Integrate, IrrationalWindingNeverCloses) {
  auto m = flat_torus();
  auto s0 = state(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, std::sqrt(2.0)));
  StepConfig c;
  c.dt = 1e-2;
  auto rec = integrate(m, s0, c, 100.0, 1);
  double closest = 1e9;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    if (rec.times[i] < 1.0) continue;
    double d = 0.0;
    for (int k = 0; k < 2; ++k) {
      const double w = std::remainder(rec.states[i].x[k], 2 * std::numbers::pi);
      d = std::max(d, std::abs(w));
    }
    closest = std::min(closest, d);
  }
  EXPECT_GT(closest, 1e-3);
}

TEST(Integrate, SphereVectorIntegral) {
  auto m = build_model("sphere");
  std::mt19937_64 rng(9);
  StepConfig c;
  c.dt = 1e-3;
  auto rec = integrate(m, m.sample(rng), c, 100.0, 100);
  for (std::size_t i = 0; i < rec.integral_names.size(); ++i)
    EXPECT_LE(rec.integral_drift[i], 1e-8) << rec.integral_names[i];
}

// Property: no secular energy growth for any catalog model over t in [0, 100].
TEST(Integrate, EnergyDriftOnEveryModel) {
  for (const auto& e : list_catalog()) {
    auto m = build_model(e.key);
    std::mt19937_64 rng(14);
    StepConfig c;
    c.dt = 1e-3;
    auto rec = integrate(m, unit_speed(m, m.sample(rng)), c, 100.0, 100);
    EXPECT_LE(rec.energy_drift, 1e-6) << e.key;
    if (m.kind == ModelKind::embedded) {
      EXPECT_LE(rec.max_constraint_residual, 1e-12) << e.key;
      EXPECT_LE(rec.max_tangency_residual, 1e-12) << e.key;
    }
  }
}

// Global error against a dt/10 reference shrinks by ~4x per halving.
TEST(Integrate, SecondOrderConvergence) {
  for (const char* key : {"liouville", "ellipsoid"}) {
    auto m = build_model(key);
    std::mt19937_64 rng(15);
    auto s0 = unit_speed(m, m.sample(rng));
    auto error = [&](double dt) {
      StepConfig c, r;
      c.dt = dt;
      r.dt = dt / 10;
      auto a = integrate(m, s0, c, 2.0, 1000000).states.back();
      auto b = integrate(m, s0, r, 2.0, 1000000).states.back();
      return distance(a, b);
    };
    const double e1 = error(0.02), e2 = error(0.01);
    EXPECT_GE(e1 / e2, 3.9) << key << " e1 " << e1 << " e2 " << e2;
  }
}

TEST(Integrate, StepErrorsNameTheStep) {
  auto m = build_model("liouville");
  std::mt19937_64 rng(3);
  StepConfig c;
  c.dt = 0.5;
  c.newton_max_iter = 1;
  try {
    integrate(m, m.sample(rng), c, 2.0);
    FAIL() << "expected StepFailedError";
  } catch (const StepFailedError& e) {
    EXPECT_NE(std::string(e.what()).find("step"), std::string::npos);
  }
}
