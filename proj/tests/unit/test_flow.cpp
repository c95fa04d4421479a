#include <gtest/gtest.h>

#include <cmath>

#include "sqg/errors.hpp"
#include "sqg/lagrangian_flow.hpp"
#include "sqg/parallel.hpp"
#include "sqg/presets.hpp"
#include "sqg/riesz.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace sqg::lagrangian;
using sqg::testing::Gen;
using sqg::testing::kPi;

namespace {

ScalarField2D gaussian(int m) { return sample(make_preset(Preset::kGaussian), Grid2D(4.0, m)); }

FlowMap small_shear(const Grid2D& g, double eps) {
  FlowMap X(g, 0.5);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Vec2 a = g.node(k);
    const double b = std::exp(-0.5 * (a[0] * a[0] + a[1] * a[1]));
    X.y1[k] = eps * b * std::sin(a[1]);
    X.y2[k] = 0.5 * eps * b * std::cos(a[0]);
  }
  return X;
}

double angle_of(const Vec2& v) { return std::atan2(v[1], v[0]); }

}  // namespace

TEST(Flow, IdentityReducesToRiesz) {
  const ScalarField2D theta = gaussian(16);
  const Grid2D& g = theta.grid;
  const VectorField2D F = eval_F(FlowMap::identity(g), theta);
  for (std::size_t k = 0; k < g.size(); k += 3) {
    const Vec2 u = riesz_velocity(theta, g.node(k)).u;
    EXPECT_NEAR(F.x1[k], u[0], 1e-13);
    EXPECT_NEAR(F.x2[k], u[1], 1e-13);
  }
}

TEST(Flow, ZeroDataIsStationary) {
  const ScalarField2D zero(Grid2D(4.0, 8), 0.5);
  const VectorField2D F = eval_F(FlowMap::identity(zero.grid), zero);
  for (std::size_t k = 0; k < F.x1.size(); ++k) {
    EXPECT_EQ(F.x1[k], 0.0);
    EXPECT_EQ(F.x2[k], 0.0);
  }
  const FlowMap X = exp_map(zero, 0.25);
  for (std::size_t k = 0; k < X.y1.size(); ++k) {
    EXPECT_EQ(X.y1[k], 0.0);
    EXPECT_EQ(X.y2[k], 0.0);
  }
  EXPECT_EQ(energy(X, zero), 0.0);
}

TEST(FlowProperty, LinearInThetaAtFixedMap) {
  Gen gen(61);
  const Grid2D g(4.0, 12);
  const FlowMap X = small_shear(g, 0.05);
  PresetSpec pair = make_preset(Preset::kGaussianPair);
  const ScalarField2D t1 = sample(make_preset(Preset::kGaussian), g);
  for (int t = 0; t < 3; ++t) {
    pair.angle = gen.real(0, 2 * kPi);
    const ScalarField2D t2 = sample(pair, g);
    const double a = gen.real(-2, 2), b = gen.real(-2, 2);
    ScalarField2D mix(g, 0.5);
    for (std::size_t k = 0; k < g.size(); ++k) mix.v[k] = a * t1.v[k] + b * t2.v[k];
    const VectorField2D F1 = eval_F(X, t1), F2 = eval_F(X, t2), Fm = eval_F(X, mix);
    for (std::size_t k = 0; k < g.size(); ++k) {
      EXPECT_NEAR(Fm.x1[k], a * F1.x1[k] + b * F2.x1[k], 1e-13);
      EXPECT_NEAR(Fm.x2[k], a * F1.x2[k] + b * F2.x2[k], 1e-13);
    }
  }
}

TEST(Flow, GradientMatchesDifferencesOfF) {
  // interior nodes with |a| ≤ 2, where centred differences are clean
  auto err = [](int m) {
    const ScalarField2D theta = gaussian(m);
    const Grid2D& g = theta.grid;
    const FlowMap id = FlowMap::identity(g);
    const VectorField2D F = eval_F(id, theta);
    const MatrixField2D G = eval_gradF(id, theta);
    double e = 0.0, div = 0.0;
    for (int j = 1; j + 1 < g.n(); ++j) {
      for (int i = 1; i + 1 < g.n(); ++i) {
        if (std::hypot(g.coord(i), g.coord(j)) > 2.0) continue;
        const Mat2& M = G.v[g.index(i, j)];
        const double fd[4] = {diff_x1(F.x1, g, i, j), diff_x2(F.x1, g, i, j), diff_x1(F.x2, g, i, j),
                              diff_x2(F.x2, g, i, j)};
        for (int c = 0; c < 4; ++c) e = std::max(e, std::abs(M[c] - fd[c]));
        div = std::max(div, std::abs(M[0] + M[3]));
      }
    }
    return std::pair{e, div};
  };
  const auto [e16, d16] = err(16);
  const auto [e32, d32] = err(32);
  EXPECT_GE(std::log2(e16 / e32), 1.9);
  EXPECT_LT(d32, 1e-3);
  EXPECT_LT(d32, d16);
}

TEST(Flow, ConstantDataHasNoGradientIntegral) {
  // θ₀ locally constant: ∇θ₀ vanishes at every node, so the integral does too
  const Grid2D g(4.0, 8);
  ScalarField2D flat(g, 0.5);
  const MatrixField2D G = eval_gradF(FlowMap::identity(g), flat);
  for (const Mat2& M : G.v) EXPECT_EQ(max_abs_entry(M), 0.0);
}

TEST(Flow, EnergyAtIdentityMatchesHankelOracle) {
  const PresetSpec spec = make_preset(Preset::kGaussian);
  const sqg::testing::RadialVelocity oracle(spec, support_radius(Preset::kGaussian));
  const ScalarField2D theta = sample(spec, Grid2D(4.0, 32));
  const double e = energy(FlowMap::identity(theta.grid), theta);
  EXPECT_NEAR(e, oracle.energy(), 1e-4 * oracle.energy());
}

TEST(Flow, RadialDataRotatesRigidlyOnCircles) {
  const PresetSpec spec = make_preset(Preset::kGaussian);
  const sqg::testing::RadialVelocity oracle(spec, support_radius(Preset::kGaussian));
  const ScalarField2D theta = sample(spec, Grid2D(4.0, 32));
  const Grid2D& g = theta.grid;
  EvolveOptions opt;
  opt.t_end = 1.0;
  opt.dt = 0.125;
  const EvolveResult res = evolve(theta, opt);
  ASSERT_FALSE(res.halted) << res.halt_reason;
  EXPECT_EQ(res.steps.size(), 8U);
  double radius = 0.0, phase = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Vec2 a = g.node(k), x = res.X.X(k);
    const double r = std::hypot(a[0], a[1]);
    radius = std::max(radius, std::abs(std::hypot(x[0], x[1]) - r));
    if (r < 0.25 || r > 2.5) continue;
    double turned = angle_of(x) - angle_of(a);
    turned = std::remainder(turned, 2 * kPi);
    phase = std::max(phase, std::abs(turned - oracle.u_phi(r) / r));
  }
  EXPECT_LT(radius, 1e-4);
  EXPECT_LT(phase, 2e-4);
  EXPECT_LT(res.max_jac_dev, 2e-4);
  EXPECT_LE(res.max_chord_arc, kChordArcBound);
  EXPECT_LT(std::abs(res.energy1 - res.energy0) / res.energy0, 1e-4);
  // θ is carried along the paths, and radial θ₀ is steady
  const ScalarField2D th = eulerian_theta(res.X, theta);
  double trans = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) trans = std::max(trans, std::abs(th.v[k] - theta.v[k]));
  EXPECT_LT(trans, 1e-3 * theta.max_abs());
}

TEST(Flow, SmallAmplitudeTaylorCheck) {
  // exp(s·θ₀)(a) = a + s·u₀(a) + O(s²)
  const ScalarField2D base = gaussian(16);
  const Grid2D& g = base.grid;
  const VectorField2D u0 = eval_F(FlowMap::identity(g), base);
  auto residual = [&](double s) {
    ScalarField2D th = base;
    for (double& v : th.v) v *= s;
    const FlowMap X = exp_map(th, 0.125);
    double e = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      e = std::max({e, std::abs(X.y1[k] - s * u0.x1[k]), std::abs(X.y2[k] - s * u0.x2[k])});
    }
    return e;
  };
  const double r1 = residual(0.4), r2 = residual(0.2);
  EXPECT_GT(r1, 0.0);
  EXPECT_NEAR(std::log2(r1 / r2), 2.0, 0.15);
}

TEST(Flow, RefusesMapsOutsideO) {
  const ScalarField2D theta = gaussian(16);
  const Grid2D& g = theta.grid;
  FlowMap X(g, 0.5);
  for (std::size_t k = 0; k < g.size(); ++k) X.y1[k] = -0.2 * g.node(k)[0];
  try {
    eval_F(X, theta);
    FAIL() << "expected a membership refusal";
  } catch (const sqg::MembershipError& e) {
    EXPECT_EQ(e.criterion(), "inf_det");
  }
  EXPECT_NO_THROW(eval_F(X, theta, false));
  EXPECT_THROW(eval_gradF(X, theta), sqg::MembershipError);
  EXPECT_THROW(eval_F(FlowMap::identity(Grid2D(4.0, 8)), theta), sqg::ValidationError);
}

TEST(Flow, LargeDataHaltsAndExpMapRefuses) {
  ScalarField2D theta = gaussian(16);
  for (double& v : theta.v) v *= 10.0;  // amplitude 1
  EvolveOptions opt;
  opt.dt = 0.125;
  const EvolveResult res = evolve(theta, opt);
  EXPECT_TRUE(res.halted);
  EXPECT_FALSE(res.halt_reason.empty());
  EXPECT_LT(res.t, 1.0);
  EXPECT_FALSE(res.steps.back().report.in_O);
  EXPECT_THROW(exp_map(theta, 0.125), sqg::MembershipError);
  opt.dt = 0.0;
  EXPECT_THROW(evolve(theta, opt), sqg::ValidationError);
}

TEST(Flow, ThreadCountDoesNotChangeResults) {
  const ScalarField2D theta = sample(make_preset(Preset::kGaussianPair), Grid2D(4.0, 12));
  const FlowMap X = small_shear(theta.grid, 0.05);
  sqg::set_threads(1);
  const VectorField2D a = eval_F(X, theta);
  const MatrixField2D ga = eval_gradF(X, theta);
  sqg::set_threads(3);
  const VectorField2D b = eval_F(X, theta);
  const MatrixField2D gb = eval_gradF(X, theta);
  sqg::set_threads(1);
  EXPECT_EQ(a.x1, b.x1);
  EXPECT_EQ(a.x2, b.x2);
  for (std::size_t k = 0; k < ga.v.size(); ++k) EXPECT_EQ(ga.v[k], gb.v[k]);
}

TEST(Flow, SmoothnessProbeValidatesArguments) {
  const ScalarField2D theta = gaussian(8);
  EXPECT_THROW(fd_smoothness_probe(theta, theta, theta, {0.5, 0.25}), sqg::ValidationError);
  EXPECT_THROW(fd_smoothness_probe(theta, theta, theta, {0.5, 0.5, 0.25}), sqg::ValidationError);
  EXPECT_THROW(fd_smoothness_probe(theta, gaussian(16), theta, {1.0, 0.5, 0.25}), sqg::ValidationError);
}
