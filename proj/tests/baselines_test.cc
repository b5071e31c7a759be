// Copyright 2026 The dtude Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "dtude/baselines.h"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "dtude/errors.h"
#include "dtude/manipulator.h"
#include "dtude/simkern.h"
#include "test_util.h"

namespace dtude {
namespace {

SmcConfig DefaultSmc() { return Scenario::Default().smc; }

TEST(SatTest, Branches) {
  const Eigen::Vector2d inside(0.03, -0.04);  // norm 0.05
  EXPECT_LT((Sat(inside, 0.1) - inside / 0.1).norm(), 1e-15);
  const Eigen::Vector2d outside(3.0, 4.0);
  EXPECT_NEAR(Sat(outside, 0.1).norm(), 1.0, 1e-15);
  EXPECT_LT((Sat(outside, 0.1) - Eigen::Vector2d(0.6, 0.8)).norm(), 1e-15);
}

TEST(SatTest, ContinuousAtBoundaryLayer) {
  std::mt19937 rng(131);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> width(1e-3, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double eps = width(rng), a = angle(rng);
    const Eigen::Vector2d s = eps * Eigen::Vector2d(std::cos(a), std::sin(a));
    EXPECT_LT((Sat(s * (1.0 + 1e-13), eps) - Sat(s * (1.0 - 1e-13), eps)).norm(), 1e-12);
    EXPECT_LE(Sat(testing::RandomMatrix(rng, 2, 1, 100.0), eps).norm(), 1.0 + 1e-15);
  }
}

TEST(SmcControlTest, RestAtOriginGivesZero) {
  const Eigen::Vector2d tau =
      SmcControl(DefaultSmc(), Eigen::Vector4d::Zero(), Eigen::Vector4d::Zero(),
                 Eigen::Vector2d::Zero());
  EXPECT_TRUE(tau.isZero(0.0));
}

TEST(SmcControlTest, TrackingOnTargetIsFeedforward) {
  const SmcConfig cfg = DefaultSmc();
  std::mt19937 rng(137);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector4d x = testing::RandomMatrix(rng, 4, 1, 3.0);
    const Eigen::Vector2d acc = testing::RandomMatrix(rng, 2, 1, 5.0);
    const MckTerms hat = EvalMck(ManipulatorParams::Uncertain(), JointState::FromVector(x));
    const Eigen::Vector2d ff = hat.inertia * acc + hat.coriolis + hat.gravity;
    EXPECT_LT((SmcControl(cfg, x, x, acc) - ff).norm(), 1e-12 * std::max(1.0, ff.norm()));
  }
}

TEST(SmcControlTest, PerJointSurfacesAndRobustTerm) {
  const SmcConfig cfg = DefaultSmc();
  // Tiny joint-1 position error: s = (7e, 0) inside the layer.
  const double err = 1e-3;
  Eigen::Vector4d x = Eigen::Vector4d::Zero();
  x(0) = err;
  const Eigen::Vector4d xm = Eigen::Vector4d::Zero();
  const Eigen::Vector2d grav = GravityVector(ManipulatorParams::Uncertain(), err, 0.0);
  const Eigen::Vector2d expected =
      -Eigen::Vector2d(34.0 * err, 0.0) + grav - Eigen::Vector2d(15.0 * 7.0 * err / 0.1, 0.0);
  EXPECT_LT((SmcControl(cfg, x, xm, Eigen::Vector2d::Zero()) - expected).norm(), 1e-12);
}

TEST(SmcControlTest, RobustTermBounded) {
  SmcConfig cfg = DefaultSmc();
  cfg.k = Mat::Zero(2, 4);  // isolate the switching term
  const double bound = cfg.d_bounds.maxCoeff() * std::sqrt(2.0);
  std::mt19937 rng(139);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Vector4d x = testing::RandomMatrix(rng, 4, 1, 5.0);
    const Eigen::Vector4d xm = testing::RandomMatrix(rng, 4, 1, 5.0);
    const Eigen::Vector2d acc = testing::RandomMatrix(rng, 2, 1, 5.0);
    const Eigen::Vector2d robust = SmcControl(cfg, x, xm, acc) - SmcControl(cfg, x, x, acc);
    EXPECT_LE(robust.norm(), bound + 1e-12);
  }
}

TEST(SmcConfigTest, Validation) {
  SmcConfig cfg = DefaultSmc();
  EXPECT_NO_THROW(cfg.Validate());
  cfg.epsilon = 0.0;
  EXPECT_THROW(cfg.Validate(), InputError);
  cfg = DefaultSmc();
  cfg.d_bounds(1) = -1.0;
  EXPECT_THROW(cfg.Validate(), InputError);
  cfg = DefaultSmc();
  cfg.k = Mat::Zero(2, 3);
  EXPECT_THROW(cfg.Validate(), DimensionError);
}

TEST(PdGravityTest, OnTargetAtOriginIsZero) {
  EXPECT_TRUE(PdGravityControl(PdConfig{}, Eigen::Vector4d::Zero(), Eigen::Vector4d::Zero())
                  .isZero(0.0));
}

TEST(PdGravityTest, DefaultGainsOnUnitError) {
  // Zero gravity: g = 0.
  PdConfig cfg;
  cfg.model.g = 0.0;
  Eigen::Vector4d x;
  x << 1.0, 0.0, 1.0, 0.0;
  EXPECT_LT((PdGravityControl(cfg, x, Eigen::Vector4d::Zero()) - Eigen::Vector2d(-1.0, -1.0))
                .norm(),
            1e-15);
  x << 0.0, 1.0, 0.0, -2.0;
  EXPECT_LT((PdGravityControl(cfg, x, Eigen::Vector4d::Zero()) - Eigen::Vector2d(-0.1, 0.2))
                .norm(),
            1e-15);
}

TEST(PdGravityTest, GravityHandOracle) {
  const PdConfig cfg;
  const ManipulatorParams& p = cfg.model;
  Eigen::Vector4d x;
  x << std::numbers::pi / 2.0, 0.3, 0.0, -0.2;
  // sin(pi/2) = 1 for both the shoulder and the summed angle.
  const Eigen::Vector2d expected((p.m1 + p.m2) * p.g * p.l1 + p.m2 * p.g * p.l2,
                                 p.m2 * p.g * p.l2);
  EXPECT_LT((PdGravityControl(cfg, x, x) - expected).norm(), 1e-12);
}

Mat ManipulatorA() { return NominalInputMatrix(ManipulatorParams::Actual()).a; }
Mat ManipulatorB() { return NominalInputMatrix(ManipulatorParams::Actual()).b; }

CtUdeConfig DefaultCtUde() {
  Mat k(2, 4);
  k << 34, 51, 0, 0, 0, 0, 2, 3;
  return CtUdeConfig(ManipulatorA(), ManipulatorB(), k, 0.01);
}

TEST(CtUdeTest, ZeroErrorZeroTorque) {
  const CtUdeConfig cfg = DefaultCtUde();
  CtUdeState st = CtUdeState::Initial(4);
  for (int i = 0; i < 20; ++i) {
    const CtUdeStep s = CtUdeControl(cfg, st, Vec::Zero(4), 0.001);
    EXPECT_TRUE(s.u.isZero(0.0));
    st = s.next;
  }
}

TEST(CtUdeTest, ConstantErrorTrapezoid) {
  const CtUdeConfig cfg = DefaultCtUde();
  const Vec e = Eigen::Vector4d(0.5, -1.0, 2.0, 0.25);
  CtUdeState st = CtUdeControl(cfg, CtUdeState::Initial(4), e, 0.001).next;
  EXPECT_TRUE(st.integral.isZero(0.0));
  st = CtUdeControl(cfg, st, e, 0.001).next;
  EXPECT_LT((st.integral - 0.001 * e).norm(), 1e-18);
}

TEST(CtUdeTest, ScriptedSequenceMatchesSummationOracle) {
  const CtUdeConfig cfg = DefaultCtUde();
  Mat k(2, 4);
  k << 34, 51, 0, 0, 0, 0, 2, 3;
  const Mat a = ManipulatorA(), b = ManipulatorB();
  const Mat bp = b.completeOrthogonalDecomposition().pseudoInverse();
  std::mt19937 rng(149);
  std::vector<Vec> es;
  std::vector<double> dts;
  CtUdeState st = CtUdeState::Initial(4);
  std::uniform_real_distribution<double> dt_dist(1e-4, 2e-3);
  for (int i = 0; i < 60; ++i) {
    es.push_back(testing::RandomMatrix(rng, 4, 1));
    dts.push_back(dt_dist(rng));
    const CtUdeStep s = CtUdeControl(cfg, st, es.back(), dts.back());
    Vec integral = Vec::Zero(4);
    for (int j = 1; j <= i; ++j) integral += 0.5 * dts[j] * (es[j - 1] + es[j]);
    const Vec u = -k * es[i] - 100.0 * bp * (es[i] - (a - b * k) * integral);
    EXPECT_LT((s.u - u).norm(), 1e-10 * std::max(1.0, u.norm())) << i;
    st = s.next;
  }
}

TEST(CtUdeTest, SuperpositionOfErrorHistories) {
  const CtUdeConfig cfg = DefaultCtUde();
  std::mt19937 rng(151);
  CtUdeState s1 = CtUdeState::Initial(4), s2 = s1, s12 = s1;
  for (int i = 0; i < 100; ++i) {
    const Vec e1 = testing::RandomMatrix(rng, 4, 1), e2 = testing::RandomMatrix(rng, 4, 1);
    const CtUdeStep a = CtUdeControl(cfg, s1, e1, 1e-3);
    const CtUdeStep b = CtUdeControl(cfg, s2, e2, 1e-3);
    const CtUdeStep c = CtUdeControl(cfg, s12, 2.0 * e1 - 3.0 * e2, 1e-3);
    EXPECT_LT((c.u - (2.0 * a.u - 3.0 * b.u)).norm(), 1e-9 * std::max(1.0, c.u.norm()));
    s1 = a.next;
    s2 = b.next;
    s12 = c.next;
  }
}

TEST(CtUdeTest, Preconditions) {
  Mat k(2, 4);
  k.setZero();
  EXPECT_THROW(CtUdeConfig(ManipulatorA(), ManipulatorB(), k, 0.0), InputError);
  EXPECT_THROW(CtUdeConfig(ManipulatorA(), ManipulatorB(), Mat::Zero(2, 3), 0.01), DimensionError);
  const CtUdeConfig cfg = DefaultCtUde();
  const CtUdeState st = CtUdeControl(cfg, CtUdeState::Initial(4), Vec::Ones(4), 1.0).next;
  EXPECT_THROW(CtUdeControl(cfg, st, Vec::Ones(4), 0.0), InputError);
  EXPECT_THROW(CtUdeControl(cfg, st, Vec::Ones(3), 0.1), DimensionError);
}

}  // namespace
}  // namespace dtude
