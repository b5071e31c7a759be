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


#include "dtude/manipulator.h"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "dtude/errors.h"

namespace dtude {
namespace {

const ManipulatorParams kActual = ManipulatorParams::Actual();

// 2x2 inverse by the adjugate, written out independently of the library.
Eigen::Matrix2d Inverse2(const Eigen::Matrix2d& m) {
  const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  Eigen::Matrix2d inv;
  inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return inv / det;
}

JointState RandomState(std::mt19937& rng) {
  std::uniform_real_distribution<double> angle(-2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> rate(-10.0, 10.0);
  return {angle(rng), angle(rng), rate(rng), rate(rng)};
}

TEST(ManipulatorParamsTest, NamedSets) {
  const ManipulatorParams u = ManipulatorParams::Uncertain();
  EXPECT_EQ(kActual.m1, 2.0);
  EXPECT_EQ(kActual.m2, 1.0);
  EXPECT_EQ(kActual.l1, 2.0);
  EXPECT_EQ(kActual.l2, 1.0);
  EXPECT_EQ(kActual.g, 9.8);
  EXPECT_EQ(u.m1, 2.4);
  EXPECT_EQ(u.m2, 1.3);
  EXPECT_EQ(u.l1, 2.5);
  EXPECT_EQ(u.l2, 1.2);
}

TEST(ManipulatorParamsTest, RejectsNonPositive) {
  ManipulatorParams p = kActual;
  p.l2 = 0.0;
  EXPECT_THROW(p.Validate(), InputError);
  p.l2 = std::nan("");
  EXPECT_THROW(p.Validate(), InputError);
}

TEST(EvalMckTest, ZeroState) {
  const MckTerms t = EvalMck(kActual, {});
  EXPECT_EQ(t.inertia(0, 0), 17.0);
  EXPECT_EQ(t.inertia(0, 1), 3.0);
  EXPECT_EQ(t.inertia(1, 0), 3.0);
  EXPECT_EQ(t.inertia(1, 1), 1.0);
  EXPECT_EQ(t.coriolis, Eigen::Vector2d::Zero());
  EXPECT_EQ(t.gravity, Eigen::Vector2d::Zero());
}

TEST(EvalMckTest, RightAngleElbowDropsCosineTerms) {
  const MckTerms t = EvalMck(kActual, {0.0, std::numbers::pi / 2.0, 0.0, 0.0});
  // m1 l1^2 + m2 (l1^2 + l2^2) = 8 + 5, m2 l2^2 = 1.
  EXPECT_NEAR(t.inertia(0, 0), 13.0, 1e-14);
  EXPECT_NEAR(t.inertia(0, 1), 1.0, 1e-14);
  EXPECT_NEAR(t.inertia(1, 1), 1.0, 1e-14);
}

TEST(EvalMckTest, GravityAtRightAngle) {
  // theta1 = pi/2, theta2 = 0: sin(theta1) = sin(theta1 + theta2) = 1.
  const MckTerms t = EvalMck(kActual, {std::numbers::pi / 2.0, 0.0, 0.0, 0.0});
  EXPECT_NEAR(t.gravity(0), 3.0 * 9.8 * 2.0 + 1.0 * 9.8 * 1.0, 1e-12);
  EXPECT_NEAR(t.gravity(1), 9.8, 1e-12);
}

TEST(EvalMckTest, CoriolisVanishesAtRest) {
  std::mt19937 rng(41);
  for (int i = 0; i < 1000; ++i) {
    JointState s = RandomState(rng);
    s.dtheta1 = s.dtheta2 = 0.0;
    EXPECT_EQ(EvalMck(kActual, s).coriolis, Eigen::Vector2d::Zero());
  }
}

TEST(EvalMckTest, InertiaSymmetricPositiveDefinite) {
  std::mt19937 rng(43);
  std::uniform_real_distribution<double> angle(-10.0, 10.0);
  double min_eig = 1e300;
  for (int i = 0; i < 1000000; ++i) {
    const Eigen::Matrix2d m = EvalMck(kActual, {angle(rng), angle(rng), 0.0, 0.0}).inertia;
    ASSERT_EQ(m(0, 1), m(1, 0));
    // Smallest eigenvalue of a symmetric 2x2.
    const double mean = 0.5 * (m(0, 0) + m(1, 1));
    const double half = std::hypot(0.5 * (m(0, 0) - m(1, 1)), m(0, 1));
    min_eig = std::min(min_eig, mean - half);
  }
  EXPECT_GT(min_eig, 0.0);
}

TEST(ForwardDynamicsTest, EquilibriumAtRest) {
  EXPECT_EQ(ForwardDynamics(kActual, {}, {}, Eigen::Vector2d::Zero()), Eigen::Vector4d::Zero());
}

TEST(ForwardDynamicsTest, TorqueProducesUnitAcceleration) {
  // tau = M [1, 0] at the zero state.
  const Eigen::Vector4d d = ForwardDynamics(kActual, {}, {17.0, 3.0}, Eigen::Vector2d::Zero());
  EXPECT_NEAR(d(1), 1.0, 1e-14);
  EXPECT_NEAR(d(3), 0.0, 1e-14);
}

TEST(ForwardDynamicsTest, AdditiveDisturbance) {
  const Eigen::Vector4d d = ForwardDynamics(kActual, {}, {}, Eigen::Vector2d(0.5, -0.5));
  EXPECT_EQ(d, Eigen::Vector4d(0.0, 0.5, 0.0, -0.5));
}

TEST(TotalDisturbanceTest, ZeroAtRest) {
  EXPECT_EQ(TotalDisturbance(kActual, NominalMu(kActual), {}, {}, Eigen::Vector2d::Zero()),
            Eigen::Vector2d::Zero());
}

TEST(TotalDisturbanceTest, UnitTorqueAtRest) {
  Eigen::Matrix2d m;
  m << 17, 3, 3, 1;
  const Eigen::Vector2d mu(1.0 / 17.0, 1.0);
  const Eigen::Vector2d expected =
      (Inverse2(m) - Eigen::Matrix2d(mu.asDiagonal())) * Eigen::Vector2d(1.0, 0.0);
  const Eigen::Vector2d d = TotalDisturbance(kActual, mu, {}, {1.0, 0.0}, Eigen::Vector2d::Zero());
  EXPECT_NEAR(d(0), expected(0), 1e-15);
  EXPECT_NEAR(d(1), expected(1), 1e-15);
  // M^{-1} = [[1, -3], [-3, 17]] / 8.
  EXPECT_NEAR(d(0), 1.0 / 8.0 - 1.0 / 17.0, 1e-15);
  EXPECT_NEAR(d(1), -3.0 / 8.0, 1e-15);
}

TEST(TotalDisturbanceTest, DecomposesForwardDynamics) {
  std::mt19937 rng(47);
  std::uniform_real_distribution<double> torque(-100.0, 100.0);
  std::uniform_real_distribution<double> ext(-20.0, 20.0);
  const Eigen::Vector2d mu = NominalMu(kActual);
  for (int i = 0; i < 10000; ++i) {
    const JointState s = RandomState(rng);
    const Torque u{torque(rng), torque(rng)};
    const Eigen::Vector2d d_ext(ext(rng), ext(rng));
    const Eigen::Vector4d f = ForwardDynamics(kActual, s, u, d_ext);
    const Eigen::Vector2d d = TotalDisturbance(kActual, mu, s, u, d_ext);
    EXPECT_EQ(f(0), s.dtheta1);
    EXPECT_EQ(f(2), s.dtheta2);
    EXPECT_NEAR(f(1), d(0) + mu(0) * u.tau1, 1e-10);
    EXPECT_NEAR(f(3), d(1) + mu(1) * u.tau2, 1e-10);
  }
}

TEST(NominalInputMatrixTest, ActualParameters) {
  const NominalModel m = NominalInputMatrix(kActual);
  EXPECT_NEAR(m.b(1, 0), 1.0 / 17.0, 1e-16);
  EXPECT_NEAR(m.b(1, 0), 0.0588235, 1e-7);
  EXPECT_EQ(m.b(3, 1), 1.0);
  EXPECT_EQ(m.b(0, 0) + m.b(2, 1) + m.b(0, 1) + m.b(1, 1) + m.b(3, 0), 0.0);
  EXPECT_TRUE((m.a * m.a).isZero(0.0));
  EXPECT_EQ(m.a(0, 1), 1.0);
  EXPECT_EQ(m.a(2, 3), 1.0);
}

TEST(NominalInputMatrixTest, UncertainParameters) {
  const NominalModel m = NominalInputMatrix(ManipulatorParams::Uncertain());
  EXPECT_NEAR(m.b(1, 0), 1.0 / (2.4 * 6.25 + 1.3 * 3.7 * 3.7), 1e-15);
  EXPECT_NEAR(m.b(1, 0), 0.030491, 1e-6);
  EXPECT_NEAR(m.b(3, 1), 1.0 / (1.3 * 1.44), 1e-15);
  EXPECT_NEAR(m.b(3, 1), 0.534188, 1e-6);
}

}  // namespace
}  // namespace dtude
