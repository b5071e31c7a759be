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


#include "dtude/ude.h"

#include <cmath>
#include <random>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "dtude/errors.h"
#include "dtude/simkern.h"
#include "test_util.h"

namespace dtude {
namespace {

constexpr double kTs = 0.01;

DiscreteSystem ManipulatorSystem() { return DesignDtUde(Scenario::Default()).sys; }

std::vector<std::vector<Complex>> ReferencePoles() {
  const std::vector<Complex> block = {std::exp(-kTs), std::exp(-2.0 * kTs)};
  return {block, block};
}

// A scalar plant x(k+1) = x + Ts u, Kd = 20, so Fc = 0.8.
DiscreteSystem ScalarSystem() {
  DiscreteSystem sys;
  sys.fn = Mat::Constant(1, 1, 1.0);
  sys.gn = Mat::Constant(1, 1, kTs);
  sys.c = Mat::Constant(1, 1, 1.0);
  sys.fm = Mat::Constant(1, 1, 0.5);
  sys.gm = Mat::Constant(1, 1, 1.0);
  sys.ts = kTs;
  return sys;
}

TEST(DesignKdTest, MatchesTraceDeterminantOracle) {
  const DiscreteSystem sys = ManipulatorSystem();
  const Mat kd = DesignKd(sys, ReferencePoles());
  const double z1 = std::exp(-kTs), z2 = std::exp(-2.0 * kTs);
  for (int b = 0; b < 2; ++b) {
    const double mu = b == 0 ? 1.0 / 17.0 : 1.0;
    const double k1 = (1.0 - z1) * (1.0 - z2) / (mu * kTs * kTs);
    const double k2 = (2.0 - z1 - z2 - mu * kTs * kTs * k1 / 2.0) / (mu * kTs);
    EXPECT_NEAR(kd(b, 2 * b), k1, 1e-9 * k1);
    EXPECT_NEAR(kd(b, 2 * b + 1), k2, 1e-9 * k2);
    EXPECT_EQ(kd(b, 2 * (1 - b)), 0.0);
    EXPECT_EQ(kd(b, 2 * (1 - b) + 1), 0.0);
  }
  std::vector<Complex> all = ReferencePoles()[0];
  all.insert(all.end(), all.begin(), all.end());
  EXPECT_LT(matlib::MaxEigenvalueMismatch(testing::OracleEigenvalues(sys.fn - sys.gn * kd), all),
            1e-8);
}

TEST(DesignKdTest, RoundTrip) {
  const DiscreteSystem sys = ManipulatorSystem();
  Mat k = Mat::Zero(2, 4);
  k << 20, 40, 0, 0, 0, 0, 3, 4;
  const Mat fc = sys.fn - sys.gn * k;
  const std::vector<std::vector<Complex>> targets = {
      matlib::Eigenvalues(fc.topLeftCorner(2, 2)), matlib::Eigenvalues(fc.bottomRightCorner(2, 2))};
  const Mat again = DesignKd(sys, targets);
  EXPECT_LT((again - k).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(DesignKdTest, RejectsTargetOutsideUnitDisk) {
  EXPECT_THROW(DesignKd(ManipulatorSystem(), {{1.0, 0.5}, {0.5, 0.4}}), InputError);
}

TEST(UdeConfigTest, RejectsFastFilter) {
  const DiscreteSystem sys = ManipulatorSystem();
  const Mat kd = DesignKd(sys, ReferencePoles());
  try {
    UdeConfig cfg(sys, kd, 0.004);
    FAIL() << "expected StabilityError";
  } catch (const StabilityError& e) {
    EXPECT_THAT(e.what(), ::testing::HasSubstr("Ts/2"));
  }
  EXPECT_NO_THROW(UdeConfig(sys, kd, 0.004, /*allow_unstable_filter=*/true));
  EXPECT_NO_THROW(UdeConfig(sys, kd, 0.0051));
}

TEST(UdeConfigTest, RejectsUnstableController) {
  const DiscreteSystem sys = ManipulatorSystem();
  EXPECT_THROW(UdeConfig(sys, Mat::Zero(2, 4), 0.01), StabilityError);
}

TEST(ControlStepTest, ZeroErrorAtStart) {
  const DiscreteSystem sys = ManipulatorSystem();
  const UdeConfig cfg(sys, DesignKd(sys, ReferencePoles()), 0.01);
  const UdeStep s = ControlStep(cfg, UdeState::Initial(2), 0, Vec::Zero(4));
  EXPECT_TRUE(s.u.isZero(0.0));
  EXPECT_TRUE(s.next.accumulator.isZero(0.0));
  EXPECT_EQ(s.next.step_index, 1);
}

TEST(ControlStepTest, FirstStepBranch) {
  const DiscreteSystem sys = ManipulatorSystem();
  const Mat kd = DesignKd(sys, ReferencePoles());
  const UdeConfig cfg(sys, kd, 0.02);
  Vec e0(4);
  e0 << 0.1, -0.2, 0.3, 0.05;
  const UdeStep s = ControlStep(cfg, UdeState::Initial(2), 0, e0);
  const Mat gp = sys.gn.completeOrthogonalDecomposition().pseudoInverse();
  const Vec expected_u = -(kd + (kTs / 0.02) * gp) * e0;
  EXPECT_LT((s.u - expected_u).norm(), 1e-9 * expected_u.norm());
  EXPECT_LT((s.u_d + (kTs / 0.02) * gp * e0).norm(), 1e-9 * s.u_d.norm());
  ASSERT_TRUE(s.next.prev_error.has_value());
  EXPECT_EQ(*s.next.prev_error, e0);
}

TEST(ControlStepTest, ErrorFollowingFcLeavesAccumulatorUnchanged) {
  const DiscreteSystem sys = ManipulatorSystem();
  const UdeConfig cfg(sys, DesignKd(sys, ReferencePoles()), 0.01);
  Vec e(4);
  e << 0.3, 0.1, -0.2, 0.4;
  UdeStep s = ControlStep(cfg, UdeState::Initial(2), 0, e);
  const Vec first = s.u_d;
  for (int k = 1; k < 10; ++k) {
    e = cfg.fc() * e;
    s = ControlStep(cfg, s.next, k, e);
    EXPECT_LT((s.u_d - first).norm(), 1e-12 * first.norm()) << k;
  }
}

TEST(ControlStepTest, ScalarRunningSumMatchesDirectSummation) {
  const DiscreteSystem sys = ScalarSystem();
  const double tau = 0.03;
  const UdeConfig cfg(sys, Mat::Constant(1, 1, 20.0), tau);
  const double fc = 0.8;
  std::mt19937 rng(59);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::vector<double> e(40);
  for (double& v : e) v = val(rng);

  UdeState st = UdeState::Initial(1);
  for (std::size_t k = 0; k < e.size(); ++k) {
    const UdeStep s = ControlStep(cfg, st, static_cast<std::int64_t>(k), Vec::Constant(1, e[k]));
    // u_d(k) = -(Ts/tau)/Ts [e(0) + sum_{n=1}^{k} (e(n) - Fc e(n-1))].
    double sum = e[0];
    for (std::size_t n = 1; n <= k; ++n) sum += e[n] - fc * e[n - 1];
    const double u_d = -(kTs / tau) / kTs * sum;
    EXPECT_NEAR(s.u_d(0), u_d, 1e-11) << k;
    EXPECT_NEAR(s.u(0), -20.0 * e[k] + u_d, 1e-10) << k;
    st = s.next;
  }
}

TEST(ControlStepTest, OutOfOrderStepIsRejected) {
  const DiscreteSystem sys = ManipulatorSystem();
  const UdeConfig cfg(sys, DesignKd(sys, ReferencePoles()), 0.01);
  const UdeState st = UdeState::Initial(2);
  EXPECT_THROW(ControlStep(cfg, st, 1, Vec::Zero(4)), ProtocolError);
  const UdeStep s = ControlStep(cfg, st, 0, Vec::Zero(4));
  EXPECT_THROW(ControlStep(cfg, s.next, 0, Vec::Zero(4)), ProtocolError);
  EXPECT_THROW(ControlStep(cfg, s.next, 2, Vec::Zero(4)), ProtocolError);
}

TEST(ControlStepTest, LinearInTheErrorSequence) {
  const DiscreteSystem sys = ManipulatorSystem();
  const UdeConfig cfg(sys, DesignKd(sys, ReferencePoles()), 0.02);
  std::mt19937 rng(61);
  UdeState a = UdeState::Initial(2), b = UdeState::Initial(2);
  for (int k = 0; k < 50; ++k) {
    const Vec e = testing::RandomMatrix(rng, 4, 1);
    const UdeStep sa = ControlStep(cfg, a, k, e);
    const UdeStep sb = ControlStep(cfg, b, k, 2.0 * e);
    EXPECT_LT((sb.u - 2.0 * sa.u).norm(), 1e-12 * std::max(1.0, sa.u.norm()));
    a = sa.next;
    b = sb.next;
  }
}

TEST(LumpedDisturbanceEstimateTest, Values) {
  const DiscreteSystem sys = ManipulatorSystem();
  const UdeConfig cfg(sys, DesignKd(sys, ReferencePoles()), 0.01);
  EXPECT_TRUE(LumpedDisturbanceEstimate(cfg, Vec::Zero(2)).isZero(0.0));
  const Vec l = LumpedDisturbanceEstimate(cfg, Eigen::Vector2d(1.0, 0.0));
  EXPECT_NEAR(l(0), -2.9412e-6, 1e-10);
  EXPECT_NEAR(l(1), -5.8824e-4, 1e-8);
  EXPECT_EQ(l(2), 0.0);
  EXPECT_EQ(l(3), 0.0);
  const Vec u_d = Eigen::Vector2d(0.7, -1.3);
  EXPECT_LT((cfg.gn_pinv() * LumpedDisturbanceEstimate(cfg, u_d) + u_d).norm(), 1e-10);
}

// Full-state law on the nominal linear loop with a constant matched Ld.
HarnessResult ConstantDisturbanceRun(double tau, bool allow, std::int64_t steps) {
  const DiscreteSystem sys = ManipulatorSystem();
  const UdeConfig cfg(sys, DesignKd(sys, ReferencePoles()), tau, allow);
  const Vec ld = sys.gn * Eigen::Vector2d(100.0, 5.0);
  return RunLinearHarness(sys, cfg, nullptr, Vec::Zero(4), Vec::Zero(4),
                          [&](std::int64_t) { return ld; }, steps);
}

TEST(FilterRecursionTest, GeometricDecay) {
  for (double tau : {0.0075, 0.02, 0.05, 0.1}) {
    const HarnessResult r = ConstantDisturbanceRun(tau, false, 200);
    const double ratio = 1.0 - kTs / tau;
    for (std::size_t k = 0; k + 1 < r.e.size(); ++k) {
      const Vec err0 = r.ld[k] - r.ldhat[k];
      const Vec err1 = r.ld[k + 1] - r.ldhat[k + 1];
      EXPECT_LT((err1 - ratio * err0).norm(), 1e-8) << "tau " << tau << " k " << k;
    }
  }
}

TEST(FilterRecursionTest, DeadbeatAtTauEqualTs) {
  const HarnessResult r = ConstantDisturbanceRun(kTs, false, 100);
  for (std::size_t k = 1; k < r.e.size(); ++k) {
    EXPECT_LT((r.ld[k] - r.ldhat[k]).norm(), 1e-8) << k;
  }
}

TEST(FilterRecursionTest, FastFilterGrowsByOneAndAHalf) {
  const HarnessResult r = ConstantDisturbanceRun(0.4 * kTs, true, 21);
  for (std::size_t k = 0; k < 20; ++k) {
    const double n0 = (r.ld[k] - r.ldhat[k]).norm();
    const double n1 = (r.ld[k + 1] - r.ldhat[k + 1]).norm();
    EXPECT_NEAR(n1 / n0, 1.5, 1.5e-6) << k;
  }
}

}  // namespace
}  // namespace dtude
