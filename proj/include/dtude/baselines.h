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


#ifndef DTUDE_BASELINES_H_
#define DTUDE_BASELINES_H_

// Continuous-time comparison controllers with full state access: sliding
// mode with a boundary layer, gravity-compensated PD and continuous-time
// UDE. All errors are e = x - xm in the [theta1, dtheta1, theta2, dtheta2]
// ordering.

#include <optional>

#include <Eigen/Dense>

#include "dtude/manipulator.h"
#include "dtude/matlib.h"

namespace dtude {

// s / ||s|| outside the boundary layer ||s|| > epsilon, s / epsilon inside.
Eigen::Vector2d Sat(const Eigen::Vector2d& s, double epsilon);

struct SmcConfig {
  Mat k;                     // 2x4 state feedback
  Eigen::Vector2d d_bounds;  // diagonal of D
  double epsilon = 0.1;
  double kd_slide = 7.0;
  ManipulatorParams model = ManipulatorParams::Uncertain();

  void Validate() const;
};

// tau = -K e + tau_ff - D sat(s / epsilon), where
//   tau_ff = M_hat(theta) ddtheta_m + C_hat + K_hat,
//   s_i = de_i + kd_slide e_i per joint.
Eigen::Vector2d SmcControl(const SmcConfig& cfg, const Eigen::Vector4d& x,
                           const Eigen::Vector4d& xm, const Eigen::Vector2d& ddtheta_m);

struct PdConfig {
  double kp = 1.0;
  double kd = 0.1;
  ManipulatorParams model = ManipulatorParams::Uncertain();
};

// tau = -Kp (theta - theta_m) - Kd (dtheta - dtheta_m) + K(theta).
Eigen::Vector2d PdGravityControl(const PdConfig& cfg, const Eigen::Vector4d& x,
                                 const Eigen::Vector4d& xm);

class CtUdeConfig {
 public:
  CtUdeConfig(Mat a, Mat b, Mat k, double tau);

  const Mat& k() const { return k_; }
  double tau() const { return tau_; }
  const Mat& b_pinv() const { return b_pinv_; }
  // A - B K.
  const Mat& closed_loop() const { return closed_loop_; }

 private:
  Mat k_;
  double tau_;
  Mat b_pinv_;
  Mat closed_loop_;
};

struct CtUdeState {
  Vec integral;                   // trapezoidal int e dt
  std::optional<Vec> prev_error;  // empty before the first evaluation

  static CtUdeState Initial(Eigen::Index states);
};

struct CtUdeStep {
  Eigen::Vector2d u;
  CtUdeState next;
};

// Advances the integral by the trapezoid (prev_error + e) dt / 2, then
// u = -K e - (1/tau) B^+ [e - (A - B K) int e dt]. On the first call the
// integral stays at zero and `dt` is ignored.
CtUdeStep CtUdeControl(const CtUdeConfig& cfg, const CtUdeState& st, const Vec& e, double dt);

}  // namespace dtude

#endif  // DTUDE_BASELINES_H_
