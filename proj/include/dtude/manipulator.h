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


#ifndef DTUDE_MANIPULATOR_H_
#define DTUDE_MANIPULATOR_H_

// Planar two-link arm: Euler-Lagrange terms, forward dynamics and the
// decoupled double-integrator nominal model used by the discrete controller.
//
// State ordering throughout the library is x = [theta1, dtheta1, theta2,
// dtheta2].

#include <Eigen/Dense>

#include "dtude/matlib.h"

namespace dtude {

struct ManipulatorParams {
  double m1 = 2.0;  // kg
  double m2 = 1.0;  // kg
  double l1 = 2.0;  // m
  double l2 = 1.0;  // m
  double g = 9.8;   // m/s^2

  // The arm that is simulated.
  static ManipulatorParams Actual();
  // The perturbed model a controller is allowed to know.
  static ManipulatorParams Uncertain();

  // Throws InputError unless every field is finite and strictly positive.
  void Validate() const;
};

struct JointState {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double dtheta1 = 0.0;
  double dtheta2 = 0.0;

  static JointState FromVector(const Eigen::Ref<const Vec>& x);
  Eigen::Vector4d ToVector() const;
};

struct Torque {
  double tau1 = 0.0;
  double tau2 = 0.0;

  static Torque FromVector(const Eigen::Ref<const Vec>& u);
  Eigen::Vector2d ToVector() const { return {tau1, tau2}; }
};

struct MckTerms {
  Eigen::Matrix2d inertia;   // M(theta)
  Eigen::Vector2d coriolis;  // C(theta, dtheta)
  Eigen::Vector2d gravity;   // K(theta)
};

MckTerms EvalMck(const ManipulatorParams& p, const JointState& s);

// Gravity vector alone; cheaper than EvalMck when only K(theta) is needed.
Eigen::Vector2d GravityVector(const ManipulatorParams& p, double theta1, double theta2);

// [dtheta1, ddtheta1, dtheta2, ddtheta2] with
// ddtheta = M^{-1} (tau - C - K) + d_ext.
Eigen::Vector4d ForwardDynamics(const ManipulatorParams& p, const JointState& s, const Torque& u,
                                const Eigen::Vector2d& d_ext);

// d = d_ext - M^{-1}(C + K) + (M^{-1} - M0^{-1}) tau, with M0^{-1} diagonal.
Eigen::Vector2d TotalDisturbance(const ManipulatorParams& p_actual,
                                 const Eigen::Vector2d& m0_inv_diag, const JointState& s,
                                 const Torque& u, const Eigen::Vector2d& d_ext);

// Diagonal of M0^{-1}: mu1 = 1/(m1 l1^2 + m2 (l1 + l2)^2), mu2 = 1/(m2 l2^2).
Eigen::Vector2d NominalMu(const ManipulatorParams& p);

struct NominalModel {
  Mat a;  // 4x4 double-integrator pair
  Mat b;  // 4x2, mu1 and mu2 in rows 2 and 4
};

NominalModel NominalInputMatrix(const ManipulatorParams& p);

// The 4x2 output map y = [theta1, theta2].
Mat JointAngleOutput();

}  // namespace dtude

#endif  // DTUDE_MANIPULATOR_H_
