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

#include <fmt/format.h>

#include "dtude/errors.h"

namespace dtude {

ManipulatorParams ManipulatorParams::Actual() { return {2.0, 1.0, 2.0, 1.0, 9.8}; }

ManipulatorParams ManipulatorParams::Uncertain() { return {2.4, 1.3, 2.5, 1.2, 9.8}; }

void ManipulatorParams::Validate() const {
  const struct {
    const char* name;
    double value;
  } fields[] = {{"m1", m1}, {"m2", m2}, {"l1", l1}, {"l2", l2}, {"g", g}};
  for (const auto& f : fields) {
    if (!std::isfinite(f.value) || f.value <= 0.0) {
      throw InputError(fmt::format("manipulator parameter {} must be finite and > 0, got {}",
                                   f.name, f.value));
    }
  }
}

JointState JointState::FromVector(const Eigen::Ref<const Vec>& x) {
  if (x.size() != 4) {
    throw DimensionError(fmt::format("joint state needs 4 entries, got {}", x.size()));
  }
  return {x(0), x(2), x(1), x(3)};
}

Eigen::Vector4d JointState::ToVector() const { return {theta1, dtheta1, theta2, dtheta2}; }

Torque Torque::FromVector(const Eigen::Ref<const Vec>& u) {
  if (u.size() != 2) throw DimensionError(fmt::format("torque needs 2 entries, got {}", u.size()));
  return {u(0), u(1)};
}

Eigen::Vector2d GravityVector(const ManipulatorParams& p, double theta1, double theta2) {
  const double s12 = std::sin(theta1 + theta2);
  return {(p.m1 + p.m2) * p.g * p.l1 * std::sin(theta1) + p.m2 * p.g * p.l2 * s12,
          p.m2 * p.g * p.l2 * s12};
}

MckTerms EvalMck(const ManipulatorParams& p, const JointState& s) {
  const double c2 = std::cos(s.theta2);
  const double s2 = std::sin(s.theta2);
  const double l1l2 = p.l1 * p.l2;
  MckTerms out;
  const double off = p.m2 * (p.l2 * p.l2 + l1l2 * c2);
  out.inertia << p.m1 * p.l1 * p.l1 + p.m2 * (p.l1 * p.l1 + p.l2 * p.l2 + 2.0 * l1l2 * c2), off,
      off, p.m2 * p.l2 * p.l2;
  out.coriolis << -p.m2 * l1l2 * s2 * s.dtheta2 * (2.0 * s.dtheta1 + s.dtheta2),
      p.m2 * l1l2 * s2 * s.dtheta1 * s.dtheta1;
  out.gravity = GravityVector(p, s.theta1, s.theta2);
  return out;
}

namespace {

Eigen::Vector2d SolveInertia(const Eigen::Matrix2d& m, const Eigen::Vector2d& rhs) {
  const double det = m.determinant();
  if (!(std::abs(det) > 1e-12 * m.squaredNorm())) {
    throw SingularityError(fmt::format("inertia matrix is singular (det = {:.3e})", det));
  }
  return Eigen::Vector2d(m(1, 1) * rhs(0) - m(0, 1) * rhs(1),
                         m(0, 0) * rhs(1) - m(1, 0) * rhs(0)) /
         det;
}

}  // namespace

Eigen::Vector4d ForwardDynamics(const ManipulatorParams& p, const JointState& s, const Torque& u,
                                const Eigen::Vector2d& d_ext) {
  const MckTerms t = EvalMck(p, s);
  const Eigen::Vector2d acc = SolveInertia(t.inertia, u.ToVector() - t.coriolis - t.gravity) + d_ext;
  return {s.dtheta1, acc(0), s.dtheta2, acc(1)};
}

Eigen::Vector2d TotalDisturbance(const ManipulatorParams& p_actual,
                                 const Eigen::Vector2d& m0_inv_diag, const JointState& s,
                                 const Torque& u, const Eigen::Vector2d& d_ext) {
  const MckTerms t = EvalMck(p_actual, s);
  const Eigen::Vector2d tau = u.ToVector();
  return d_ext - SolveInertia(t.inertia, t.coriolis + t.gravity) + SolveInertia(t.inertia, tau) -
         m0_inv_diag.cwiseProduct(tau);
}

Eigen::Vector2d NominalMu(const ManipulatorParams& p) {
  const double reach = p.l1 + p.l2;
  return {1.0 / (p.m1 * p.l1 * p.l1 + p.m2 * reach * reach), 1.0 / (p.m2 * p.l2 * p.l2)};
}

NominalModel NominalInputMatrix(const ManipulatorParams& p) {
  const Eigen::Vector2d mu = NominalMu(p);
  NominalModel model{Mat::Zero(4, 4), Mat::Zero(4, 2)};
  model.a(0, 1) = 1.0;
  model.a(2, 3) = 1.0;
  model.b(1, 0) = mu(0);
  model.b(3, 1) = mu(1);
  return model;
}

Mat JointAngleOutput() {
  Mat c = Mat::Zero(2, 4);
  c(0, 0) = 1.0;
  c(1, 2) = 1.0;
  return c;
}

}  // namespace dtude
