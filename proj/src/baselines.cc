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
#include <utility>

#include <fmt/format.h>

#include "dtude/errors.h"

namespace dtude {

Eigen::Vector2d Sat(const Eigen::Vector2d& s, double epsilon) {
  const double norm = s.norm();
  if (norm > epsilon) return s / norm;
  return s / epsilon;
}

void SmcConfig::Validate() const {
  if (k.rows() != 2 || k.cols() != 4) throw DimensionError("smc: K must be 2x4");
  if (!(epsilon > 0.0)) throw InputError(fmt::format("smc: epsilon must be > 0, got {}", epsilon));
  if (!(d_bounds.array() >= 0.0).all()) throw InputError("smc: uncertainty bounds must be >= 0");
  model.Validate();
}

Eigen::Vector2d SmcControl(const SmcConfig& cfg, const Eigen::Vector4d& x,
                           const Eigen::Vector4d& xm, const Eigen::Vector2d& ddtheta_m) {
  const Eigen::Vector4d e = x - xm;
  const MckTerms hat = EvalMck(cfg.model, JointState::FromVector(x));
  const Eigen::Vector2d tau_ff = hat.inertia * ddtheta_m + hat.coriolis + hat.gravity;
  const Eigen::Vector2d s(e(1) + cfg.kd_slide * e(0), e(3) + cfg.kd_slide * e(2));
  const Eigen::Vector2d tau_d = cfg.d_bounds.asDiagonal() * Sat(s, cfg.epsilon);
  return -cfg.k * e + tau_ff - tau_d;
}

Eigen::Vector2d PdGravityControl(const PdConfig& cfg, const Eigen::Vector4d& x,
                                 const Eigen::Vector4d& xm) {
  const Eigen::Vector2d pos_err(x(0) - xm(0), x(2) - xm(2));
  const Eigen::Vector2d vel_err(x(1) - xm(1), x(3) - xm(3));
  return -cfg.kp * pos_err - cfg.kd * vel_err + GravityVector(cfg.model, x(0), x(2));
}

CtUdeConfig::CtUdeConfig(Mat a, Mat b, Mat k, double tau) : k_(std::move(k)), tau_(tau) {
  if (!(tau_ > 0.0) || !std::isfinite(tau_)) {
    throw InputError(fmt::format("ct-ude: tau must be > 0, got {}", tau_));
  }
  if (a.rows() != a.cols() || b.rows() != a.rows() || k_.rows() != b.cols() ||
      k_.cols() != a.cols()) {
    throw DimensionError("ct-ude: A, B, K shapes are inconsistent");
  }
  b_pinv_ = matlib::Pinv(b);
  closed_loop_ = a - b * k_;
}

CtUdeState CtUdeState::Initial(Eigen::Index states) { return {Vec::Zero(states), std::nullopt}; }

CtUdeStep CtUdeControl(const CtUdeConfig& cfg, const CtUdeState& st, const Vec& e, double dt) {
  if (e.size() != cfg.closed_loop().rows()) throw DimensionError("ct-ude: error has wrong size");
  CtUdeStep out;
  out.next.integral = st.integral;
  if (st.prev_error) {
    if (!(dt > 0.0)) throw InputError(fmt::format("ct-ude: dt must be > 0, got {}", dt));
    out.next.integral += 0.5 * dt * (*st.prev_error + e);
  }
  out.next.prev_error = e;
  out.u = -cfg.k() * e -
          (1.0 / cfg.tau()) * cfg.b_pinv() * (e - cfg.closed_loop() * out.next.integral);
  return out;
}

}  // namespace dtude
