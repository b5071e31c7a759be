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


#ifndef DTUDE_UDE_H_
#define DTUDE_UDE_H_

// Discrete-time uncertainty and disturbance estimator. The lumped
// disturbance is estimated through the first-order filter 1/(1 + tau s)
// realized as a running sum, and cancelled through the input.

#include <cstdint>
#include <optional>
#include <vector>

#include "dtude/discretize.h"
#include "dtude/matlib.h"

namespace dtude {

class UdeConfig {
 public:
  // Validates tau > Ts/2 and rho(Fn - Gn Kd) < 1. The filter condition can
  // be bypassed with `allow_unstable_filter` (test harnesses only).
  UdeConfig(const DiscreteSystem& sys, Mat kd, double tau, bool allow_unstable_filter = false);

  double tau() const { return tau_; }
  double ts() const { return ts_; }
  const Mat& kd() const { return kd_; }
  const Mat& gn() const { return gn_; }
  const Mat& gn_pinv() const { return gn_pinv_; }
  // Fc = Fn - Gn Kd.
  const Mat& fc() const { return fc_; }
  // (Ts / tau) pinv(Gn).
  const Mat& filter_gain() const { return filter_gain_; }

 private:
  double tau_;
  double ts_;
  Mat kd_;
  Mat gn_;
  Mat gn_pinv_;
  Mat fc_;
  Mat filter_gain_;
};

struct UdeState {
  Vec accumulator;                // u_d(k-1)
  std::optional<Vec> prev_error;  // e(k-1); empty before the first step
  std::int64_t step_index = 0;

  static UdeState Initial(Eigen::Index inputs);
};

struct UdeStep {
  Vec u;
  Vec u_d;
  UdeState next;
};

// Single-input chains of the manipulator pair: joint 1 states {0, 1} driven
// by torque 0 and joint 2 states {2, 3} driven by torque 1.
std::vector<matlib::InputBlock> ManipulatorBlocks();

// Kd with eig(Fn - Gn Kd) = targets, one target set per block.
Mat DesignKd(const DiscreteSystem& sys, const std::vector<std::vector<Complex>>& targets,
             const std::vector<matlib::InputBlock>& blocks = ManipulatorBlocks());

// One step of the control law at sample k = st.step_index.
//   k = 0:  u_d = -(Ts/tau) Gn^+ e(0)
//   k >= 1: u_d = u_d(k-1) - (Ts/tau) Gn^+ (e(k) - Fc e(k-1))
//   u = -Kd e(k) + u_d
// `k` must equal st.step_index (ProtocolError otherwise).
UdeStep ControlStep(const UdeConfig& cfg, const UdeState& st, std::int64_t k,
                    const Eigen::Ref<const Vec>& err);

// Same as ControlStep for k >= 1 but with an externally supplied error
// increment e(k) - Fc e(k-1); used by the innovation-driven controller form.
UdeStep ControlStepWithIncrement(const UdeConfig& cfg, const UdeState& st, std::int64_t k,
                                 const Eigen::Ref<const Vec>& err,
                                 const Eigen::Ref<const Vec>& increment);

// Ld_hat = -Gn u_d.
Vec LumpedDisturbanceEstimate(const UdeConfig& cfg, const Eigen::Ref<const Vec>& u_d);

}  // namespace dtude

#endif  // DTUDE_UDE_H_
