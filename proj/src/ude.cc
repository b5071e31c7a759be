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
#include <utility>

#include <fmt/format.h>

#include "dtude/errors.h"

namespace dtude {

UdeConfig::UdeConfig(const DiscreteSystem& sys, Mat kd, double tau, bool allow_unstable_filter)
    : tau_(tau), ts_(sys.ts), kd_(std::move(kd)), gn_(sys.gn) {
  if (!std::isfinite(tau_) || tau_ <= 0.0) {
    throw InputError(fmt::format("ude: filter parameter tau must be positive, got {}", tau_));
  }
  if (!(tau_ > ts_ / 2.0) && !allow_unstable_filter) {
    throw StabilityError(fmt::format(
        "ude: filter parameter tau = {} violates tau > Ts/2 = {} (|1 - Ts/tau| = {})", tau_,
        ts_ / 2.0, std::abs(1.0 - ts_ / tau_)));
  }
  if (kd_.rows() != sys.inputs() || kd_.cols() != sys.states()) {
    throw DimensionError(fmt::format("ude: Kd must be {}x{}, got {}x{}", sys.inputs(),
                                     sys.states(), kd_.rows(), kd_.cols()));
  }
  fc_ = sys.fn - sys.gn * kd_;
  const double rho = matlib::SpectralRadius(fc_);
  if (!(rho < 1.0)) {
    throw StabilityError(fmt::format("ude: rho(Fn - Gn Kd) = {} is not < 1", rho));
  }
  gn_pinv_ = matlib::Pinv(gn_);
  filter_gain_ = (ts_ / tau_) * gn_pinv_;
}

UdeState UdeState::Initial(Eigen::Index inputs) { return {Vec::Zero(inputs), std::nullopt, 0}; }

std::vector<matlib::InputBlock> ManipulatorBlocks() { return {{{0, 1}, 0}, {{2, 3}, 1}}; }

Mat DesignKd(const DiscreteSystem& sys, const std::vector<std::vector<Complex>>& targets,
             const std::vector<matlib::InputBlock>& blocks) {
  for (const auto& set : targets) {
    for (const Complex& z : set) {
      if (!(std::abs(z) < 1.0)) {
        throw InputError(fmt::format("design_kd: target {}{:+}i is not inside the unit disk",
                                     z.real(), z.imag()));
      }
    }
  }
  return matlib::PlacePoles(sys.fn, sys.gn, targets, blocks);
}

namespace {

void CheckStep(const UdeConfig& cfg, const UdeState& st, std::int64_t k,
               const Eigen::Ref<const Vec>& err) {
  if (k != st.step_index) {
    throw ProtocolError(
        fmt::format("ude: control step {} requested, controller is at step {}", k, st.step_index));
  }
  if (err.size() != cfg.fc().rows()) {
    throw DimensionError(
        fmt::format("ude: error vector has {} entries, expected {}", err.size(), cfg.fc().rows()));
  }
}

UdeStep Finish(const UdeConfig& cfg, const UdeState& st, const Eigen::Ref<const Vec>& err,
               Vec u_d) {
  UdeStep out;
  out.u = -cfg.kd() * err + u_d;
  out.next = {u_d, Vec(err), st.step_index + 1};
  out.u_d = std::move(u_d);
  return out;
}

}  // namespace

UdeStep ControlStep(const UdeConfig& cfg, const UdeState& st, std::int64_t k,
                    const Eigen::Ref<const Vec>& err) {
  CheckStep(cfg, st, k, err);
  if (k == 0) return Finish(cfg, st, err, -cfg.filter_gain() * err);
  return ControlStepWithIncrement(cfg, st, k, err, err - cfg.fc() * *st.prev_error);
}

UdeStep ControlStepWithIncrement(const UdeConfig& cfg, const UdeState& st, std::int64_t k,
                                 const Eigen::Ref<const Vec>& err,
                                 const Eigen::Ref<const Vec>& increment) {
  CheckStep(cfg, st, k, err);
  if (k == 0 || !st.prev_error) {
    throw ProtocolError("ude: the increment form is undefined at k = 0");
  }
  return Finish(cfg, st, err, st.accumulator - cfg.filter_gain() * increment);
}

Vec LumpedDisturbanceEstimate(const UdeConfig& cfg, const Eigen::Ref<const Vec>& u_d) {
  return -cfg.gn() * u_d;
}

}  // namespace dtude
