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


#include "dtude/observer.h"

#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "dtude/errors.h"

namespace dtude {

ObserverConfig::ObserverConfig(const DiscreteSystem& sys, Mat beta, InnovationTiming timing,
                               bool allow_unstable)
    : sys_(sys), beta_(std::move(beta)), timing_(timing) {
  if (beta_.rows() != sys_.states() || beta_.cols() != sys_.outputs()) {
    throw DimensionError(fmt::format("observer: beta must be {}x{}, got {}x{}", sys_.states(),
                                     sys_.outputs(), beta_.rows(), beta_.cols()));
  }
  fo_ = sys_.fn - beta_ * sys_.c;
  const double rho = matlib::SpectralRadius(fo_);
  if (!(rho < 1.0) && !allow_unstable) {
    throw StabilityError(fmt::format("observer: rho(Fn - beta C) = {} is not < 1", rho));
  }
}

ObserverState ObserverState::Initial(const Vec& xhat0) {
  return {xhat0, Vec::Zero(xhat0.size()), 0, std::nullopt};
}

Mat DesignBeta(const DiscreteSystem& sys, const std::vector<std::vector<Complex>>& targets,
               const std::vector<matlib::InputBlock>& blocks) {
  for (const auto& set : targets) {
    for (const Complex& z : set) {
      if (!(std::abs(z) <= 1.0 + 1e-12)) {
        throw InputError(fmt::format("design_beta: target {}{:+}i is outside the unit disk",
                                     z.real(), z.imag()));
      }
    }
  }
  try {
    return matlib::PlacePoles(sys.fn.transpose(), sys.c.transpose(), targets, blocks).transpose();
  } catch (const ControllabilityError& e) {
    throw ControllabilityError(fmt::format("design_beta: (C, Fn) block is not observable ({})",
                                           e.what()));
  }
}

std::optional<std::string> ObserverSpeedWarning(const ObserverConfig& ocfg,
                                                const UdeConfig& ucfg) {
  const double rho_o = matlib::SpectralRadius(ocfg.fo());
  const double rho_c = matlib::SpectralRadius(ucfg.fc());
  if (rho_o < rho_c) return std::nullopt;
  return fmt::format("observer is not faster than the controller: rho(Fo) = {:.6f} >= rho(Fc) = {:.6f}",
                     rho_o, rho_c);
}

Vec RecoverDistEstimate(const DiscreteSystem& sys, const Eigen::Ref<const Vec>& u_d,
                        const Eigen::Ref<const Vec>& xm, const Eigen::Ref<const Vec>& r) {
  return -sys.gn * u_d - (sys.fn - sys.fm) * xm + sys.gm * r;
}

ObserverState ObserverStep(const ObserverConfig& ocfg, const ObserverState& ost, std::int64_t k,
                           const Eigen::Ref<const Vec>& u, const Eigen::Ref<const Vec>& dhat,
                           const Eigen::Ref<const Vec>& y) {
  if (k != ost.step_index) {
    throw ProtocolError(fmt::format("observer: step {} requested, observer is at step {}", k,
                                    ost.step_index));
  }
  const DiscreteSystem& sys = ocfg.sys();
  if (u.size() != sys.inputs() || dhat.size() != sys.states() || y.size() != sys.outputs()) {
    throw DimensionError("observer: input, disturbance or output has the wrong size");
  }
  Vec innovation = y - sys.c * ost.xhat;
  ObserverState next;
  next.xhat = sys.fn * ost.xhat + sys.gn * u + dhat + ocfg.beta() * innovation;
  next.dhat = dhat;
  next.step_index = ost.step_index + 1;
  next.last_innovation = std::move(innovation);
  return next;
}

ControllerObserverStep StepControllerObserver(const UdeConfig& ucfg, const UdeState& ust,
                                              const ObserverConfig& ocfg,
                                              const ObserverState& ost, std::int64_t k,
                                              const Eigen::Ref<const Vec>& xm,
                                              const Eigen::Ref<const Vec>& r,
                                              const Eigen::Ref<const Vec>& y) {
  if (ust.step_index != ost.step_index) {
    throw ProtocolError(fmt::format("controller at step {} but observer at step {}",
                                    ust.step_index, ost.step_index));
  }
  const DiscreteSystem& sys = ocfg.sys();
  ControllerObserverDiagnostics diag;
  diag.ehat = ost.xhat - xm;
  diag.innovation = y - sys.c * ost.xhat;

  UdeStep control = ControlStep(ucfg, ust, k, diag.ehat);
  if (k > 0) {
    if (!ost.last_innovation) throw ProtocolError("observer has no previous innovation");
    const Vec lagged = ust.accumulator - ucfg.filter_gain() * (ocfg.beta() * *ost.last_innovation);
    if (ocfg.timing() == InnovationTiming::kCurrent) {
      UdeStep current = ControlStepWithIncrement(ucfg, ust, k, diag.ehat,
                                                 ocfg.beta() * diag.innovation);
      diag.form_mismatch = (current.u_d - control.u_d).lpNorm<Eigen::Infinity>();
      control = std::move(current);
    } else {
      diag.form_mismatch = (lagged - control.u_d).lpNorm<Eigen::Infinity>();
    }
  }
  diag.u_d = control.u_d;
  diag.dhat = RecoverDistEstimate(sys, control.u_d, xm, r);
  diag.ldhat = LumpedDisturbanceEstimate(ucfg, control.u_d);

  ControllerObserverStep out;
  out.observer = ObserverStep(ocfg, ost, k, control.u, diag.dhat, y);
  out.u = std::move(control.u);
  out.ude = std::move(control.next);
  out.diag = std::move(diag);
  return out;
}

}  // namespace dtude
