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


#ifndef DTUDE_OBSERVER_H_
#define DTUDE_OBSERVER_H_

// Luenberger observer driven by the recovered disturbance estimate, and the
// controller-observer step that feeds the auxiliary error
// e_hat = x_hat - xm to the UDE law.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dtude/discretize.h"
#include "dtude/ude.h"

namespace dtude {

// Which innovation drives the k >= 1 accumulator update of the
// controller-observer law.
//   kLagged:  running sum on e_hat, equivalent to beta (y(k-1) - y_hat(k-1)).
//   kCurrent: beta (y(k) - y_hat(k)).
enum class InnovationTiming { kLagged, kCurrent };

class ObserverConfig {
 public:
  // Throws StabilityError unless rho(Fn - beta C) < 1 or `allow_unstable`
  // is set (test harnesses only).
  ObserverConfig(const DiscreteSystem& sys, Mat beta,
                 InnovationTiming timing = InnovationTiming::kLagged, bool allow_unstable = false);

  const DiscreteSystem& sys() const { return sys_; }
  const Mat& beta() const { return beta_; }
  // Fo = Fn - beta C.
  const Mat& fo() const { return fo_; }
  InnovationTiming timing() const { return timing_; }

 private:
  DiscreteSystem sys_;
  Mat beta_;
  Mat fo_;
  InnovationTiming timing_;
};

struct ObserverState {
  Vec xhat;
  Vec dhat;
  std::int64_t step_index = 0;
  std::optional<Vec> last_innovation;  // y(k-1) - C x_hat(k-1)

  static ObserverState Initial(const Vec& xhat0);
};

// Dual placement on (Fn^T, C^T); returns beta with eig(Fn - beta C) = targets.
// Targets may sit on the unit circle (e.g. leaving the observer open loop).
Mat DesignBeta(const DiscreteSystem& sys, const std::vector<std::vector<Complex>>& targets,
               const std::vector<matlib::InputBlock>& blocks = ManipulatorBlocks());

// Returns a message when the observer is not faster than the controller
// (rho(Fo) >= rho(Fc)); the condition is advisory.
std::optional<std::string> ObserverSpeedWarning(const ObserverConfig& ocfg,
                                                const UdeConfig& ucfg);

// D_hat = -Gn u_d - (Fn - Fm) xm + Gm r.
Vec RecoverDistEstimate(const DiscreteSystem& sys, const Eigen::Ref<const Vec>& u_d,
                        const Eigen::Ref<const Vec>& xm, const Eigen::Ref<const Vec>& r);

// x_hat(k+1) = Fn x_hat + Gn u + D_hat + beta (y - C x_hat).
ObserverState ObserverStep(const ObserverConfig& ocfg, const ObserverState& ost, std::int64_t k,
                           const Eigen::Ref<const Vec>& u, const Eigen::Ref<const Vec>& dhat,
                           const Eigen::Ref<const Vec>& y);

struct ControllerObserverDiagnostics {
  Vec ehat;        // x_hat(k) - xm(k)
  Vec innovation;  // y(k) - C x_hat(k)
  Vec u_d;
  Vec dhat;
  Vec ldhat;  // -Gn u_d
  // Infinity-norm gap between the u_d produced by the running sum on e_hat
  // and the u_d produced by the beta-innovation update; 0 at k = 0.
  double form_mismatch = 0.0;
};

struct ControllerObserverStep {
  Vec u;
  UdeState ude;
  ObserverState observer;
  ControllerObserverDiagnostics diag;
};

// One sample of the output-feedback loop: control from e_hat, disturbance
// recovery, observer update. Reads only y, xm and r.
ControllerObserverStep StepControllerObserver(const UdeConfig& ucfg, const UdeState& ust,
                                              const ObserverConfig& ocfg,
                                              const ObserverState& ost, std::int64_t k,
                                              const Eigen::Ref<const Vec>& xm,
                                              const Eigen::Ref<const Vec>& r,
                                              const Eigen::Ref<const Vec>& y);

}  // namespace dtude

#endif  // DTUDE_OBSERVER_H_
