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


#ifndef DTUDE_STABILITY_H_
#define DTUDE_STABILITY_H_

// Closed-loop error dynamics of the controller-observer pair in the stacked
// coordinates xi = [e_hat; e_SE; Ld_tilde]:
//
//   xi(k+1) = Acal xi(k) + eta(k),   eta(k) = [0; 0; Delta Ld(k)]
//
//   Acal = [[Fc, beta C, 0],
//           [0,  Fo,     I],
//           [0,  0,      (1 - Ts/tau) I]]

#include <string>
#include <vector>

#include "dtude/discretize.h"
#include "dtude/matlib.h"

namespace dtude {

struct ErrorDynamics {
  Mat acal;
  Mat fc;  // Fn - Gn Kd
  Mat fo;  // Fn - beta C
  Mat t;   // (1 - Ts/tau) I
};

ErrorDynamics Assemble(const DiscreteSystem& sys, const Mat& kd, const Mat& beta, double tau);

// Largest distance between eig(Acal) and the union of the diagonal-block
// spectra.
double BlockSpectrumMismatch(const ErrorDynamics& ed);

struct ConditionCheck {
  std::string name;
  double value = 0.0;  // spectral radius (or |1 - Ts/tau|)
  bool pass = false;
};

struct ConditionReport {
  ConditionCheck controller;
  ConditionCheck observer;
  ConditionCheck filter;

  bool all_pass() const { return controller.pass && observer.pass && filter.pass; }
};

ConditionReport CheckConditions(const ErrorDynamics& ed, double ts, double tau);

struct ConvergenceBall {
  Mat p;
  double p_max = 0.0;
  double acal_norm = 0.0;  // induced 2-norm
  double residual = 0.0;   // ||Acal^T P Acal - P + I||_F
  double radius = 0.0;
};

// P from Acal^T P Acal - P = -I and
//   R = eta (||Acal|| p_max + sqrt(||Acal||^2 p_max^2 + p_max)).
// Throws StabilityError when rho(Acal) >= 1 or eta_norm < 0.
ConvergenceBall ConvergenceRadius(const ErrorDynamics& ed, double eta_norm);

struct LyapunovAudit {
  int samples = 0;        // transitions examined
  int outside_ball = 0;   // transitions starting with ||xi|| > R
  int violations = 0;     // of those, V(k+1) - V(k) >= 0
  double max_norm = 0.0;  // max ||xi(k)||
  double tail_max_norm = 0.0;  // max ||xi(k)|| over the final quarter
};

// Checks V = xi^T P xi along a trajectory: whenever ||xi(k)|| > R the
// difference V(k+1) - V(k) must be negative.
LyapunovAudit AuditLyapunov(const Mat& p, double radius, const std::vector<Vec>& xi);

}  // namespace dtude

#endif  // DTUDE_STABILITY_H_
