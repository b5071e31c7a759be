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


#ifndef DTUDE_SIMKERN_H_
#define DTUDE_SIMKERN_H_

// Sampled-data closed loop: the continuous arm and reference model are
// integrated with fixed-step RK4 while the discrete controller output is
// held between samples.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dtude/baselines.h"
#include "dtude/discretize.h"
#include "dtude/manipulator.h"
#include "dtude/observer.h"
#include "dtude/ude.h"

namespace dtude {

enum class ControllerKind { kDtUde, kCtUde, kSmc, kPdGravity };

std::string_view ControllerName(ControllerKind kind);
// Throws ConfigError listing the valid names.
ControllerKind ParseControllerName(std::string_view name);

// Which parameter set builds the nominal input matrix (M0) of the UDE laws.
enum class NominalSource { kActual, kUncertain };

// Which vector the DT-UDE law is closed on.
enum class UdeFeedback { kObserver, kState };

// r_i(t) = amp_i sin(freq_i t).
struct SineReference {
  double amp1 = 5.0;
  double freq1 = 1.0;
  double amp2 = 5.0;
  double freq2 = 2.0;

  Eigen::Vector2d operator()(double t) const;
};

// Joint-angle dependent disturbance gain_i sin(2 pi cycles theta_i).
struct JointDisturbance {
  double gain1 = 20.0;
  double gain2 = 10.0;
  double cycles = 1.0;

  Eigen::Vector2d operator()(const Eigen::Vector4d& x) const;
};

struct Scenario {
  ManipulatorParams actual = ManipulatorParams::Actual();
  ManipulatorParams uncertain = ManipulatorParams::Uncertain();
  Mat am;
  Mat bm;
  SineReference reference;
  JointDisturbance disturbance;
  double ts = 0.01;
  int substeps = 10;
  double duration = 20.0;
  // Sample and hold r at each Ts (true) or feed the reference model r(t).
  bool hold_reference = true;
  Vec x0 = Vec::Zero(4);
  Vec xm0 = Vec::Zero(4);
  Vec xhat0 = Vec::Zero(4);
  double divergence_limit = 1e6;

  ControllerKind controller = ControllerKind::kDtUde;

  // DT-UDE.
  double tau = 0.01;
  bool allow_unstable_filter = false;
  NominalSource nominal = NominalSource::kActual;
  UdeFeedback feedback = UdeFeedback::kObserver;
  InnovationTiming innovation = InnovationTiming::kLagged;
  // Observer poles are this multiple of eig(Fm).
  double observer_pole_scale = 0.1;

  // Baselines.
  SmcConfig smc;
  PdConfig pd;
  double ct_tau = 0.01;

  // Nominal arm, reference model with poles {-1, -2} per joint, zero
  // initial conditions, 20 s.
  static Scenario Default();
  // As Default with theta(0) = [1, -1], dtheta(0) = [0, 1].
  static Scenario NonzeroInitial();

  std::int64_t samples() const;  // duration / Ts
  void Validate() const;
};

struct DtUdeDesign {
  DiscreteSystem sys;
  Mat kd;
  Mat beta;
  std::vector<std::vector<Complex>> kd_targets;
  std::vector<std::vector<Complex>> beta_targets;
};

// Nominal (A, B) of the UDE laws for the scenario's M0 choice.
NominalModel ScenarioNominalModel(const Scenario& sc);

// Discretizes the scenario and places eig(Fn - Gn Kd) at eig(Fm) and
// eig(Fn - beta C) at observer_pole_scale * eig(Fm), block by block.
DtUdeDesign DesignDtUde(const Scenario& sc);

// Continuous gain with eig(A - B K) = eig(Am).
Mat DesignContinuousK(const Scenario& sc);

struct DivergenceReport {
  double time = 0.0;
  std::int64_t step = 0;
  double norm = 0.0;
  std::string what;
};

struct SimTrace {
  std::string controller;
  double ts = 0.0;
  std::vector<double> t;
  std::vector<Vec> x, xm, xhat, y, yhat, u, u_d, dhat, ldhat, ld, ehat, ese, e;
  std::vector<double> form_mismatch;
  std::optional<DivergenceReport> divergence;

  std::size_t size() const { return t.size(); }
};

// Classical RK4. Throws NumericalError (with the time stamp) when f returns
// a non-finite derivative.
Vec Rk4Step(const std::function<Vec(double, const Vec&)>& f, const Vec& x, double t, double h);

// Runs the scenario. A state norm above `divergence_limit` (or a failure in
// the plant model) stops the run and sets `divergence`; the trace holds the
// samples logged up to that point.
SimTrace RunClosedLoop(const Scenario& sc);

struct MetricWindows {
  double estimation_fraction = 0.2;  // final share of the run for RMS ||Ld - Ld_hat||
  double final_seconds = 1.0;        // final-window RMS tracking error
  double band_seconds = 5.0;         // final-window peak tracking error
};

struct Metrics {
  Eigen::Vector2d ise = Eigen::Vector2d::Zero();  // sum e_theta_i^2 Ts
  double control_energy = 0.0;                    // sum ||u||^2 Ts over k < N
  Eigen::Vector2d peak_torque = Eigen::Vector2d::Zero();
  double estimation_rms = 0.0;  // RMS ||Ld - Ld_hat|| over the estimation window
  double ld_rms = 0.0;          // RMS ||Ld|| over the same window
  Eigen::Vector2d final_rms_error = Eigen::Vector2d::Zero();
  Eigen::Vector2d band_peak_error = Eigen::Vector2d::Zero();
  Eigen::Vector2d band_reference_peak = Eigen::Vector2d::Zero();  // max |theta_m,i|
  // Time after which |e_theta_i| stays below 2% of the reference peak.
  Eigen::Vector2d settling_time = Eigen::Vector2d::Zero();
  bool diverged = false;
};

// Throws InputError for an empty trace.
Metrics ComputeMetrics(const SimTrace& tr, const MetricWindows& windows = {});

struct MatchingResidual {
  double max_ratio = 0.0;        // max_k ||(I - Gn Gn^+) Ld|| / ||Ld||
  double aggregate_ratio = 0.0;  // sqrt(sum ||(I - Gn Gn^+) Ld||^2 / sum ||Ld||^2)
  std::size_t samples = 0;
};

MatchingResidual ComputeMatchingResidual(const DiscreteSystem& sys, const SimTrace& tr);

// xi(k) = [e_hat; e_SE; Ld - Ld_hat] for every logged sample.
std::vector<Vec> StackedErrors(const SimTrace& tr);

// max_k ||Ld(k+1) - Ld(k)||.
double MaxDisturbanceIncrement(const SimTrace& tr);

// Nominal linear loop x(k+1) = Fn x + Gn u + Ld(k) with xm = 0 and r = 0, so
// that e = x. Used to exercise the estimator recursions in isolation.
struct HarnessResult {
  std::vector<Vec> e, ehat, ese, ld, ldhat, u_d, u;
  std::vector<double> form_mismatch;
  std::optional<DivergenceReport> divergence;
};

// `ocfg` null selects the full-state law on e; otherwise the
// controller-observer law on e_hat with observer initial state `xhat0`.
HarnessResult RunLinearHarness(const DiscreteSystem& sys, const UdeConfig& ucfg,
                               const ObserverConfig* ocfg, const Vec& x0, const Vec& xhat0,
                               const std::function<Vec(std::int64_t)>& ld, std::int64_t steps,
                               double divergence_limit = 1e6);

}  // namespace dtude

#endif  // DTUDE_SIMKERN_H_
