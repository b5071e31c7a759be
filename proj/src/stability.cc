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


#include "dtude/stability.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "dtude/errors.h"

namespace dtude {

ErrorDynamics Assemble(const DiscreteSystem& sys, const Mat& kd, const Mat& beta, double tau) {
  const Eigen::Index n = sys.states();
  if (kd.rows() != sys.inputs() || kd.cols() != n || beta.rows() != n ||
      beta.cols() != sys.outputs()) {
    throw DimensionError("assemble: Kd or beta has the wrong shape");
  }
  if (!(tau > 0.0)) throw InputError(fmt::format("assemble: tau must be > 0, got {}", tau));
  ErrorDynamics ed;
  ed.fc = sys.fn - sys.gn * kd;
  ed.fo = sys.fn - beta * sys.c;
  ed.t = (1.0 - sys.ts / tau) * Mat::Identity(n, n);
  ed.acal = Mat::Zero(3 * n, 3 * n);
  ed.acal.block(0, 0, n, n) = ed.fc;
  ed.acal.block(0, n, n, n) = beta * sys.c;
  ed.acal.block(n, n, n, n) = ed.fo;
  ed.acal.block(n, 2 * n, n, n) = Mat::Identity(n, n);
  ed.acal.block(2 * n, 2 * n, n, n) = ed.t;
  return ed;
}

double BlockSpectrumMismatch(const ErrorDynamics& ed) {
  std::vector<Complex> blocks = matlib::Eigenvalues(ed.fc);
  for (const Mat* m : {&ed.fo, &ed.t}) {
    const std::vector<Complex> ev = matlib::Eigenvalues(*m);
    blocks.insert(blocks.end(), ev.begin(), ev.end());
  }
  return matlib::MaxEigenvalueMismatch(matlib::Eigenvalues(ed.acal), blocks);
}

ConditionReport CheckConditions(const ErrorDynamics& ed, double ts, double tau) {
  ConditionReport report;
  const double rc = matlib::SpectralRadius(ed.fc);
  const double ro = matlib::SpectralRadius(ed.fo);
  const double rf = std::abs(1.0 - ts / tau);
  report.controller = {"rho(Fn - Gn Kd) < 1", rc, rc < 1.0};
  report.observer = {"rho(Fn - beta C) < 1", ro, ro < 1.0};
  report.filter = {"|1 - Ts/tau| < 1 (tau > Ts/2)", rf, rf < 1.0};
  return report;
}

ConvergenceBall ConvergenceRadius(const ErrorDynamics& ed, double eta_norm) {
  if (!(eta_norm >= 0.0) || !std::isfinite(eta_norm)) {
    throw StabilityError(fmt::format("convergence_radius: eta_norm must be >= 0, got {}", eta_norm));
  }
  ConvergenceBall ball;
  ball.p = matlib::SolveDlyap(ed.acal);
  ball.residual = matlib::DlyapResidual(ed.acal, ball.p);
  for (const Complex& ev : matlib::Eigenvalues(ball.p)) ball.p_max = std::max(ball.p_max, ev.real());
  ball.acal_norm = matlib::SpectralNorm(ed.acal);
  const double ap = ball.acal_norm * ball.p_max;
  ball.radius = eta_norm * (ap + std::sqrt(ap * ap + ball.p_max));
  return ball;
}

LyapunovAudit AuditLyapunov(const Mat& p, double radius, const std::vector<Vec>& xi) {
  LyapunovAudit audit;
  const std::size_t tail_start = xi.size() - xi.size() / 4;
  for (std::size_t k = 0; k < xi.size(); ++k) {
    const double norm = xi[k].norm();
    audit.max_norm = std::max(audit.max_norm, norm);
    if (k >= tail_start) audit.tail_max_norm = std::max(audit.tail_max_norm, norm);
    if (k + 1 == xi.size()) break;
    ++audit.samples;
    if (norm <= radius) continue;
    ++audit.outside_ball;
    const double dv = xi[k + 1].dot(p * xi[k + 1]) - xi[k].dot(p * xi[k]);
    if (!(dv < 0.0)) ++audit.violations;
  }
  return audit;
}

}  // namespace dtude
