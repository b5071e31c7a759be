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


#include "dtude/simkern.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include <fmt/format.h>

#include "dtude/errors.h"

namespace dtude {
namespace {

constexpr ControllerKind kAllControllers[] = {ControllerKind::kDtUde, ControllerKind::kCtUde,
                                              ControllerKind::kSmc, ControllerKind::kPdGravity};

// Eigenvalues of the diagonal blocks of `m` in block order.
std::vector<std::vector<Complex>> BlockEigenvalues(const Mat& m,
                                                   const std::vector<matlib::InputBlock>& blocks) {
  std::vector<std::vector<Complex>> out;
  for (const matlib::InputBlock& b : blocks) {
    const Eigen::Index n = static_cast<Eigen::Index>(b.states.size());
    Mat sub(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) sub(i, j) = m(b.states[i], b.states[j]);
    }
    out.push_back(matlib::Eigenvalues(sub));
  }
  return out;
}

DiscreteSystem ScenarioSystem(const Scenario& sc) {
  const NominalModel nom = ScenarioNominalModel(sc);
  return BuildSystem(nom.a, nom.b, JointAngleOutput(), sc.am, sc.bm, sc.ts);
}

void CheckVector(const Vec& v, Eigen::Index n, const char* name) {
  if (v.size() != n || !v.allFinite()) {
    throw InputError(fmt::format("scenario: {} must be a finite {}-vector", name, n));
  }
}

double SquaredNorm(const Vec& v) { return v.squaredNorm(); }

}  // namespace

std::string_view ControllerName(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::kDtUde:
      return "dt-ude";
    case ControllerKind::kCtUde:
      return "ct-ude";
    case ControllerKind::kSmc:
      return "smc";
    case ControllerKind::kPdGravity:
      return "pd-gravity";
  }
  return "unknown";
}

ControllerKind ParseControllerName(std::string_view name) {
  for (ControllerKind kind : kAllControllers) {
    if (ControllerName(kind) == name) return kind;
  }
  throw ConfigError(fmt::format("unknown controller '{}' (valid: dt-ude, ct-ude, smc, pd-gravity)",
                                name));
}

Eigen::Vector2d SineReference::operator()(double t) const {
  return {amp1 * std::sin(freq1 * t), amp2 * std::sin(freq2 * t)};
}

Eigen::Vector2d JointDisturbance::operator()(const Eigen::Vector4d& x) const {
  const double w = 2.0 * std::numbers::pi * cycles;
  return {gain1 * std::sin(w * x(0)), gain2 * std::sin(w * x(2))};
}

Scenario Scenario::Default() {
  Scenario sc;
  sc.am = Mat::Zero(4, 4);
  sc.am << 0, 1, 0, 0,  //
      -2, -3, 0, 0,     //
      0, 0, 0, 1,       //
      0, 0, -2, -3;
  sc.bm = Mat::Zero(4, 2);
  sc.bm(1, 0) = 1.0;
  sc.bm(3, 1) = 1.0;
  sc.smc.k = Mat::Zero(2, 4);
  sc.smc.k << 34, 51, 0, 0,  //
      0, 0, 2, 3;
  sc.smc.d_bounds = Eigen::Vector2d(15.0, 10.0);
  return sc;
}

Scenario Scenario::NonzeroInitial() {
  Scenario sc = Default();
  sc.x0 << 1.0, 0.0, -1.0, 1.0;
  return sc;
}

std::int64_t Scenario::samples() const { return std::llround(duration / ts); }

void Scenario::Validate() const {
  actual.Validate();
  uncertain.Validate();
  if (!(ts > 0.0) || !std::isfinite(ts)) throw InputError(fmt::format("scenario: Ts must be > 0, got {}", ts));
  if (substeps < 1) throw InputError(fmt::format("scenario: substeps must be >= 1, got {}", substeps));
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw InputError(fmt::format("scenario: duration must be > 0, got {}", duration));
  }
  if (am.rows() != 4 || am.cols() != 4 || bm.rows() != 4 || bm.cols() != 2) {
    throw DimensionError("scenario: reference model must be Am 4x4, Bm 4x2");
  }
  CheckVector(x0, 4, "x0");
  CheckVector(xm0, 4, "xm0");
  CheckVector(xhat0, 4, "xhat0");
  if (!(divergence_limit > 0.0)) throw InputError("scenario: divergence limit must be > 0");
  if (!(observer_pole_scale >= 0.0 && observer_pole_scale < 1.0 / 0.990049834)) {
    throw InputError(fmt::format("scenario: observer pole scale {} leaves the unit disk",
                                 observer_pole_scale));
  }
}

NominalModel ScenarioNominalModel(const Scenario& sc) {
  return NominalInputMatrix(sc.nominal == NominalSource::kActual ? sc.actual : sc.uncertain);
}

DtUdeDesign DesignDtUde(const Scenario& sc) {
  DtUdeDesign d;
  d.sys = ScenarioSystem(sc);
  const std::vector<matlib::InputBlock> blocks = ManipulatorBlocks();
  d.kd_targets = BlockEigenvalues(d.sys.fm, blocks);
  d.beta_targets = d.kd_targets;
  for (auto& set : d.beta_targets) {
    for (Complex& z : set) z *= sc.observer_pole_scale;
  }
  d.kd = DesignKd(d.sys, d.kd_targets, blocks);
  d.beta = DesignBeta(d.sys, d.beta_targets, blocks);
  return d;
}

Mat DesignContinuousK(const Scenario& sc) {
  const NominalModel nom = ScenarioNominalModel(sc);
  const std::vector<matlib::InputBlock> blocks = ManipulatorBlocks();
  return matlib::PlacePoles(nom.a, nom.b, BlockEigenvalues(sc.am, blocks), blocks);
}

Vec Rk4Step(const std::function<Vec(double, const Vec&)>& f, const Vec& x, double t, double h) {
  if (!(h > 0.0)) throw InputError(fmt::format("rk4: step must be > 0, got {}", h));
  auto eval = [&](double tt, const Vec& xx) {
    Vec d = f(tt, xx);
    if (!d.allFinite()) {
      throw NumericalError(fmt::format("rk4: non-finite derivative at t = {:.6f}", tt));
    }
    return d;
  };
  const Vec k1 = eval(t, x);
  const Vec k2 = eval(t + 0.5 * h, x + 0.5 * h * k1);
  const Vec k3 = eval(t + 0.5 * h, x + 0.5 * h * k2);
  const Vec k4 = eval(t + h, x + h * k3);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

SimTrace RunClosedLoop(const Scenario& sc) {
  sc.Validate();
  const std::int64_t n_samples = sc.samples();
  const double h = sc.ts / sc.substeps;
  const bool dt_ude = sc.controller == ControllerKind::kDtUde;

  const DiscreteSystem sys = ScenarioSystem(sc);
  std::optional<UdeConfig> ucfg;
  std::optional<ObserverConfig> ocfg;
  std::optional<CtUdeConfig> ctcfg;
  if (dt_ude) {
    const DtUdeDesign d = DesignDtUde(sc);
    ucfg.emplace(d.sys, d.kd, sc.tau, sc.allow_unstable_filter);
    ocfg.emplace(d.sys, d.beta, sc.innovation);
  } else if (sc.controller == ControllerKind::kCtUde) {
    const NominalModel nom = ScenarioNominalModel(sc);
    ctcfg.emplace(nom.a, nom.b, DesignContinuousK(sc), sc.ct_tau);
  } else if (sc.controller == ControllerKind::kSmc) {
    sc.smc.Validate();
  }

  SimTrace tr;
  tr.controller = std::string(ControllerName(sc.controller));
  tr.ts = sc.ts;
  const std::size_t rows = static_cast<std::size_t>(n_samples + 1);
  for (auto* v : {&tr.x, &tr.xm, &tr.xhat, &tr.y, &tr.yhat, &tr.u, &tr.u_d, &tr.dhat, &tr.ldhat,
                  &tr.ld, &tr.ehat, &tr.ese, &tr.e}) {
    v->reserve(rows);
  }

  Vec x = sc.x0;
  Vec xm = sc.xm0;
  UdeState ust = UdeState::Initial(2);
  ObserverState ost = ObserverState::Initial(sc.xhat0);
  CtUdeState cst = CtUdeState::Initial(4);
  const Vec zero2 = Vec::Zero(2);
  const Vec zero4 = Vec::Zero(4);

  auto reference_at = [&](double t_sample, double t_now) {
    return sc.reference(sc.hold_reference ? t_sample : t_now);
  };
  // Baseline torque from the current continuous state.
  auto baseline_torque = [&](const Vec& xs, const Vec& xms,
                             const Eigen::Vector2d& r) -> Eigen::Vector2d {
    const Eigen::Vector4d x4 = xs;
    const Eigen::Vector4d xm4 = xms;
    switch (sc.controller) {
      case ControllerKind::kSmc: {
        const Vec xm_dot = sc.am * xms + sc.bm * r;
        return SmcControl(sc.smc, x4, xm4, Eigen::Vector2d(xm_dot(1), xm_dot(3)));
      }
      case ControllerKind::kPdGravity:
        return PdGravityControl(sc.pd, x4, xm4);
      case ControllerKind::kCtUde: {
        CtUdeStep step = CtUdeControl(*ctcfg, cst, xs - xms, h);
        cst = std::move(step.next);
        return step.u;
      }
      case ControllerKind::kDtUde:
        break;
    }
    return Eigen::Vector2d::Zero();
  };

  for (std::int64_t k = 0; k <= n_samples; ++k) {
    const double t = static_cast<double>(k) * sc.ts;
    const Eigen::Vector2d r = sc.reference(t);
    const Vec y = sys.c * x;
    Vec u, xhat, u_d = zero2, dhat = zero4, ldhat = zero4;
    double mismatch = 0.0;
    if (dt_ude) {
      if (sc.feedback == UdeFeedback::kObserver) {
        xhat = ost.xhat;
        ControllerObserverStep step = StepControllerObserver(*ucfg, ust, *ocfg, ost, k, xm, r, y);
        u = step.u;
        u_d = step.diag.u_d;
        dhat = step.diag.dhat;
        ldhat = step.diag.ldhat;
        mismatch = step.diag.form_mismatch;
        ust = std::move(step.ude);
        ost = std::move(step.observer);
      } else {
        xhat = x;
        UdeStep step = ControlStep(*ucfg, ust, k, x - xm);
        u = step.u;
        u_d = step.u_d;
        dhat = RecoverDistEstimate(sys, u_d, xm, r);
        ldhat = LumpedDisturbanceEstimate(*ucfg, u_d);
        ust = std::move(step.next);
      }
      if (!xhat.allFinite() || xhat.norm() > sc.divergence_limit) {
        tr.divergence = DivergenceReport{t, k, xhat.norm(), "observer state left the guard band"};
        break;
      }
    } else {
      xhat = x;
    }

    // Integrate over [t, t + Ts).
    Vec z(8);
    z << x, xm;
    Vec u_logged = u;
    try {
      for (int j = 0; j < sc.substeps; ++j) {
        const double tj = t + j * h;
        Vec uj = u;
        if (!dt_ude) {
          uj = baseline_torque(z.head(4), z.tail(4), reference_at(t, tj));
          if (j == 0) u_logged = uj;
        }
        const Torque torque = Torque::FromVector(uj);
        auto f = [&](double ts_now, const Vec& zz) {
          const Eigen::Vector4d xs = zz.head(4);
          Vec dz(8);
          dz.head(4) = ForwardDynamics(sc.actual, JointState::FromVector(xs), torque,
                                       sc.disturbance(xs));
          dz.tail(4) = sc.am * zz.tail(4) + sc.bm * reference_at(t, ts_now);
          return dz;
        };
        z = Rk4Step(f, z, tj, h);
        const double norm = z.head(4).norm();
        if (!(norm <= sc.divergence_limit)) {
          tr.divergence = DivergenceReport{tj + h, k, norm, "plant state left the guard band"};
          break;
        }
      }
    } catch (const Error& err) {
      tr.divergence = DivergenceReport{t, k, x.norm(), err.what()};
    }
    if (tr.divergence) break;

    const Vec x_next = z.head(4);
    const Vec xm_next = z.tail(4);
    const Vec e = x - xm;
    tr.t.push_back(t);
    tr.x.push_back(x);
    tr.xm.push_back(xm);
    tr.xhat.push_back(xhat);
    tr.y.push_back(y);
    tr.yhat.push_back(sys.c * xhat);
    tr.u.push_back(u_logged);
    tr.u_d.push_back(u_d);
    tr.dhat.push_back(dhat);
    tr.ldhat.push_back(ldhat);
    tr.ld.push_back((x_next - xm_next) - sys.fn * e - sys.gn * u_logged);
    tr.ehat.push_back(xhat - xm);
    tr.ese.push_back(x - xhat);
    tr.e.push_back(e);
    tr.form_mismatch.push_back(mismatch);
    x = x_next;
    xm = xm_next;
  }
  return tr;
}

Metrics ComputeMetrics(const SimTrace& tr, const MetricWindows& windows) {
  if (tr.size() == 0) throw InputError("compute_metrics: empty trace");
  Metrics m;
  const std::size_t n = tr.size();
  const double ts = tr.ts;
  const double t_end = tr.t.back();
  const double span = t_end - tr.t.front();
  const double slack = 1e-9 * std::max(1.0, t_end);
  for (std::size_t k = 0; k < n; ++k) {
    const Vec& e = tr.e[k];
    m.ise(0) += e(0) * e(0) * ts;
    m.ise(1) += e(2) * e(2) * ts;
    if (k + 1 < n) m.control_energy += tr.u[k].squaredNorm() * ts;
    m.peak_torque = m.peak_torque.cwiseMax(tr.u[k].cwiseAbs());
  }

  double est_sum = 0.0, ld_sum = 0.0, fin0 = 0.0, fin1 = 0.0;
  std::size_t est_count = 0, fin_count = 0;
  const double est_start = t_end - windows.estimation_fraction * span;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = tr.t[k];
    if (t >= est_start - slack) {
      est_sum += (tr.ld[k] - tr.ldhat[k]).squaredNorm();
      ld_sum += SquaredNorm(tr.ld[k]);
      ++est_count;
    }
    if (t >= t_end - windows.final_seconds - slack) {
      fin0 += tr.e[k](0) * tr.e[k](0);
      fin1 += tr.e[k](2) * tr.e[k](2);
      ++fin_count;
    }
    if (t >= t_end - windows.band_seconds - slack) {
      m.band_peak_error(0) = std::max(m.band_peak_error(0), std::abs(tr.e[k](0)));
      m.band_peak_error(1) = std::max(m.band_peak_error(1), std::abs(tr.e[k](2)));
      m.band_reference_peak(0) = std::max(m.band_reference_peak(0), std::abs(tr.xm[k](0)));
      m.band_reference_peak(1) = std::max(m.band_reference_peak(1), std::abs(tr.xm[k](2)));
    }
  }
  if (est_count > 0) {
    m.estimation_rms = std::sqrt(est_sum / est_count);
    m.ld_rms = std::sqrt(ld_sum / est_count);
  }
  if (fin_count > 0) {
    m.final_rms_error = Eigen::Vector2d(std::sqrt(fin0 / fin_count), std::sqrt(fin1 / fin_count));
  }
  for (int i = 0; i < 2; ++i) {
    const double band = 0.02 * m.band_reference_peak(i);
    double settle = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (std::abs(tr.e[k](2 * i)) > band) settle = tr.t[k] + ts;
    }
    m.settling_time(i) = settle;
  }
  m.diverged = tr.divergence.has_value();
  return m;
}

MatchingResidual ComputeMatchingResidual(const DiscreteSystem& sys, const SimTrace& tr) {
  const Eigen::Index n = sys.states();
  const Mat projector = Mat::Identity(n, n) - sys.gn * matlib::Pinv(sys.gn);
  MatchingResidual out;
  double num = 0.0, den = 0.0;
  for (const Vec& ld : tr.ld) {
    const double norm = ld.norm();
    if (!(norm > 0.0)) continue;
    const double res = (projector * ld).norm();
    out.max_ratio = std::max(out.max_ratio, res / norm);
    num += res * res;
    den += norm * norm;
    ++out.samples;
  }
  if (den > 0.0) out.aggregate_ratio = std::sqrt(num / den);
  return out;
}

std::vector<Vec> StackedErrors(const SimTrace& tr) {
  std::vector<Vec> xi;
  xi.reserve(tr.size());
  for (std::size_t k = 0; k < tr.size(); ++k) {
    Vec v(12);
    v << tr.ehat[k], tr.ese[k], tr.ld[k] - tr.ldhat[k];
    xi.push_back(std::move(v));
  }
  return xi;
}

double MaxDisturbanceIncrement(const SimTrace& tr) {
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < tr.size(); ++k) {
    worst = std::max(worst, (tr.ld[k + 1] - tr.ld[k]).norm());
  }
  return worst;
}

HarnessResult RunLinearHarness(const DiscreteSystem& sys, const UdeConfig& ucfg,
                               const ObserverConfig* ocfg, const Vec& x0, const Vec& xhat0,
                               const std::function<Vec(std::int64_t)>& ld, std::int64_t steps,
                               double divergence_limit) {
  HarnessResult out;
  Vec x = x0;
  UdeState ust = UdeState::Initial(sys.inputs());
  ObserverState ost = ObserverState::Initial(xhat0);
  const Vec zero_x = Vec::Zero(sys.states());
  const Vec zero_r = Vec::Zero(sys.inputs());
  for (std::int64_t k = 0; k < steps; ++k) {
    const Vec disturbance = ld(k);
    Vec u, u_d, ehat, ese;
    double mismatch = 0.0;
    if (ocfg != nullptr) {
      ese = x - ost.xhat;
      ControllerObserverStep step =
          StepControllerObserver(ucfg, ust, *ocfg, ost, k, zero_x, zero_r, sys.c * x);
      ehat = step.diag.ehat;
      u = step.u;
      u_d = step.diag.u_d;
      mismatch = step.diag.form_mismatch;
      ust = std::move(step.ude);
      ost = std::move(step.observer);
    } else {
      UdeStep step = ControlStep(ucfg, ust, k, x);
      ehat = x;
      ese = zero_x;
      u = step.u;
      u_d = step.u_d;
      ust = std::move(step.next);
    }
    out.e.push_back(x);
    out.ehat.push_back(ehat);
    out.ese.push_back(ese);
    out.ld.push_back(disturbance);
    out.ldhat.push_back(LumpedDisturbanceEstimate(ucfg, u_d));
    out.u_d.push_back(u_d);
    out.u.push_back(u);
    out.form_mismatch.push_back(mismatch);
    x = sys.fn * x + sys.gn * u + disturbance;
    const double norm = x.norm();
    if (!(norm <= divergence_limit)) {
      out.divergence = DivergenceReport{static_cast<double>(k + 1) * sys.ts, k + 1, norm,
                                        "linear harness state left the guard band"};
      break;
    }
  }
  return out;
}

}  // namespace dtude
