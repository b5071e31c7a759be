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


#include "dtude/commands.h"

#include <filesystem>
#include <fstream>
#include <future>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "dtude/errors.h"
#include "dtude/report.h"
#include "dtude/stability.h"

namespace dtude {
namespace {

namespace fs = std::filesystem;

fs::path PrepareOutDir(const RunConfig& cfg) {
  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw ConfigError(fmt::format("cannot create output directory '{}'", cfg.out_dir));
  }
  return dir;
}

std::ofstream OpenOut(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
  return f;
}

std::vector<double> Column(const std::vector<Vec>& rows, Eigen::Index i) {
  std::vector<double> col;
  col.reserve(rows.size());
  for (const Vec& v : rows) col.push_back(v(i));
  return col;
}

void WritePanels(const fs::path& dir, const std::string& prefix, const SimTrace& tr) {
  struct Panel {
    const char* file;
    const char* title;
    std::vector<PlotSeries> series;
  };
  const std::vector<Panel> panels = {
      {"theta1", "joint 1 angle [rad]",
       {{"theta1", Column(tr.x, 0)}, {"theta1_m", Column(tr.xm, 0)}}},
      {"theta2", "joint 2 angle [rad]",
       {{"theta2", Column(tr.x, 2)}, {"theta2_m", Column(tr.xm, 2)}}},
      {"error", "tracking error [rad]", {{"e1", Column(tr.e, 0)}, {"e3", Column(tr.e, 2)}}},
      {"torque", "torque [N m]", {{"tau1", Column(tr.u, 0)}, {"tau2", Column(tr.u, 1)}}},
      {"disturbance1", "lumped disturbance, joint 1 rate",
       {{"Ld2", Column(tr.ld, 1)}, {"Ldhat2", Column(tr.ldhat, 1)}}},
      {"disturbance2", "lumped disturbance, joint 2 rate",
       {{"Ld4", Column(tr.ld, 3)}, {"Ldhat4", Column(tr.ldhat, 3)}}},
  };
  for (const Panel& p : panels) {
    std::ofstream f = OpenOut(dir / fmt::format("{}{}.svg", prefix, p.file));
    WriteSvgPlot(f, fmt::format("{} ({})", p.title, tr.controller), "t [s]", tr.t, p.series);
  }
}

std::string DivergenceNote(const DivergenceReport& d) {
  return fmt::format("diverged at t={:.3f} s (step {}, norm {:.3e}): {}", d.time, d.step, d.norm,
                     d.what);
}

void PrintMatrix(std::ostream& out, const char* name, const Mat& m) {
  fmt::print(out, "{} =\n", name);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::string row = "  [";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row += fmt::format("{}{:.10g}", j ? ", " : "", m(i, j));
    }
    fmt::print(out, "{}]\n", row);
  }
}

void PrintTargets(std::ostream& out, const char* name,
                  const std::vector<std::vector<Complex>>& targets) {
  for (std::size_t b = 0; b < targets.size(); ++b) {
    std::string list;
    for (const Complex& z : targets[b]) {
      list += fmt::format("{}{:.9f}", list.empty() ? "" : ", ", z.real());
      if (z.imag() != 0.0) list += fmt::format("{:+.9f}i", z.imag());
    }
    fmt::print(out, "{} block {}: {{{}}}\n", name, b + 1, list);
  }
}

void WarnObserverSpeed(const Scenario& sc, std::ostream& err) {
  if (sc.controller != ControllerKind::kDtUde) return;
  const DtUdeDesign d = DesignDtUde(sc);
  const UdeConfig ucfg(d.sys, d.kd, sc.tau, sc.allow_unstable_filter);
  const ObserverConfig ocfg(d.sys, d.beta, sc.innovation);
  if (auto warning = ObserverSpeedWarning(ocfg, ucfg)) fmt::print(err, "warning: {}\n", *warning);
}

}  // namespace

int CmdSimulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const fs::path dir = PrepareOutDir(cfg);
  WarnObserverSpeed(cfg.scenario, err);
  const SimTrace tr = RunClosedLoop(cfg.scenario);
  {
    std::ofstream f = OpenOut(dir / "trace.csv");
    WriteTraceCsv(f, tr);
  }
  const Metrics m = ComputeMetrics(tr);
  {
    std::ofstream f = OpenOut(dir / "metrics.txt");
    WriteMetricsText(f, tr.controller, m);
    if (tr.divergence) fmt::print(f, "divergence            {}\n", DivergenceNote(*tr.divergence));
  }
  if (cfg.svg) WritePanels(dir, "", tr);
  WriteMetricsText(out, tr.controller, m);
  fmt::print(out, "wrote {} rows to {}\n", tr.size(), (dir / "trace.csv").string());
  if (tr.divergence) {
    fmt::print(err, "error: {}\n", DivergenceNote(*tr.divergence));
    return kExitDivergence;
  }
  return kExitOk;
}

int CmdCompare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const fs::path dir = PrepareOutDir(cfg);
  std::vector<std::future<SimTrace>> jobs;
  for (ControllerKind kind : cfg.compare) {
    Scenario sc = cfg.scenario;
    sc.controller = kind;
    jobs.push_back(std::async(std::launch::async, [sc] { return RunClosedLoop(sc); }));
  }
  std::vector<NamedMetrics> rows;
  bool diverged = false;
  for (auto& job : jobs) {
    const SimTrace tr = job.get();
    {
      std::ofstream f = OpenOut(dir / fmt::format("trace_{}.csv", tr.controller));
      WriteTraceCsv(f, tr);
    }
    if (cfg.svg) WritePanels(dir, tr.controller + "_", tr);
    std::string status = "ok";
    if (tr.divergence) {
      diverged = true;
      status = DivergenceNote(*tr.divergence);
      fmt::print(err, "warning: {}: {}\n", tr.controller, status);
    }
    rows.push_back({tr.controller, ComputeMetrics(tr), status});
  }
  {
    std::ofstream f = OpenOut(dir / "metrics.txt");
    WriteMetricsTable(f, rows);
  }
  {
    std::ofstream f = OpenOut(dir / "metrics.csv");
    WriteMetricsCsv(f, rows);
  }
  WriteMetricsTable(out, rows);
  return diverged ? kExitDivergence : kExitOk;
}

int CmdStability(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const fs::path dir = PrepareOutDir(cfg);
  const Scenario& sc = cfg.scenario;
  sc.Validate();
  const DtUdeDesign d = DesignDtUde(sc);
  const ErrorDynamics ed = Assemble(d.sys, d.kd, d.beta, sc.tau);
  const ConditionReport report = CheckConditions(ed, sc.ts, sc.tau);
  std::ofstream f = OpenOut(dir / "stability.txt");
  if (!report.all_pass()) {
    WriteStabilityReport(out, report, nullptr, 0.0, nullptr);
    WriteStabilityReport(f, report, nullptr, 0.0, nullptr);
    fmt::print(err, "error: stability conditions do not hold\n");
    return kExitStability;
  }

  std::optional<SimTrace> tr;
  double eta = 0.0;
  if (cfg.eta_norm) {
    eta = *cfg.eta_norm;
  } else {
    Scenario run = sc;
    run.controller = ControllerKind::kDtUde;
    tr = RunClosedLoop(run);
    eta = MaxDisturbanceIncrement(*tr);
    if (tr->divergence) {
      fmt::print(err, "warning: eta measured on a truncated run ({})\n",
                 DivergenceNote(*tr->divergence));
    }
  }
  const ConvergenceBall ball = ConvergenceRadius(ed, eta);
  std::optional<LyapunovAudit> audit;
  if (tr) audit = AuditLyapunov(ball.p, ball.radius, StackedErrors(*tr));
  const LyapunovAudit* audit_ptr = audit ? &*audit : nullptr;
  WriteStabilityReport(out, report, &ball, eta, audit_ptr);
  WriteStabilityReport(f, report, &ball, eta, audit_ptr);
  return kExitOk;
}

int CmdDesignGains(const RunConfig& cfg, std::ostream& out, std::ostream& /*err*/) {
  const Scenario& sc = cfg.scenario;
  sc.Validate();
  const DtUdeDesign d = DesignDtUde(sc);
  PrintTargets(out, "Kd targets", d.kd_targets);
  PrintMatrix(out, "Kd", d.kd);
  fmt::print(out, "Kd placement error {:.3e}\n",
             matlib::MaxEigenvalueMismatch(matlib::Eigenvalues(d.sys.fn - d.sys.gn * d.kd),
                                           {d.kd_targets[0][0], d.kd_targets[0][1],
                                            d.kd_targets[1][0], d.kd_targets[1][1]}));
  PrintTargets(out, "beta targets", d.beta_targets);
  PrintMatrix(out, "beta", d.beta);
  fmt::print(out, "beta placement error {:.3e}\n",
             matlib::MaxEigenvalueMismatch(matlib::Eigenvalues(d.sys.fn - d.beta * d.sys.c),
                                           {d.beta_targets[0][0], d.beta_targets[0][1],
                                            d.beta_targets[1][0], d.beta_targets[1][1]}));
  PrintMatrix(out, "K (continuous)", DesignContinuousK(sc));
  return kExitOk;
}

int GuardedRun(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ConfigError& e) {
    fmt::print(err, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const InputError& e) {
    fmt::print(err, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const DimensionError& e) {
    fmt::print(err, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const StabilityError& e) {
    fmt::print(err, "stability error: {}\n", e.what());
    return kExitStability;
  } catch (const ControllabilityError& e) {
    fmt::print(err, "stability error: {}\n", e.what());
    return kExitStability;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInternal;
  }
}

}  // namespace dtude
