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


#include "dtude/report.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace dtude {
namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string Row(const char* prefix, int count) {
  std::string s;
  for (int i = 1; i <= count; ++i) s += fmt::format(",{}{}", prefix, i);
  return s;
}

void AppendVec(std::string& line, const Vec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) line += fmt::format(",{:.17g}", v(i));
}

std::string Pair(const Eigen::Vector2d& v) { return fmt::format("{:.6g} {:.6g}", v(0), v(1)); }

}  // namespace

std::string TraceCsvHeader() {
  return "t" + Row("x", 4) + Row("xm", 4) + Row("xhat", 4) + Row("u", 2) + Row("Ld", 4) +
         Row("Ldhat", 4) + Row("e", 4);
}

void WriteTraceCsv(std::ostream& out, const SimTrace& tr) {
  out << TraceCsvHeader() << '\n';
  std::string line;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    line = fmt::format("{:.17g}", tr.t[k]);
    AppendVec(line, tr.x[k]);
    AppendVec(line, tr.xm[k]);
    AppendVec(line, tr.xhat[k]);
    AppendVec(line, tr.u[k]);
    AppendVec(line, tr.ld[k]);
    AppendVec(line, tr.ldhat[k]);
    AppendVec(line, tr.e[k]);
    out << line << '\n';
  }
}

void WriteMetricsText(std::ostream& out, const std::string& controller, const Metrics& m) {
  fmt::print(out, "controller            {}\n", controller);
  fmt::print(out, "diverged              {}\n", m.diverged ? "yes" : "no");
  fmt::print(out, "ise                   {}\n", Pair(m.ise));
  fmt::print(out, "control_energy        {:.6g}\n", m.control_energy);
  fmt::print(out, "peak_torque           {}\n", Pair(m.peak_torque));
  fmt::print(out, "estimation_rms        {:.6g}\n", m.estimation_rms);
  fmt::print(out, "ld_rms                {:.6g}\n", m.ld_rms);
  fmt::print(out, "final_rms_error       {}\n", Pair(m.final_rms_error));
  fmt::print(out, "band_peak_error       {}\n", Pair(m.band_peak_error));
  fmt::print(out, "band_reference_peak   {}\n", Pair(m.band_reference_peak));
  fmt::print(out, "settling_time         {}\n", Pair(m.settling_time));
}

void WriteMetricsTable(std::ostream& out, const std::vector<NamedMetrics>& rows) {
  fmt::print(out, "{:<12} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12}  {}\n", "controller",
             "rms_e1", "rms_e2", "peak_tau1", "peak_tau2", "energy", "est_rms", "status");
  for (const NamedMetrics& r : rows) {
    const Metrics& m = r.metrics;
    fmt::print(out, "{:<12} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}  {}\n",
               r.controller, m.final_rms_error(0), m.final_rms_error(1), m.peak_torque(0),
               m.peak_torque(1), m.control_energy, m.estimation_rms, r.status);
  }
}

void WriteMetricsCsv(std::ostream& out, const std::vector<NamedMetrics>& rows) {
  out << "controller,ise1,ise2,control_energy,peak_tau1,peak_tau2,estimation_rms,ld_rms,"
         "final_rms_e1,final_rms_e2,band_peak_e1,band_peak_e2,settling1,settling2,diverged\n";
  for (const NamedMetrics& r : rows) {
    const Metrics& m = r.metrics;
    fmt::print(out, "{},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},"
                    "{:.10g},{:.10g},{:.10g},{:.10g},{}\n",
               r.controller, m.ise(0), m.ise(1), m.control_energy, m.peak_torque(0),
               m.peak_torque(1), m.estimation_rms, m.ld_rms, m.final_rms_error(0),
               m.final_rms_error(1), m.band_peak_error(0), m.band_peak_error(1),
               m.settling_time(0), m.settling_time(1), m.diverged ? 1 : 0);
  }
}

void WriteStabilityReport(std::ostream& out, const ConditionReport& report,
                          const ConvergenceBall* ball, double eta_norm,
                          const LyapunovAudit* audit) {
  for (const ConditionCheck* c : {&report.controller, &report.observer, &report.filter}) {
    fmt::print(out, "{:<34} value={:.9f}  {}\n", c->name, c->value, c->pass ? "PASS" : "FAIL");
  }
  fmt::print(out, "{}\n", report.all_pass() ? "all conditions PASS" : "conditions FAIL");
  if (ball == nullptr) return;
  fmt::print(out, "lyapunov_residual  {:.3e}\n", ball->residual);
  fmt::print(out, "p_max              {:.9g}\n", ball->p_max);
  fmt::print(out, "acal_norm          {:.9g}\n", ball->acal_norm);
  fmt::print(out, "eta_norm           {:.9g}\n", eta_norm);
  fmt::print(out, "radius             {:.9g}\n", ball->radius);
  if (audit == nullptr) return;
  fmt::print(out, "audit_transitions  {}\n", audit->samples);
  fmt::print(out, "audit_outside_ball {}\n", audit->outside_ball);
  fmt::print(out, "audit_violations   {}\n", audit->violations);
  fmt::print(out, "xi_max_norm        {:.9g}\n", audit->max_norm);
  fmt::print(out, "xi_tail_max_norm   {:.9g}\n", audit->tail_max_norm);
}

void WriteSvgPlot(std::ostream& out, const std::string& title, const std::string& x_label,
                  const std::vector<double>& x, const std::vector<PlotSeries>& series) {
  constexpr double kWidth = 720, kHeight = 360;
  constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
  double x_lo = x.empty() ? 0.0 : x.front();
  double x_hi = x.empty() ? 1.0 : x.back();
  double y_lo = std::numeric_limits<double>::infinity();
  double y_hi = -y_lo;
  for (const PlotSeries& s : series) {
    for (double v : s.y) {
      if (!std::isfinite(v)) continue;
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
  }
  if (!std::isfinite(y_lo)) y_lo = -1.0, y_hi = 1.0;
  if (y_hi - y_lo < 1e-12) y_lo -= 1.0, y_hi += 1.0;
  if (x_hi - x_lo < 1e-12) x_hi = x_lo + 1.0;
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (v - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double v) { return kTop + (y_hi - v) / (y_hi - y_lo) * ph; };

  fmt::print(out,
             "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
             "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n",
             kWidth, kHeight);
  fmt::print(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
  fmt::print(out, "<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
             kWidth / 2, title);
  fmt::print(out,
             "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444\"/>\n",
             kLeft, kTop, pw, ph);
  for (int i = 0; i <= 4; ++i) {
    const double yv = y_lo + (y_hi - y_lo) * i / 4.0;
    const double xv = x_lo + (x_hi - x_lo) * i / 4.0;
    fmt::print(out, "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.3g}</text>\n", kLeft - 6,
               py(yv) + 4, yv);
    fmt::print(out, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{:.3g}</text>\n", px(xv),
               kTop + ph + 16, xv);
  }
  fmt::print(out, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", kLeft + pw / 2,
             kHeight - 10, x_label);
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    std::string points;
    const std::size_t n = std::min(x.size(), series[s].y.size());
    for (std::size_t k = 0; k < n; ++k) {
      if (!std::isfinite(series[s].y[k])) continue;
      points += fmt::format("{:.2f},{:.2f} ", px(x[k]), py(series[s].y[k]));
    }
    fmt::print(out, "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\" points=\"{}\"/>\n",
               color, points);
    fmt::print(out, "<text x=\"{}\" y=\"{}\" fill=\"{}\">{}</text>\n", kLeft + 8,
               kTop + 16 + 14 * s, color, series[s].label);
  }
  out << "</svg>\n";
}

}  // namespace dtude
