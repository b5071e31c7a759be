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


#ifndef DTUDE_REPORT_H_
#define DTUDE_REPORT_H_

// Text, CSV and SVG serialization of traces, metrics and analysis results.

#include <ostream>
#include <string>
#include <vector>

#include "dtude/simkern.h"
#include "dtude/stability.h"

namespace dtude {

// Frozen column order of trace.csv.
std::string TraceCsvHeader();
void WriteTraceCsv(std::ostream& out, const SimTrace& tr);

void WriteMetricsText(std::ostream& out, const std::string& controller, const Metrics& m);

struct NamedMetrics {
  std::string controller;
  Metrics metrics;
  std::string status;  // "ok" or a divergence note
};

void WriteMetricsTable(std::ostream& out, const std::vector<NamedMetrics>& rows);
void WriteMetricsCsv(std::ostream& out, const std::vector<NamedMetrics>& rows);

void WriteStabilityReport(std::ostream& out, const ConditionReport& report,
                          const ConvergenceBall* ball, double eta_norm,
                          const LyapunovAudit* audit);

struct PlotSeries {
  std::string label;
  std::vector<double> y;
};

// Standalone SVG line chart of one or more series over a shared x axis.
void WriteSvgPlot(std::ostream& out, const std::string& title, const std::string& x_label,
                  const std::vector<double>& x, const std::vector<PlotSeries>& series);

}  // namespace dtude

#endif  // DTUDE_REPORT_H_
