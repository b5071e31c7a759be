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


#include "dtude/config.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "dtude/errors.h"

namespace dtude {
namespace {

using Setter = std::function<void(RunConfig&, std::string_view)>;

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> SplitList(std::string_view s) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto comma = s.find(',');
    parts.push_back(Trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return parts;
}

double ParseDouble(std::string_view s) {
  s = Trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError(fmt::format("cannot parse '{}' as a number", s));
  }
  return v;
}

std::int64_t ParseInt(std::string_view s) {
  s = Trim(s);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError(fmt::format("cannot parse '{}' as an integer", s));
  }
  return v;
}

bool ParseBool(std::string_view s) {
  s = Trim(s);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError(fmt::format("cannot parse '{}' as a boolean", s));
}

Vec ParseVector4(std::string_view s) {
  const std::vector<std::string_view> parts = SplitList(s);
  if (parts.size() != 4) {
    throw ConfigError(fmt::format("expected 4 comma-separated numbers, got '{}'", s));
  }
  Vec v(4);
  for (int i = 0; i < 4; ++i) v(i) = ParseDouble(parts[i]);
  return v;
}

Setter Num(double Scenario::*field) {
  return [field](RunConfig& c, std::string_view v) { c.scenario.*field = ParseDouble(v); };
}

Setter Param(ManipulatorParams Scenario::*set, double ManipulatorParams::*field) {
  return [set, field](RunConfig& c, std::string_view v) {
    (c.scenario.*set).*field = ParseDouble(v);
  };
}

template <typename E>
Setter Choice(E Scenario::*field, std::vector<std::pair<std::string_view, E>> options) {
  return [field, options](RunConfig& c, std::string_view v) {
    v = Trim(v);
    std::string valid;
    for (const auto& [name, value] : options) {
      if (name == v) {
        c.scenario.*field = value;
        return;
      }
      valid += valid.empty() ? std::string(name) : ", " + std::string(name);
    }
    throw ConfigError(fmt::format("'{}' is not one of: {}", v, valid));
  };
}

const std::map<std::string, Setter, std::less<>>& Setters() {
  static const auto* table = new std::map<std::string, Setter, std::less<>>{
      {"plant.m1", Param(&Scenario::actual, &ManipulatorParams::m1)},
      {"plant.m2", Param(&Scenario::actual, &ManipulatorParams::m2)},
      {"plant.l1", Param(&Scenario::actual, &ManipulatorParams::l1)},
      {"plant.l2", Param(&Scenario::actual, &ManipulatorParams::l2)},
      {"plant.g", Param(&Scenario::actual, &ManipulatorParams::g)},
      {"model.m1", Param(&Scenario::uncertain, &ManipulatorParams::m1)},
      {"model.m2", Param(&Scenario::uncertain, &ManipulatorParams::m2)},
      {"model.l1", Param(&Scenario::uncertain, &ManipulatorParams::l1)},
      {"model.l2", Param(&Scenario::uncertain, &ManipulatorParams::l2)},
      {"model.g", Param(&Scenario::uncertain, &ManipulatorParams::g)},
      {"controller",
       [](RunConfig& c, std::string_view v) {
         c.scenario.controller = ParseControllerName(Trim(v));
       }},
      {"compare.controllers",
       [](RunConfig& c, std::string_view v) {
         c.compare.clear();
         for (std::string_view name : SplitList(v)) c.compare.push_back(ParseControllerName(name));
       }},
      {"ude.tau", Num(&Scenario::tau)},
      {"ude.allow_unstable_filter",
       [](RunConfig& c, std::string_view v) { c.scenario.allow_unstable_filter = ParseBool(v); }},
      {"ude.nominal", Choice<NominalSource>(&Scenario::nominal,
                                            {{"actual", NominalSource::kActual},
                                             {"uncertain", NominalSource::kUncertain}})},
      {"ude.feedback", Choice<UdeFeedback>(&Scenario::feedback,
                                           {{"observer", UdeFeedback::kObserver},
                                            {"state", UdeFeedback::kState}})},
      {"ude.innovation", Choice<InnovationTiming>(&Scenario::innovation,
                                                  {{"lagged", InnovationTiming::kLagged},
                                                   {"current", InnovationTiming::kCurrent}})},
      {"observer.pole_scale", Num(&Scenario::observer_pole_scale)},
      {"sim.Ts", Num(&Scenario::ts)},
      {"sim.substeps",
       [](RunConfig& c, std::string_view v) {
         c.scenario.substeps = static_cast<int>(ParseInt(v));
       }},
      {"sim.duration", Num(&Scenario::duration)},
      {"sim.hold_reference",
       [](RunConfig& c, std::string_view v) { c.scenario.hold_reference = ParseBool(v); }},
      {"sim.divergence_limit", Num(&Scenario::divergence_limit)},
      {"ref.amp1", [](RunConfig& c, std::string_view v) { c.scenario.reference.amp1 = ParseDouble(v); }},
      {"ref.freq1", [](RunConfig& c, std::string_view v) { c.scenario.reference.freq1 = ParseDouble(v); }},
      {"ref.amp2", [](RunConfig& c, std::string_view v) { c.scenario.reference.amp2 = ParseDouble(v); }},
      {"ref.freq2", [](RunConfig& c, std::string_view v) { c.scenario.reference.freq2 = ParseDouble(v); }},
      {"dist.gain1", [](RunConfig& c, std::string_view v) { c.scenario.disturbance.gain1 = ParseDouble(v); }},
      {"dist.gain2", [](RunConfig& c, std::string_view v) { c.scenario.disturbance.gain2 = ParseDouble(v); }},
      {"dist.cycles", [](RunConfig& c, std::string_view v) { c.scenario.disturbance.cycles = ParseDouble(v); }},
      {"init.x0", [](RunConfig& c, std::string_view v) { c.scenario.x0 = ParseVector4(v); }},
      {"init.xm0", [](RunConfig& c, std::string_view v) { c.scenario.xm0 = ParseVector4(v); }},
      {"init.xhat0", [](RunConfig& c, std::string_view v) { c.scenario.xhat0 = ParseVector4(v); }},
      {"smc.epsilon", [](RunConfig& c, std::string_view v) { c.scenario.smc.epsilon = ParseDouble(v); }},
      {"smc.kd_slide", [](RunConfig& c, std::string_view v) { c.scenario.smc.kd_slide = ParseDouble(v); }},
      {"smc.d1", [](RunConfig& c, std::string_view v) { c.scenario.smc.d_bounds(0) = ParseDouble(v); }},
      {"smc.d2", [](RunConfig& c, std::string_view v) { c.scenario.smc.d_bounds(1) = ParseDouble(v); }},
      {"smc.k1",
       [](RunConfig& c, std::string_view v) {
         c.scenario.smc.k.row(0) = ParseVector4(v).transpose();
       }},
      {"smc.k2",
       [](RunConfig& c, std::string_view v) {
         c.scenario.smc.k.row(1) = ParseVector4(v).transpose();
       }},
      {"pd.kp", [](RunConfig& c, std::string_view v) { c.scenario.pd.kp = ParseDouble(v); }},
      {"pd.kd", [](RunConfig& c, std::string_view v) { c.scenario.pd.kd = ParseDouble(v); }},
      {"ctude.tau", Num(&Scenario::ct_tau)},
      {"analysis.eta_norm", [](RunConfig& c, std::string_view v) { c.eta_norm = ParseDouble(v); }},
      {"seed",
       [](RunConfig& c, std::string_view v) {
         c.seed = static_cast<std::uint64_t>(ParseInt(v));
       }},
  };
  return *table;
}

void ApplyLine(RunConfig& cfg, std::string_view line, std::string_view where) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(fmt::format("{}: expected key=value, got '{}'", where, line));
  }
  const std::string_view key = Trim(line.substr(0, eq));
  const std::string_view value = Trim(line.substr(eq + 1));
  const auto& table = Setters();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError(fmt::format("{}: unknown key '{}'", where, key));
  try {
    it->second(cfg, value);
  } catch (const Error& e) {
    throw ConfigError(fmt::format("{}: key '{}': {}", where, key, e.what()));
  }
}

}  // namespace

void ApplyConfigText(RunConfig& cfg, std::string_view text, std::string_view source) {
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    ApplyLine(cfg, line, fmt::format("{}:{}", source, line_no));
  }
}

RunConfig ParseConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config file '{}'", path));
  std::ostringstream text;
  text << in.rdbuf();
  RunConfig cfg;
  ApplyConfigText(cfg, text.str(), path);
  return cfg;
}

void ApplyOverride(RunConfig& cfg, std::string_view assignment) {
  ApplyLine(cfg, Trim(assignment), "--set");
}

std::vector<std::string> ConfigKeys() {
  std::vector<std::string> keys;
  for (const auto& [key, setter] : Setters()) keys.push_back(key);
  return keys;
}

}  // namespace dtude
