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


#ifndef DTUDE_CONFIG_H_
#define DTUDE_CONFIG_H_

// Flat key=value run configuration. Blank lines and text after '#' are
// ignored; every key must be known.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dtude/simkern.h"

namespace dtude {

struct RunConfig {
  Scenario scenario = Scenario::Default();
  std::vector<ControllerKind> compare = {ControllerKind::kDtUde, ControllerKind::kCtUde,
                                         ControllerKind::kSmc, ControllerKind::kPdGravity};
  std::string out_dir = ".";
  bool svg = false;
  // Uniform bound on ||Delta Ld|| for the convergence radius; measured from
  // a simulation when unset.
  std::optional<double> eta_norm;
  // Reserved; the dynamics are deterministic.
  std::uint64_t seed = 0;
};

// Parses `text`; `source` labels error messages (a path or "--set").
void ApplyConfigText(RunConfig& cfg, std::string_view text, std::string_view source);

// Reads and applies a config file. ConfigError when it cannot be read.
RunConfig ParseConfigFile(const std::string& path);

// Applies a single "key=value" override.
void ApplyOverride(RunConfig& cfg, std::string_view assignment);

// Documented keys, in display order.
std::vector<std::string> ConfigKeys();

}  // namespace dtude

#endif  // DTUDE_CONFIG_H_
