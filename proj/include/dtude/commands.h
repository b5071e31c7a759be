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


#ifndef DTUDE_COMMANDS_H_
#define DTUDE_COMMANDS_H_

#include <functional>
#include <ostream>

#include "dtude/config.h"

namespace dtude {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitStability = 3;
inline constexpr int kExitDivergence = 4;

// Writes trace.csv and metrics.txt (plus SVG panels with cfg.svg).
int CmdSimulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
// Runs cfg.compare on the same scenario; writes trace_<name>.csv,
// metrics.txt and metrics.csv.
int CmdCompare(const RunConfig& cfg, std::ostream& out, std::ostream& err);
// Condition report, Lyapunov solution and convergence radius; stability.txt.
int CmdStability(const RunConfig& cfg, std::ostream& out, std::ostream& err);
// Prints Kd and beta with their target eigenvalues.
int CmdDesignGains(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Runs `body`, mapping library exceptions to exit codes and messages on
// `err`.
int GuardedRun(const std::function<int()>& body, std::ostream& err);

}  // namespace dtude

#endif  // DTUDE_COMMANDS_H_
