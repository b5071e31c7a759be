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


// Command-line front end: simulate, compare, stability, design-gains.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dtude/commands.h"
#include "dtude/config.h"

int main(int argc, char** argv) {
  CLI::App app{"Discrete-time UDE controller-observer for a two-link arm"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  bool svg = false;
  // The shared flags are accepted before or after the subcommand name.
  // One override list per parser level so later levels do not clobber
  // earlier ones.
  std::vector<std::vector<std::string>> override_lists(5);
  int level = 0;
  auto add_shared = [&](CLI::App* a) {
    a->add_option("--config", config_path, "key=value configuration file");
    a->add_option("--set", override_lists[level++], "override one key, e.g. --set ude.tau=0.02")
        ->expected(1)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    a->add_option("--out", out_dir, "output directory");
    a->add_flag("--svg", svg, "also write SVG line charts");
  };
  add_shared(&app);

  auto* simulate = app.add_subcommand("simulate", "run one controller, write trace.csv");
  auto* compare = app.add_subcommand("compare", "run several controllers on one scenario");
  std::vector<std::string> compare_names;
  compare->add_option("controllers", compare_names, "controllers (default: all)");
  auto* stability = app.add_subcommand("stability", "closed-loop conditions and radius");
  auto* design = app.add_subcommand("design-gains", "print Kd and beta");
  for (CLI::App* sub : {simulate, compare, stability, design}) add_shared(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dtude::kExitConfig;
  }

  dtude::RunConfig cfg;
  const int load = dtude::GuardedRun(
      [&] {
        if (!config_path.empty()) cfg = dtude::ParseConfigFile(config_path);
        for (const auto& list : override_lists) {
          for (const std::string& o : list) dtude::ApplyOverride(cfg, o);
        }
        if (!compare_names.empty()) {
          std::string list;
          for (const std::string& n : compare_names) list += (list.empty() ? "" : ",") + n;
          dtude::ApplyOverride(cfg, "compare.controllers=" + list);
        }
        cfg.out_dir = out_dir;
        cfg.svg = svg;
        return dtude::kExitOk;
      },
      std::cerr);
  if (load != dtude::kExitOk) return load;

  return dtude::GuardedRun(
      [&] {
        if (simulate->parsed()) return dtude::CmdSimulate(cfg, std::cout, std::cerr);
        if (compare->parsed()) return dtude::CmdCompare(cfg, std::cout, std::cerr);
        if (stability->parsed()) return dtude::CmdStability(cfg, std::cout, std::cerr);
        if (design->parsed()) return dtude::CmdDesignGains(cfg, std::cout, std::cerr);
        return dtude::kExitConfig;
      },
      std::cerr);
}
