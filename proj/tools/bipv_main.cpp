/* Copyright 2026 The bipv-assess Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// bipv: building-integrated PV assessment from segmentation outputs.
//
//   bipv tune     --config run.json        threshold sweep + prompt comparison
//   bipv assess   --config run.json        full pipeline, all report tables
//   bipv validate --config run.json        list input problems, compute nothing
//   bipv area | yield | lcoe | carbon      individual stages
//
// Exit codes: 0 ok, 1 validation, 2 schema, 3 missing input, 4 computation.

#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bipv/parallel.hpp"
#include "bipv/pipeline.hpp"
#include "bipv/version.hpp"

namespace {

using Command = std::function<int(const std::filesystem::path&, const bipv::RunOptions&,
                                  const bipv::Console&)>;

struct Args {
  std::string config;
  std::string out;
  int jobs = bipv::default_jobs();
  std::vector<std::string> overrides;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Building-integrated photovoltaic assessment from rooftop segmentation"};
  app.set_version_flag("--version", std::string(bipv::kToolName) + " " + bipv::kVersion);
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"tune", "Sweep box thresholds and compare prompts on labeled tiles"},
      {"assess", "Run area, panel, yield, cost and carbon stages"},
      {"validate", "Check all configured inputs without computing"},
      {"area", "Per-category rooftop areas"},
      {"yield", "Annual yield per BIPV configuration and weather year"},
      {"lcoe", "Levelized cost per BIPV configuration"},
      {"carbon", "Energy, emission reduction and self-sufficiency"},
  };
  const std::map<std::string, Command> handlers = {
      {"tune", bipv::cmd_tune},       {"assess", bipv::cmd_assess},
      {"validate", bipv::cmd_validate}, {"area", bipv::cmd_area},
      {"yield", bipv::cmd_yield},     {"lcoe", bipv::cmd_lcoe},
      {"carbon", bipv::cmd_carbon},
  };

  Args args;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", args.config, "Run configuration (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("-o,--out", args.out, "Output directory (overrides output_dir)");
    sub->add_option("-j,--jobs", args.jobs, "Worker threads")
        ->check(CLI::PositiveNumber);
    sub->add_option("--set", args.overrides, "Config override, dotted.key=value")
        ->take_all();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    // Usage errors share the schema exit code.
    return rc == 0 ? 0 : 2;
  }

  bipv::RunOptions opts;
  if (!args.out.empty()) opts.out_dir = args.out;
  opts.jobs = args.jobs;
  opts.overrides = args.overrides;
  const bipv::Console console{std::cout, std::cerr};

  for (CLI::App* sub : app.get_subcommands()) {
    return handlers.at(sub->get_name())(args.config, opts, console);
  }
  return 2;
}
