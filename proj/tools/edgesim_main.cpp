// Copyright 2026 The Edgesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "edgesim/commands.hpp"
#include "edgesim/config.hpp"
#include "edgesim/errors.hpp"
#include "edgesim/privacy.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> epsilons;
  std::int32_t threads = -1;
  bool overwrite = false;
  bool dump_config = false;
};

void add_common_flags(CLI::App* cmd, CliOptions* opt) {
  cmd->add_option("--config", opt->config_path, "JSON configuration file (defaults apply when omitted)");
  cmd->add_option("--out-dir", opt->out_dir, "Directory for generated artifacts")
      ->capture_default_str();
  cmd->add_option("--seeds", opt->seeds, "Override the seed list (comma separated)")
      ->delimiter(',');
  cmd->add_option("--epsilons", opt->epsilons,
                  "Override the privacy levels, e.g. inf,0.1,0.01")
      ->delimiter(',');
  cmd->add_option("--threads", opt->threads, "Worker threads (0 = machine parallelism)");
  cmd->add_flag("--overwrite", opt->overwrite, "Replace existing output files");
  cmd->add_flag("--dump-config", opt->dump_config,
                "Print the effective configuration (all keys, canonical form) and exit");
}

edgesim::SimConfig load_with_overrides(const CliOptions& opt) {
  edgesim::SimConfig config = opt.config_path.empty()
                                  ? edgesim::SimConfig{}
                                  : edgesim::SimConfig::load(opt.config_path);
  if (!opt.seeds.empty()) config.seeds = opt.seeds;
  if (!opt.epsilons.empty()) {
    config.epsilons.clear();
    for (const auto& label : opt.epsilons) {
      config.epsilons.push_back(edgesim::parse_epsilon(label));
    }
  }
  if (opt.threads >= 0) config.threads = opt.threads;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy-aware MEC offloading simulator"};
  app.set_version_flag("--version", edgesim::kToolVersion);
  app.require_subcommand(1);

  CliOptions opt;
  CLI::App* gen = app.add_subcommand("generate", "Write the topology and mobility traces");
  CLI::App* run = app.add_subcommand("run", "Execute the paired experiment grid");
  CLI::App* rep = app.add_subcommand("report", "Aggregate outcomes into tables and figures");
  CLI::App* all = app.add_subcommand("all", "generate, run and report in sequence");
  for (CLI::App* cmd : {gen, run, rep, all}) add_common_flags(cmd, &opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const edgesim::SimConfig config = load_with_overrides(opt);
    if (opt.dump_config) {
      config.validate();
      std::cout << config.to_json().dump(2) << '\n';
      return 0;
    }
    if (gen->parsed()) {
      edgesim::cmd_generate(config, opt.out_dir, opt.overwrite, std::cerr);
    } else if (run->parsed()) {
      edgesim::cmd_run(config, opt.out_dir, opt.overwrite, std::cerr);
    } else if (rep->parsed()) {
      edgesim::cmd_report(config, opt.out_dir, opt.overwrite, std::cerr);
    } else {
      edgesim::cmd_all(config, opt.out_dir, opt.overwrite, std::cerr);
    }
  } catch (const edgesim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
