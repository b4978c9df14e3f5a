// Copyright 2026 The jcsim Authors
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

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jcsim/cli/check.hpp"
#include "jcsim/cli/config.hpp"
#include "jcsim/cli/scenarios.hpp"

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kAccuracy = 3, kStructure = 4 };

void list_scenarios() {
  const auto& table = jcsim::cli::scenario_table();
  std::cout << table.size() << " scenarios\n";
  for (const auto& s : table) {
    std::cout << "\n" << s.id << "  (" << s.summary << ")\n";
    for (const auto& a : s.defaults) std::cout << "    " << a.key << " = " << a.value << "\n";
  }
}

int run(const std::string& config_path, const std::vector<std::string>& sets, const std::string& out,
        const std::vector<std::uint64_t>& seed) {
  using namespace jcsim::cli;
  std::vector<Assignment> user;
  if (!config_path.empty()) user = read_config_file(config_path);
  for (const auto& s : sets) user.push_back(parse_assignment(s));
  if (!seed.empty()) user.push_back({"noise.seed", std::to_string(seed.front())});
  const Config config = Config::resolve(user);
  const Manifest m = execute(config, out);
  for (const auto& o : m.outputs) std::cout << out << "/" << o.file << "  " << hex64(o.digest) << "\n";
  std::cout << out << "/manifest.txt\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jcsim: counter-diabatic driving in Jaynes-Cummings lattices"};
  app.set_version_flag("--version", std::string(JCSIM_VERSION));
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "run a scenario and write CSVs plus a manifest");
  std::string config_path, out = "out";
  std::vector<std::string> sets;
  std::vector<std::uint64_t> seed;
  run_cmd->add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
  run_cmd->add_option("--set", sets, "override one key (key=value); repeatable")->allow_extra_args(false);
  run_cmd->add_option("--out", out, "output directory")->capture_default_str();
  run_cmd->add_option("--seed", seed, "noise seed (overrides noise.seed)")->expected(1);

  app.add_subcommand("list", "list scenarios with their defaults");
  app.add_subcommand("check", "run the quick invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (app.got_subcommand("list")) {
      list_scenarios();
      return kOk;
    }
    if (app.got_subcommand("check")) {
      return jcsim::cli::print_checks(jcsim::cli::run_checks(), std::cout) ? kOk : kFailure;
    }
    return run(config_path, sets, out, seed);
  } catch (const jcsim::cli::UnknownKeyError& e) {
    std::cerr << "jcsim: " << e.what() << "\n";
    return kConfig;
  } catch (const jcsim::cli::ConfigError& e) {
    std::cerr << "jcsim: " << e.what() << "\n";
    return kConfig;
  } catch (const jcsim::AccuracyError& e) {
    std::cerr << "jcsim: accuracy error: " << e.what() << "\n";
    return kAccuracy;
  } catch (const jcsim::StructureError& e) {
    std::cerr << "jcsim: structure error: " << e.what() << "\n";
    return kStructure;
  } catch (const jcsim::DegenerateTransitionError& e) {
    std::cerr << "jcsim: structure error: " << e.what() << "\n";
    return kStructure;
  } catch (const std::exception& e) {
    std::cerr << "jcsim: " << e.what() << "\n";
    return kFailure;
  }
}
