// Copyright 2026 The qsync Authors
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

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qsync/cli.hpp"

int main(int argc, char** argv) {
  using namespace qsync;
  CLI::App app{"qsync: homodyne-enhanced phase synchronization sweeps"};
  app.set_version_flag("--version", std::string(QSYNC_VERSION));

  std::string config_path, preset, out_dir, estimator;
  std::uint64_t seed = 0;
  int workers = 0, trajectories = 0;
  bool no_plots = false, list = false;
  app.add_option("--config", config_path, "JSON run configuration")
      ->check(CLI::ExistingFile);
  app.add_option("--preset", preset, "figure preset (see --list-presets)");
  auto* seed_opt = app.add_option("--seed", seed, "64-bit RNG seed");
  app.add_option("--workers", workers, "worker threads")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--no-plots", no_plots, "skip SVG plots");
  app.add_option("--trajectories", trajectories,
                 "trajectories per point (overrides the preset)")
      ->check(CLI::PositiveNumber);
  app.add_option("--estimator", estimator,
                 "ensemble coherence estimator: magnitude or complex");
  app.add_flag("--list-presets", list, "print preset names and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; usage errors share the config exit code
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (list) {
    for (const auto& name : preset_names()) {
      const SweepSpec s = figure_preset(name);
      std::cout << name << ":";
      for (const Axis& a : s.axes) {
        std::cout << " " << a.name << "[" << a.values.size() << "]";
      }
      std::cout << "\n";
    }
    return 0;
  }

  try {
    cli::RunConfig config = cli::default_config();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw InvalidArgument("cannot open " + config_path);
      std::stringstream text;
      text << in.rdbuf();
      config = cli::parse_config(text.str());
    }
    if (!preset.empty()) {
      if (config.custom) {
        throw InvalidArgument("--preset conflicts with the config's custom sweep");
      }
      config.preset = preset;
    }
    if (*seed_opt) config.seed = seed;
    if (workers > 0) config.workers = workers;
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (no_plots) config.emit_plots = false;
    if (trajectories > 0) config.trajectories = trajectories;
    if (!estimator.empty()) config.estimator = parse_estimator(estimator);
    cli::validate(config);
    return cli::execute(config, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
