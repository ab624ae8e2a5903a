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
#include <functional>
#include <mutex>
#include <ostream>
#include <sstream>

#include "qsync/cli.hpp"
#include "qsync/parallel.hpp"

namespace qsync::cli {
namespace {

namespace fs = std::filesystem;

// Writes one output file; reports and returns false on I/O failure.
bool emit(const fs::path& path, const std::function<void(std::ostream&)>& body,
          std::ostream& log) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    log << "error: cannot open " << path.string() << " for writing\n";
    return false;
  }
  out.imbue(std::locale::classic());
  body(out);
  out.flush();
  if (!out) {
    log << "error: write failed for " << path.string() << "\n";
    return false;
  }
  log << "wrote " << path.string() << "\n";
  return true;
}

bool write_outputs(const RunConfig& config, const SweepResult& result,
                   std::ostream& log) {
  const fs::path dir = config.out_dir;
  const std::string& name = result.spec.name;
  bool ok = true;

  if (config.formats.count("csv")) {
    ok &= emit(dir / (name + ".csv"),
               [&](std::ostream& o) { write_csv(result, o); }, log);
    using Table = bool (*)(const SweepResult&, std::ostream&);
    const std::pair<const char*, Table> tables[] = {
        {"_runs.csv", write_runs_csv},
        {"_optimal.csv", write_optimal_csv},
        {"_diff.csv", write_diff_csv},
        {"_profile.csv", write_profile_csv}};
    for (const auto& [suffix, table] : tables) {
      std::ostringstream buffer;
      if (!table(result, buffer)) continue;
      ok &= emit(dir / (name + suffix),
                 [&](std::ostream& o) { o << buffer.str(); }, log);
    }
  }
  if (config.emit_plots && config.formats.count("svg")) {
    ok &= emit(dir / (name + "_F.svg"),
               [&](std::ostream& o) { o << render_svg(result, PlotMetric::kF); },
               log);
    ok &= emit(dir / (name + "_S.svg"),
               [&](std::ostream& o) {
                 o << render_svg(result, PlotMetric::kCoherence);
               },
               log);
  }
  ok &= emit(dir / (name + "_provenance.json"),
             [&](std::ostream& o) { o << provenance_json(result); }, log);
  return ok;
}

}  // namespace

int execute(const RunConfig& config, std::ostream& log) {
  SweepSpec spec;
  try {
    spec = resolve_spec(config);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  }

  int workers = config.workers;
  if (const auto cap = env_worker_cap()) workers = std::min(workers, *cap);
  set_max_workers(workers);

  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) {
    log << "error: cannot create " << config.out_dir.string() << ": "
        << ec.message() << "\n";
    return 1;
  }

  log << "sweep " << spec.name << ": " << spec.point_count() << " points x "
      << spec.n_runs << " run(s) x " << spec.n_traj << " trajectories, "
      << workers << " worker(s), seed " << spec.cfg.seed << "\n";

  std::mutex log_mutex;
  auto progress = [&](std::size_t point, std::size_t done, std::size_t total) {
    std::lock_guard<std::mutex> lock(log_mutex);
    const auto coords = spec.coordinates(point);
    log << "[" << done << "/" << total << "] point " << point;
    for (std::size_t a = 0; a < coords.size(); ++a) {
      log << (a ? ", " : " (") << spec.axes[a].name << "="
          << format_number(coords[a]) << (a + 1 == coords.size() ? ")" : "");
    }
    log << std::endl;
  };

  SweepResult result;
  bool failed = false;
  try {
    result = run_sweep(spec, progress);
  } catch (const SweepFailure& e) {
    log << "error: " << e.what() << "\n";
    result = e.result();
    failed = true;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }

  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const SweepRow& row = result.rows[i];
    if (!row.ok) log << "point " << i << " failed: " << row.error << "\n";
    for (const auto& w : row.warnings) log << "point " << i << " warning: " << w << "\n";
  }

  const bool written = write_outputs(config, result, log);
  log << "done in " << result.provenance.wall_seconds << " s, "
      << result.failed_count() << " failed point(s)\n";
  return written && !failed ? 0 : 1;
}

}  // namespace qsync::cli
