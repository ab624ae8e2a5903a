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

#pragma once

// Configuration, serialization and output writers behind the qsync tool.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "qsync/sweep.hpp"

namespace qsync::cli {

// Parse or validation error; the message starts with the JSON key path.
class ConfigError : public InvalidArgument {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : InvalidArgument((path.empty() ? std::string("<root>") : path) + ": " +
                        what),
        path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct RunConfig {
  std::optional<std::string> preset;
  std::optional<SweepSpec> custom;
  std::uint64_t seed = 0;
  int workers = 1;  // machine parallelism unless given
  std::filesystem::path out_dir = "./out";
  bool emit_plots = true;
  std::set<std::string> formats = {"csv", "svg"};
  std::optional<int> trajectories;  // overrides n_traj
  std::optional<CoherenceEstimator> estimator;

  bool operator==(const RunConfig&) const = default;
};

RunConfig default_config();

// Strict JSON: unknown keys, type mismatches and missing required keys are
// rejected with the offending key path.
RunConfig parse_config(std::string_view document);

// Canonical JSON; parse_config(serialize(c)) == c.
std::string serialize(const RunConfig& config);

// Checks cross-field rules (exactly one of preset/custom, ...).
void validate(const RunConfig& config);

// The sweep a config describes, with seed and overrides applied.
SweepSpec resolve_spec(const RunConfig& config);

// CSV number format: 10 significant digits, '.' decimal point, no locale.
std::string format_number(double value);

// Main table; columns are the axes, then kMetricColumns.
inline constexpr const char* kMetricColumns[] = {
    "F",    "F_mc_stderr", "S0_abs", "S_HD_abs", "S_HD_phase",
    "P0",   "P_HD",        "F_purity", "status"};

std::string row_status(const SweepRow& row);
void write_csv(const SweepResult& result, std::ostream& out);
// Side tables; each returns false when it does not apply to the sweep.
bool write_runs_csv(const SweepResult& result, std::ostream& out);
bool write_optimal_csv(const SweepResult& result, std::ostream& out);
bool write_diff_csv(const SweepResult& result, std::ostream& out);
bool write_profile_csv(const SweepResult& result, std::ostream& out);

enum class PlotMetric { kF, kCoherence };
std::string render_svg(const SweepResult& result, PlotMetric metric);

// The spec as canonical JSON (the "custom" block of a config).
std::string spec_to_json(const SweepSpec& spec);

// FNV-1a over the canonical JSON form of the spec.
std::uint64_t parameter_hash(const SweepSpec& spec);
std::string provenance_json(const SweepResult& result);

// Runs the sweep and writes every output. Returns the process exit status;
// diagnostics and per-point progress go to `log`.
int execute(const RunConfig& config, std::ostream& log);

}  // namespace qsync::cli
