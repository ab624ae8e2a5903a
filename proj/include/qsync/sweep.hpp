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

// Declarative parameter sweeps and the figure presets built on them.

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qsync/enhancement.hpp"

namespace qsync {

struct Axis {
  std::string name;  // a ModelParams field name
  std::vector<double> values;

  bool operator==(const Axis&) const = default;
};

enum class PlotKind { kAuto, kLines, kHeatmap };

std::string_view to_string(PlotKind k);
PlotKind parse_plot_kind(std::string_view name);

// Names accepted in Axis::name.
const std::vector<std::string>& parameter_names();
// Names accepted in SweepSpec::outputs.
const std::vector<std::string>& output_names();

void set_parameter(ModelParams& p, std::string_view name, double value);
double get_parameter(const ModelParams& p, std::string_view name);

struct SweepSpec {
  std::string name = "sweep";
  ModelParams base;
  std::vector<Axis> axes;
  int n_traj = 300;
  int n_runs = 1;
  // cfg.dt <= 0 selects SdeConfig::defaults_for() at every grid point.
  SdeConfig cfg;
  std::set<std::string> outputs = {"F", "S0", "S_HD", "P0", "P_HD",
                                   "F_purity", "mc_stderr"};
  CoherenceEstimator estimator = CoherenceEstimator::kMagnitudeMean;
  // Every grid point reuses cfg.seed (common random numbers), which keeps
  // differences between neighbouring points free of independent MC noise.
  // Otherwise point i uses derive_seed(cfg.seed, i).
  bool common_random_numbers = true;
  PlotKind plot = PlotKind::kAuto;

  // Throws InvalidArgument naming the offending field.
  void validate() const;
  std::size_t point_count() const;
  // Parameters of grid point `index` (lexicographic, first axis outermost).
  // The truncation is re-derived from gamma2 unless base.dim or a "dim"
  // axis pins it.
  ModelParams point(std::size_t index) const;
  std::vector<double> coordinates(std::size_t index) const;
  PlotKind resolved_plot() const;

  bool operator==(const SweepSpec&) const = default;
};

struct SweepRow {
  std::vector<double> coords;
  bool ok = false;
  std::string error;
  std::vector<std::string> warnings;
  std::optional<EnhancementReport> report;  // first run
  std::optional<RunStatistics> runs;        // when n_runs > 1
  std::vector<double> coherence_bands;      // when requested
};

struct Provenance {
  std::uint64_t seed = 0;
  std::string version;
  double wall_seconds = 0.0;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;
  Provenance provenance;

  std::size_t failed_count() const;
  double failure_fraction() const;
};

// Raised when more than 10% of the grid points fail. Carries the partial
// result so callers can still inspect or write it.
class SweepFailure : public Error {
 public:
  SweepFailure(const std::string& what, SweepResult result)
      : Error(what), result_(std::move(result)) {}
  const SweepResult& result() const noexcept { return result_; }

 private:
  SweepResult result_;
};

inline constexpr double kMaxFailureFraction = 0.1;

// Called once per finished grid point, possibly from a worker thread.
using SweepProgress =
    std::function<void(std::size_t point, std::size_t done, std::size_t total)>;

SweepResult run_sweep(const SweepSpec& spec, const SweepProgress& progress = {});

const std::vector<std::string>& preset_names();
SweepSpec figure_preset(std::string_view name);

enum class Smoothing { kNone, kLocalQuadratic };

struct OptimalGamma2 {
  std::vector<std::pair<std::string, double>> slice;  // other axes
  double gamma2_opt;
  double F_opt;
  bool on_boundary;
};

std::vector<OptimalGamma2> optimal_gamma2(const SweepResult& result,
                                          Smoothing smoothing);

}  // namespace qsync
