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

#include "qsync/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "qsync/parallel.hpp"
#include "qsync/rng.hpp"

namespace qsync {
namespace {

struct ParamField {
  const char* name;
  double ModelParams::*field;
};

constexpr ParamField kFields[] = {
    {"delta", &ModelParams::delta},   {"E", &ModelParams::E},
    {"eta", &ModelParams::eta},       {"phi", &ModelParams::phi},
    {"gamma1", &ModelParams::gamma1}, {"gamma2", &ModelParams::gamma2},
    {"gamma3", &ModelParams::gamma3}, {"eta_d", &ModelParams::eta_d},
    {"theta", &ModelParams::theta},
};

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * double(i) / double(n - 1);
  return v;
}

// Grids shared by several presets.
const std::vector<double> kFig1Gamma2 = {0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0};
const std::vector<double> kWideGamma2 = {0.05, 0.1, 0.2, 0.5, 0.75, 1.0,
                                         1.5,  2.0, 2.5, 3.0};
const std::vector<double> kContourGamma2 = {0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 3.0};
const std::vector<double> kContourGamma3 = {0.05, 0.1, 0.2, 0.3, 0.5};

ModelParams resonant_base() {
  ModelParams p;
  p.delta = 0.0;
  p.E = 0.3;
  p.gamma3 = 0.1;
  p.theta = std::numbers::pi / 2.0;
  p.eta = 0.0;
  p.eta_d = 1.0;
  return p;
}

SweepSpec make_spec(std::string name, ModelParams base, std::vector<Axis> axes,
                    PlotKind plot = PlotKind::kAuto) {
  SweepSpec s;
  s.name = std::move(name);
  s.base = base;
  s.axes = std::move(axes);
  s.cfg.dt = 0.0;
  s.plot = plot;
  return s;
}

}  // namespace

std::string_view to_string(PlotKind k) {
  switch (k) {
    case PlotKind::kAuto:
      return "auto";
    case PlotKind::kLines:
      return "lines";
    case PlotKind::kHeatmap:
      return "heatmap";
  }
  return "auto";
}

PlotKind parse_plot_kind(std::string_view name) {
  if (name == "auto") return PlotKind::kAuto;
  if (name == "lines") return PlotKind::kLines;
  if (name == "heatmap") return PlotKind::kHeatmap;
  throw InvalidArgument("unknown plot kind '" + std::string(name) + "'");
}

const std::vector<std::string>& parameter_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& f : kFields) v.emplace_back(f.name);
    v.emplace_back("dim");
    return v;
  }();
  return names;
}

const std::vector<std::string>& output_names() {
  static const std::vector<std::string> names = {
      "F", "S0", "S_HD", "P0", "P_HD", "F_purity", "mc_stderr",
      "coherence_profile"};
  return names;
}

void set_parameter(ModelParams& p, std::string_view name, double value) {
  if (name == "dim") {
    if (value != std::floor(value)) {
      throw InvalidArgument("parameter 'dim' must be an integer");
    }
    p.dim = int(value);
    return;
  }
  for (const auto& f : kFields) {
    if (name == f.name) {
      p.*(f.field) = value;
      return;
    }
  }
  throw InvalidArgument("unknown parameter '" + std::string(name) + "'");
}

double get_parameter(const ModelParams& p, std::string_view name) {
  if (name == "dim") return double(p.dim);
  for (const auto& f : kFields) {
    if (name == f.name) return p.*(f.field);
  }
  throw InvalidArgument("unknown parameter '" + std::string(name) + "'");
}

void SweepSpec::validate() const {
  if (name.empty()) throw InvalidArgument("sweep: name must not be empty");
  const auto& known = parameter_names();
  std::set<std::string> seen;
  for (const Axis& axis : axes) {
    if (std::find(known.begin(), known.end(), axis.name) == known.end()) {
      throw InvalidArgument("sweep: unknown axis '" + axis.name + "'");
    }
    if (!seen.insert(axis.name).second) {
      throw InvalidArgument("sweep: duplicate axis '" + axis.name + "'");
    }
    if (axis.values.empty()) {
      throw InvalidArgument("sweep: axis '" + axis.name + "' has no values");
    }
    for (double v : axis.values) {
      if (!std::isfinite(v)) {
        throw InvalidArgument("sweep: axis '" + axis.name +
                              "' has a non-finite value");
      }
    }
  }
  const auto& metrics = output_names();
  for (const std::string& o : outputs) {
    if (std::find(metrics.begin(), metrics.end(), o) == metrics.end()) {
      throw InvalidArgument("sweep: unknown output '" + o + "'");
    }
  }
  if (n_traj < 1) throw InvalidArgument("sweep: n_traj must be >= 1");
  if (n_runs < 1) throw InvalidArgument("sweep: n_runs must be >= 1");
  base.validate();
}

std::size_t SweepSpec::point_count() const {
  std::size_t n = 1;
  for (const Axis& axis : axes) n *= axis.values.size();
  return n;
}

std::vector<double> SweepSpec::coordinates(std::size_t index) const {
  std::vector<double> coords(axes.size());
  for (std::size_t a = axes.size(); a-- > 0;) {
    const std::size_t len = axes[a].values.size();
    coords[a] = axes[a].values[index % len];
    index /= len;
  }
  return coords;
}

ModelParams SweepSpec::point(std::size_t index) const {
  ModelParams p = base;
  bool pinned = base.dim != 0;
  const std::vector<double> coords = coordinates(index);
  for (std::size_t a = 0; a < axes.size(); ++a) {
    set_parameter(p, axes[a].name, coords[a]);
    if (axes[a].name == "dim") pinned = true;
  }
  if (!pinned) p.dim = 0;
  return p;
}

PlotKind SweepSpec::resolved_plot() const {
  if (plot != PlotKind::kAuto) return plot;
  if (axes.size() == 2 && axes[0].values.size() >= 4 &&
      axes[1].values.size() >= 4) {
    return PlotKind::kHeatmap;
  }
  return PlotKind::kLines;
}

std::size_t SweepResult::failed_count() const {
  return std::size_t(std::count_if(rows.begin(), rows.end(),
                                   [](const SweepRow& r) { return !r.ok; }));
}

double SweepResult::failure_fraction() const {
  return rows.empty() ? 0.0 : double(failed_count()) / double(rows.size());
}

SweepResult run_sweep(const SweepSpec& spec, const SweepProgress& progress) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n_points = spec.point_count();
  const int n_runs = spec.n_runs;

  SweepResult result;
  result.spec = spec;
  result.rows.resize(n_points);
  std::vector<std::optional<TruncatedSteadyState>> bases(n_points);
  std::vector<SdeConfig> configs(n_points);

  // Phase 1: truncation and steady state per point.
  parallel_for(n_points, [&](std::size_t i) {
    SweepRow& row = result.rows[i];
    row.coords = spec.coordinates(i);
    try {
      const ModelParams p = spec.point(i);
      TruncatedSteadyState base = adaptive_steady_state(p);
      phase_coherence(base.steady.rho);  // S0 must be defined
      SdeConfig cfg = spec.cfg;
      if (!(cfg.dt > 0.0)) cfg.dt = SdeConfig::defaults_for(base.params).dt;
      if (!spec.common_random_numbers) cfg.seed = derive_seed(spec.cfg.seed, i);
      cfg.validate(base.params);
      configs[i] = cfg;
      bases[i] = std::move(base);
    } catch (const Error& e) {
      row.error = e.what();
    }
  });

  // Phase 2: one unit per (point, run). Units run in parallel when there
  // are enough of them; otherwise each ensemble parallelizes internally.
  struct Unit {
    std::size_t point;
    int run;
  };
  std::vector<Unit> units;
  for (std::size_t i = 0; i < n_points; ++i) {
    if (!bases[i]) continue;
    for (int r = 0; r < n_runs; ++r) units.push_back({i, r});
  }
  std::vector<std::optional<EnhancementReport>> reports(units.size());
  std::vector<std::string> unit_errors(units.size());
  std::vector<std::atomic<int>> remaining(n_points);
  for (std::size_t i = 0; i < n_points; ++i) remaining[i] = bases[i] ? n_runs : 0;
  std::atomic<std::size_t> done{0};
  for (std::size_t i = 0; i < n_points; ++i) {
    if (!bases[i] && progress) progress(i, ++done, n_points);
  }

  auto run_unit = [&](std::size_t u) {
    const Unit& unit = units[u];
    SdeConfig cfg = configs[unit.point];
    if (n_runs > 1) cfg.seed = run_seed(cfg.seed, unit.run);
    try {
      reports[u] = enhancement(*bases[unit.point], cfg, spec.n_traj,
                               spec.estimator);
    } catch (const Error& e) {
      unit_errors[u] = e.what();
    }
    if (--remaining[unit.point] == 0 && progress) {
      progress(unit.point, ++done, n_points);
    }
  };
  if (units.size() >= std::size_t(max_workers())) {
    parallel_for(units.size(), run_unit);
  } else {
    for (std::size_t u = 0; u < units.size(); ++u) run_unit(u);
  }

  // Phase 3: fixed-order assembly.
  for (std::size_t u = 0; u < units.size();) {
    const std::size_t i = units[u].point;
    SweepRow& row = result.rows[i];
    std::vector<double> F;
    std::string error;
    for (int r = 0; r < n_runs; ++r, ++u) {
      if (!unit_errors[u].empty()) {
        if (error.empty()) error = unit_errors[u];
        continue;
      }
      if (r == 0) row.report = reports[u];
      F.push_back(reports[u]->F);
    }
    if (!error.empty()) {
      row.error = error;
      row.report.reset();
      continue;
    }
    row.ok = true;
    row.warnings = row.report->warnings;
    if (n_runs > 1) {
      double mean = 0.0;
      for (double f : F) mean += f;
      mean /= double(F.size());
      double var = 0.0;
      for (double f : F) var += (f - mean) * (f - mean);
      row.runs = RunStatistics{mean, std::sqrt(var / double(F.size() - 1)), F};
    }
    if (spec.outputs.count("coherence_profile")) {
      const DensityMatrix& rho = bases[i]->steady.rho;
      row.coherence_bands = coherence_profile(rho, std::min(4, rho.dim() - 1));
    }
  }

  result.provenance.seed = spec.cfg.seed;
  result.provenance.version = QSYNC_VERSION;
  result.provenance.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  if (result.failure_fraction() > kMaxFailureFraction) {
    std::ostringstream os;
    os << "sweep '" << spec.name << "': " << result.failed_count() << " of "
       << n_points << " grid points failed";
    for (const SweepRow& row : result.rows) {
      if (!row.ok) {
        os << " (first error: " << row.error << ")";
        break;
      }
    }
    throw SweepFailure(os.str(), std::move(result));
  }
  return result;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "fig1",  "fig2", "fig3",  "fig4",  "fig5a", "fig5b",
      "fig5c", "fig6", "fig7a", "fig7b", "fig8"};
  return names;
}

SweepSpec figure_preset(std::string_view name) {
  const ModelParams base = resonant_base();
  const std::vector<double> theta_grid = linspace(0.0, std::numbers::pi, 13);

  if (name == "fig1" || name == "fig2") {
    return make_spec(std::string(name), base,
                     {{"gamma2", kFig1Gamma2}, {"E", {0.1, 0.3, 0.9}}},
                     PlotKind::kLines);
  }
  if (name == "fig3" || name == "fig4") {
    return make_spec(std::string(name), base,
                     {{"gamma2", kWideGamma2}, {"gamma3", {0.1, 0.3, 0.5}}},
                     PlotKind::kLines);
  }
  if (name == "fig5a" || name == "fig5b") {
    ModelParams p = base;
    p.eta = name == "fig5a" ? 0.0 : 0.1;
    return make_spec(std::string(name), p,
                     {{"gamma2", kContourGamma2}, {"gamma3", kContourGamma3}},
                     PlotKind::kHeatmap);
  }
  if (name == "fig5c") {
    return make_spec("fig5c", base,
                     {{"eta", {0.0, 0.1}},
                      {"gamma2", kContourGamma2},
                      {"gamma3", kContourGamma3}},
                     PlotKind::kHeatmap);
  }
  if (name == "fig6") {
    return make_spec("fig6", base,
                     {{"eta", {0.0, 0.05, 0.1}},
                      {"gamma3", {0.1, 0.3, 0.5}},
                      {"gamma2", {0.05, 0.1, 0.2, 0.3, 0.5, 1.0}}},
                     PlotKind::kLines);
  }
  if (name == "fig7a" || name == "fig7b") {
    ModelParams p = base;
    p.delta = name == "fig7a" ? 0.0 : 0.05;
    return make_spec(std::string(name), p,
                     {{"gamma2", {0.05, 0.5, 3.0}}, {"theta", theta_grid}},
                     PlotKind::kLines);
  }
  if (name == "fig8") {
    SweepSpec s = make_spec("fig8", base, {{"gamma2", kFig1Gamma2}},
                            PlotKind::kLines);
    s.n_runs = 20;
    return s;
  }
  std::string valid;
  for (const auto& n : preset_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw InvalidArgument("unknown preset '" + std::string(name) +
                        "'; valid presets: " + valid);
}

std::vector<OptimalGamma2> optimal_gamma2(const SweepResult& result,
                                          Smoothing smoothing) {
  const auto& axes = result.spec.axes;
  std::size_t g = axes.size();
  for (std::size_t a = 0; a < axes.size(); ++a) {
    if (axes[a].name == "gamma2") g = a;
  }
  if (g == axes.size()) {
    throw InvalidArgument("optimal_gamma2: sweep has no gamma2 axis");
  }

  // Slices keyed by the remaining coordinates, in first-appearance order.
  std::vector<std::vector<double>> keys;
  std::map<std::vector<double>, std::vector<std::pair<double, double>>> slices;
  for (const SweepRow& row : result.rows) {
    if (!row.ok) continue;
    std::vector<double> key = row.coords;
    key.erase(key.begin() + std::ptrdiff_t(g));
    auto [it, inserted] = slices.try_emplace(key);
    if (inserted) keys.push_back(key);
    it->second.emplace_back(row.coords[g], row.report->F);
  }

  std::vector<OptimalGamma2> out;
  for (const auto& key : keys) {
    auto points = slices[key];
    std::sort(points.begin(), points.end());
    std::size_t best = 0;
    for (std::size_t k = 1; k < points.size(); ++k) {
      if (points[k].second > points[best].second) best = k;
    }
    OptimalGamma2 opt;
    for (std::size_t a = 0, j = 0; a < axes.size(); ++a) {
      if (a == g) continue;
      opt.slice.emplace_back(axes[a].name, key[j++]);
    }
    opt.gamma2_opt = points[best].first;
    opt.F_opt = points[best].second;
    opt.on_boundary = best == 0 || best + 1 == points.size();
    if (smoothing == Smoothing::kLocalQuadratic && !opt.on_boundary) {
      // Parabola through the peak and its neighbours (Lagrange form).
      const auto [x0, y0] = points[best - 1];
      const auto [x1, y1] = points[best];
      const auto [x2, y2] = points[best + 1];
      const double d0 = y0 / ((x0 - x1) * (x0 - x2));
      const double d1 = y1 / ((x1 - x0) * (x1 - x2));
      const double d2 = y2 / ((x2 - x0) * (x2 - x1));
      const double A = d0 + d1 + d2;
      const double B = -(d0 * (x1 + x2) + d1 * (x0 + x2) + d2 * (x0 + x1));
      const double C = d0 * x1 * x2 + d1 * x0 * x2 + d2 * x0 * x1;
      if (A < 0.0) {
        const double xv = std::clamp(-B / (2.0 * A), x0, x2);
        opt.gamma2_opt = xv;
        opt.F_opt = (A * xv + B) * xv + C;
      }
    }
    out.push_back(std::move(opt));
  }
  return out;
}

}  // namespace qsync
