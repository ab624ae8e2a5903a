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

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "qsync/cli.hpp"

namespace qsync::cli {
namespace {

std::size_t axis_index(const SweepSpec& spec, std::string_view name) {
  for (std::size_t a = 0; a < spec.axes.size(); ++a) {
    if (spec.axes[a].name == name) return a;
  }
  return spec.axes.size();
}

void write_header(std::ostream& out, const SweepSpec& spec, std::size_t skip,
                  std::initializer_list<const char*> tail) {
  bool first = true;
  for (std::size_t a = 0; a < spec.axes.size(); ++a) {
    if (a == skip) continue;
    out << (first ? "" : ",") << spec.axes[a].name;
    first = false;
  }
  for (const char* col : tail) {
    out << (first ? "" : ",") << col;
    first = false;
  }
  out << '\n';
}

void write_coords(std::ostream& out, const std::vector<double>& coords,
                  std::size_t skip) {
  bool first = true;
  for (std::size_t a = 0; a < coords.size(); ++a) {
    if (a == skip) continue;
    out << (first ? "" : ",") << format_number(coords[a]);
    first = false;
  }
  if (!first) out << ',';
}

// Short tick labels; cosmetic only.
std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string svg_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr std::array<const char*, 8> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

// Roughly viridis.
std::string colormap(double t) {
  static constexpr double stops[5][3] = {{68, 1, 84},
                                         {59, 82, 139},
                                         {33, 145, 140},
                                         {94, 201, 98},
                                         {253, 231, 37}};
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0) * 4.0;
  const int i = std::min(3, int(t));
  const double f = t - i;
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                int(stops[i][0] + f * (stops[i + 1][0] - stops[i][0])),
                int(stops[i][1] + f * (stops[i + 1][1] - stops[i][1])),
                int(stops[i][2] + f * (stops[i + 1][2] - stops[i][2])));
  return buf;
}

std::string metric_label(PlotMetric m) {
  return m == PlotMetric::kF ? "F" : "|S|  (solid: HD, dashed: no measurement)";
}

std::string slice_label(const SweepSpec& spec, const std::vector<double>& coords,
                        const std::vector<std::size_t>& axes) {
  std::string label;
  for (std::size_t a : axes) {
    if (!label.empty()) label += ", ";
    label += spec.axes[a].name + "=" + tick(coords[a]);
  }
  return label;
}

struct Frame {
  double x0, y0, w, h;  // plot area in pixels
  double xmin, xmax, ymin, ymax;
  bool logx;

  double px(double x) const {
    const double t = logx ? (std::log(x) - std::log(xmin)) /
                                (std::log(xmax) - std::log(xmin))
                          : (x - xmin) / (xmax - xmin);
    return x0 + t * w;
  }
  double py(double y) const { return y0 + h - (y - ymin) / (ymax - ymin) * h; }
};

void draw_axes(std::ostringstream& s, const Frame& f, const std::string& xlabel,
               const std::string& ylabel, const std::vector<double>& xticks) {
  s << "<rect x='" << f.x0 << "' y='" << f.y0 << "' width='" << f.w
    << "' height='" << f.h << "' fill='none' stroke='black'/>\n";
  for (double x : xticks) {
    s << "<text x='" << f.px(x) << "' y='" << f.y0 + f.h + 16
      << "' font-size='11' text-anchor='middle'>" << tick(x) << "</text>\n";
  }
  for (int k = 0; k <= 4; ++k) {
    const double y = f.ymin + (f.ymax - f.ymin) * k / 4.0;
    s << "<text x='" << f.x0 - 6 << "' y='" << f.py(y) + 4
      << "' font-size='11' text-anchor='end'>" << tick(y) << "</text>\n";
  }
  s << "<text x='" << f.x0 + f.w / 2 << "' y='" << f.y0 + f.h + 34
    << "' font-size='13' text-anchor='middle'>" << svg_escape(xlabel)
    << "</text>\n";
  s << "<text x='" << f.x0 << "' y='" << f.y0 - 8 << "' font-size='13'>"
    << svg_escape(ylabel) << "</text>\n";
}

std::string line_plot(const SweepResult& r, PlotMetric metric) {
  const SweepSpec& spec = r.spec;
  std::size_t xa = 0;
  for (std::size_t a = 1; a < spec.axes.size(); ++a) {
    if (spec.axes[a].values.size() > spec.axes[xa].values.size()) xa = a;
  }
  std::vector<std::size_t> others;
  for (std::size_t a = 0; a < spec.axes.size(); ++a) {
    if (a != xa) others.push_back(a);
  }

  // series keyed by the other coordinates, in grid order
  std::vector<std::vector<double>> keys;
  std::map<std::vector<double>, std::vector<const SweepRow*>> series;
  double ymin = INFINITY, ymax = -INFINITY;
  for (const SweepRow& row : r.rows) {
    std::vector<double> key;
    for (std::size_t a : others) key.push_back(row.coords[a]);
    auto [it, fresh] = series.try_emplace(key);
    if (fresh) keys.push_back(key);
    it->second.push_back(&row);
    if (!row.ok) continue;
    const auto& rep = *row.report;
    for (double y : metric == PlotMetric::kF
                        ? std::vector<double>{rep.F}
                        : std::vector<double>{rep.S0.magnitude, rep.S_HD_abs}) {
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!(ymin <= ymax)) ymin = 0.0, ymax = 1.0;
  if (metric == PlotMetric::kF) ymin = std::min(ymin, 1.0);
  const double pad = ymax > ymin ? 0.05 * (ymax - ymin) : 0.5;

  const auto& xs = spec.axes[xa].values;
  const auto [xlo, xhi] = std::minmax_element(xs.begin(), xs.end());
  Frame f{70, 40, 520, 320, *xlo, *xhi, ymin - pad, ymax + pad,
          *xlo > 0.0 && *xhi / *xlo >= 20.0};
  if (f.xmax == f.xmin) f.xmin -= 0.5, f.xmax += 0.5, f.logx = false;

  std::ostringstream s;
  const double legend_h = 18.0 * double(keys.size());
  s << "<svg xmlns='http://www.w3.org/2000/svg' width='800' height='"
    << std::max(420.0, 60 + legend_h) << "' font-family='sans-serif'>\n";
  s << "<rect width='100%' height='100%' fill='white'/>\n";
  draw_axes(s, f, spec.axes[xa].name + (f.logx ? " (log)" : ""),
            spec.name + ": " + metric_label(metric), xs);
  if (metric == PlotMetric::kF && f.ymin < 1.0 && f.ymax > 1.0) {
    s << "<line x1='" << f.x0 << "' x2='" << f.x0 + f.w << "' y1='" << f.py(1.0)
      << "' y2='" << f.py(1.0) << "' stroke='#999' stroke-dasharray='2,3'/>\n";
  }

  for (std::size_t k = 0; k < keys.size(); ++k) {
    const char* color = kPalette[k % kPalette.size()];
    auto rows = series[keys[k]];
    std::sort(rows.begin(), rows.end(), [xa](const SweepRow* a, const SweepRow* b) {
      return a->coords[xa] < b->coords[xa];
    });
    auto polyline = [&](auto value, const char* dash) {
      s << "<polyline fill='none' stroke='" << color << "' stroke-width='1.8'"
        << dash << " points='";
      for (const SweepRow* row : rows) {
        if (row->ok) s << f.px(row->coords[xa]) << ',' << f.py(value(*row)) << ' ';
      }
      s << "'/>\n";
      for (const SweepRow* row : rows) {
        if (row->ok) {
          s << "<circle cx='" << f.px(row->coords[xa]) << "' cy='"
            << f.py(value(*row)) << "' r='2.5' fill='" << color << "'/>\n";
        }
      }
    };
    if (metric == PlotMetric::kF) {
      polyline([](const SweepRow& row) { return row.report->F; }, "");
    } else {
      polyline([](const SweepRow& row) { return row.report->S_HD_abs; }, "");
      polyline([](const SweepRow& row) { return row.report->S0.magnitude; },
               " stroke-dasharray='5,4'");
    }
    std::vector<double> full(spec.axes.size(), 0.0);
    for (std::size_t j = 0; j < others.size(); ++j) full[others[j]] = keys[k][j];
    const std::string label =
        others.empty() ? spec.name : slice_label(spec, full, others);
    s << "<line x1='610' x2='630' y1='" << 50 + 18 * k << "' y2='" << 50 + 18 * k
      << "' stroke='" << color << "' stroke-width='2'/>\n";
    s << "<text x='636' y='" << 54 + 18 * k << "' font-size='11'>"
      << svg_escape(label) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string heatmap(const SweepResult& r, PlotMetric metric) {
  const SweepSpec& spec = r.spec;
  const std::size_t n = spec.axes.size();
  const std::size_t xa = n - 2, ya = n - 1;
  const auto& xs = spec.axes[xa].values;
  const auto& ys = spec.axes[ya].values;
  const std::size_t per_panel = xs.size() * ys.size();
  const std::size_t panels = r.rows.size() / per_panel;

  auto value = [metric](const SweepRow& row) {
    return metric == PlotMetric::kF ? row.report->F : row.report->S_HD_abs;
  };
  double vmin = INFINITY, vmax = -INFINITY;
  for (const SweepRow& row : r.rows) {
    if (!row.ok) continue;
    vmin = std::min(vmin, value(row));
    vmax = std::max(vmax, value(row));
  }
  if (!(vmin < vmax)) vmax = vmin + 1.0;
  if (!std::isfinite(vmin)) vmin = 0.0, vmax = 1.0;

  const double pw = 360, ph = 300, gap = 90;
  std::ostringstream s;
  s << "<svg xmlns='http://www.w3.org/2000/svg' width='"
    << 80 + panels * (pw + gap) + 80 << "' height='" << ph + 110
    << "' font-family='sans-serif'>\n";
  s << "<rect width='100%' height='100%' fill='white'/>\n";
  std::vector<std::size_t> lead;
  for (std::size_t a = 0; a < xa; ++a) lead.push_back(a);

  const double cw = pw / double(xs.size()), ch = ph / double(ys.size());
  for (std::size_t p = 0; p < panels; ++p) {
    const double ox = 70 + double(p) * (pw + gap), oy = 50;
    const SweepRow& first = r.rows[p * per_panel];
    std::string title = spec.name + ": " + (metric == PlotMetric::kF ? "F" : "|S_HD|");
    if (!lead.empty()) title += "  (" + slice_label(spec, first.coords, lead) + ")";
    s << "<text x='" << ox << "' y='" << oy - 12 << "' font-size='13'>"
      << svg_escape(title) << "</text>\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (std::size_t j = 0; j < ys.size(); ++j) {
        const SweepRow& row = r.rows[p * per_panel + i * ys.size() + j];
        const std::string fill =
            row.ok ? colormap((value(row) - vmin) / (vmax - vmin)) : "#cccccc";
        s << "<rect x='" << ox + cw * i << "' y='" << oy + ph - ch * (j + 1)
          << "' width='" << cw + 0.5 << "' height='" << ch + 0.5 << "' fill='"
          << fill << "'/>\n";
      }
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
      s << "<text x='" << ox + cw * (i + 0.5) << "' y='" << oy + ph + 16
        << "' font-size='10' text-anchor='middle'>" << tick(xs[i]) << "</text>\n";
    }
    for (std::size_t j = 0; j < ys.size(); ++j) {
      s << "<text x='" << ox - 5 << "' y='" << oy + ph - ch * (j + 0.5) + 4
        << "' font-size='10' text-anchor='end'>" << tick(ys[j]) << "</text>\n";
    }
    s << "<text x='" << ox + pw / 2 << "' y='" << oy + ph + 34
      << "' font-size='12' text-anchor='middle'>" << spec.axes[xa].name
      << "</text>\n";
    s << "<text x='" << ox - 40 << "' y='" << oy + ph / 2
      << "' font-size='12' text-anchor='middle' transform='rotate(-90 "
      << ox - 40 << ' ' << oy + ph / 2 << ")'>" << spec.axes[ya].name
      << "</text>\n";
  }
  // colour bar
  const double bx = 70 + double(panels) * (pw + gap) - gap + 20;
  for (int k = 0; k < 50; ++k) {
    s << "<rect x='" << bx << "' y='" << 50 + ph - (k + 1) * ph / 50
      << "' width='16' height='" << ph / 50 + 0.5 << "' fill='"
      << colormap(k / 49.0) << "'/>\n";
  }
  s << "<text x='" << bx + 20 << "' y='" << 50 + ph << "' font-size='10'>"
    << tick(vmin) << "</text>\n";
  s << "<text x='" << bx + 20 << "' y='" << 58 << "' font-size='10'>"
    << tick(vmax) << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 10);
  return std::string(buf, res.ptr);
}

std::string row_status(const SweepRow& row) {
  if (!row.ok) return "error";
  return row.warnings.empty() ? "ok" : "warn";
}

void write_csv(const SweepResult& result, std::ostream& out) {
  const SweepSpec& spec = result.spec;
  write_header(out, spec, spec.axes.size(),
               {"F", "F_mc_stderr", "S0_abs", "S_HD_abs", "S_HD_phase", "P0",
                "P_HD", "F_purity", "status"});
  for (const SweepRow& row : result.rows) {
    write_coords(out, row.coords, spec.axes.size());
    if (row.ok) {
      const EnhancementReport& r = *row.report;
      for (double v : {r.F, r.mc_stderr_F, r.S0.magnitude, r.S_HD_abs,
                       std::arg(r.S_HD), r.P0, r.P_HD, r.F_purity}) {
        out << format_number(v) << ',';
      }
    } else {
      out << ",,,,,,,,";
    }
    out << row_status(row) << '\n';
  }
}

bool write_runs_csv(const SweepResult& result, std::ostream& out) {
  if (result.spec.n_runs < 2) return false;
  const SweepSpec& spec = result.spec;
  write_header(out, spec, spec.axes.size(),
               {"mean_F", "std_F", "std_over_mean", "n_runs", "status"});
  for (const SweepRow& row : result.rows) {
    write_coords(out, row.coords, spec.axes.size());
    if (row.ok && row.runs) {
      const RunStatistics& s = *row.runs;
      out << format_number(s.mean_F) << ',' << format_number(s.std_F) << ','
          << format_number(s.std_F / s.mean_F) << ',' << s.F.size() << ',';
    } else {
      out << ",,,,";
    }
    out << row_status(row) << '\n';
  }
  return true;
}

bool write_optimal_csv(const SweepResult& result, std::ostream& out) {
  const SweepSpec& spec = result.spec;
  const std::size_t g = axis_index(spec, "gamma2");
  if (g == spec.axes.size() || spec.axes[g].values.size() < 3) return false;
  const auto raw = optimal_gamma2(result, Smoothing::kNone);
  const auto smooth = optimal_gamma2(result, Smoothing::kLocalQuadratic);
  write_header(out, spec, g,
               {"gamma2_opt", "F_opt", "gamma2_opt_smoothed", "F_opt_smoothed",
                "on_boundary"});
  for (std::size_t k = 0; k < raw.size(); ++k) {
    for (const auto& [name, value] : raw[k].slice) out << format_number(value) << ',';
    out << format_number(raw[k].gamma2_opt) << ',' << format_number(raw[k].F_opt)
        << ',' << format_number(smooth[k].gamma2_opt) << ','
        << format_number(smooth[k].F_opt) << ','
        << (raw[k].on_boundary ? "true" : "false") << '\n';
  }
  return true;
}

bool write_diff_csv(const SweepResult& result, std::ostream& out) {
  const SweepSpec& spec = result.spec;
  const std::size_t e = axis_index(spec, "eta");
  if (e == spec.axes.size() || spec.axes[e].values.size() < 2) return false;
  const double eta0 = spec.axes[e].values.front();

  std::map<std::vector<double>, const SweepRow*> reference;
  for (const SweepRow& row : result.rows) {
    if (row.coords[e] != eta0) continue;
    std::vector<double> key = row.coords;
    key.erase(key.begin() + std::ptrdiff_t(e));
    reference[key] = &row;
  }
  write_header(out, spec, spec.axes.size(),
               {"eta_ref", "dF", "dF_mc_stderr", "status"});
  for (const SweepRow& row : result.rows) {
    if (row.coords[e] == eta0) continue;
    std::vector<double> key = row.coords;
    key.erase(key.begin() + std::ptrdiff_t(e));
    const SweepRow* ref = reference.count(key) ? reference[key] : nullptr;
    write_coords(out, row.coords, spec.axes.size());
    out << format_number(eta0) << ',';
    if (row.ok && ref && ref->ok) {
      const double se = std::hypot(row.report->mc_stderr_F, ref->report->mc_stderr_F);
      out << format_number(row.report->F - ref->report->F) << ','
          << format_number(se) << ",ok\n";
    } else {
      out << ",,error\n";
    }
  }
  return true;
}

bool write_profile_csv(const SweepResult& result, std::ostream& out) {
  std::size_t bands = 0;
  for (const SweepRow& row : result.rows) {
    bands = std::max(bands, row.coherence_bands.size());
  }
  if (bands == 0) return false;
  const SweepSpec& spec = result.spec;
  for (const Axis& a : spec.axes) out << a.name << ',';
  for (std::size_t k = 0; k < bands; ++k) out << "band_" << k << ',';
  out << "status\n";
  for (const SweepRow& row : result.rows) {
    write_coords(out, row.coords, spec.axes.size());
    for (std::size_t k = 0; k < bands; ++k) {
      if (k < row.coherence_bands.size()) out << format_number(row.coherence_bands[k]);
      out << ',';
    }
    out << row_status(row) << '\n';
  }
  return true;
}

std::string render_svg(const SweepResult& result, PlotMetric metric) {
  if (result.spec.axes.empty()) {
    // a single point still gets a (one-marker) plot
    SweepResult copy = result;
    copy.spec.axes.push_back({"point", {0.0}});
    for (SweepRow& row : copy.rows) row.coords = {0.0};
    return line_plot(copy, metric);
  }
  if (result.spec.resolved_plot() == PlotKind::kHeatmap &&
      result.spec.axes.size() >= 2) {
    return heatmap(result, metric);
  }
  return line_plot(result, metric);
}

std::string provenance_json(const SweepResult& result) {
  using nlohmann::json;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                (unsigned long long)parameter_hash(result.spec));
  json j = json::object();
  j["name"] = result.spec.name;
  j["seed"] = result.provenance.seed;
  j["parameter_hash"] = hash;
  j["version"] = result.provenance.version;
  j["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                       std::to_string(EIGEN_MAJOR_VERSION) + "." +
                       std::to_string(EIGEN_MINOR_VERSION);
  j["wall_seconds"] = result.provenance.wall_seconds;
  j["points"] = result.rows.size();
  j["failed_points"] = result.failed_count();
  j["spec"] = json::parse(spec_to_json(result.spec));
  json diag = json::array();
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const SweepRow& row = result.rows[i];
    if (row.ok && row.warnings.empty()) continue;
    json d = {{"index", i}, {"coords", row.coords}, {"status", row_status(row)}};
    if (!row.ok) d["error"] = row.error;
    if (!row.warnings.empty()) d["warnings"] = row.warnings;
    if (row.report) d["dim"] = row.report->dim;
    diag.push_back(d);
  }
  j["diagnostics"] = diag;
  return j.dump(2) + "\n";
}

}  // namespace qsync::cli
