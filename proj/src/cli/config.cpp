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
#include <limits>

#include "json.hpp"

#include "qsync/cli.hpp"
#include "qsync/parallel.hpp"

namespace qsync::cli {
namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string type_name(const json& j) { return j.type_name(); }

// A JSON object whose keys must all be consumed.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) {
      throw ConfigError(path_, "expected object, got " + type_name(j));
    }
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  std::string path(const std::string& key) const { return join(path_, key); }

  const json& at(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) throw ConfigError(path(key), "missing required key");
    return j_.at(key);
  }

  double number(const std::string& key, double fallback) {
    return has(key) ? as_number(at(key), path(key)) : (used_.insert(key), fallback);
  }
  int integer(const std::string& key, int fallback) {
    return has(key) ? as_int(at(key), path(key)) : (used_.insert(key), fallback);
  }
  bool boolean(const std::string& key, bool fallback) {
    return has(key) ? as_bool(at(key), path(key)) : (used_.insert(key), fallback);
  }
  std::string string(const std::string& key, std::string fallback) {
    return has(key) ? as_string(at(key), path(key))
                    : (used_.insert(key), std::move(fallback));
  }

  // Rejects keys nobody asked for.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) {
        throw ConfigError(path(it.key()), "unknown key");
      }
    }
  }

  static double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) {
      throw ConfigError(path, "expected number, got " + type_name(j));
    }
    return j.get<double>();
  }
  static int as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) {
      throw ConfigError(path, "expected integer, got " + type_name(j));
    }
    const auto v = j.get<std::int64_t>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
      throw ConfigError(path, "integer out of range");
    }
    return int(v);
  }
  static bool as_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) {
      throw ConfigError(path, "expected boolean, got " + type_name(j));
    }
    return j.get<bool>();
  }
  static std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) {
      throw ConfigError(path, "expected string, got " + type_name(j));
    }
    return j.get<std::string>();
  }
  static const json& as_array(const json& j, const std::string& path) {
    if (!j.is_array()) {
      throw ConfigError(path, "expected array, got " + type_name(j));
    }
    return j;
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

template <typename Fn>
auto wrap(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

constexpr const char* kParamKeys[] = {"delta", "E",      "eta",
                                      "phi",   "gamma1", "gamma2",
                                      "gamma3", "eta_d", "theta"};

ModelParams read_params(Reader r) {
  ModelParams p;
  for (const char* key : kParamKeys) {
    set_parameter(p, key, r.number(key, get_parameter(p, key)));
  }
  p.dim = r.integer("dim", p.dim);
  r.finish();
  return p;
}

SdeConfig read_sde(Reader r) {
  SdeConfig c;
  c.dt = r.number("dt", 0.0);  // per-point default
  c.t_burn = r.number("t_burn", c.t_burn);
  c.t_end = r.number("t_end", c.t_end);
  c.renormalize_every_step =
      r.boolean("renormalize_every_step", c.renormalize_every_step);
  c.time_average = r.boolean("time_average", c.time_average);
  c.sample_interval = r.number("sample_interval", c.sample_interval);
  c.positivity_interval = r.integer("positivity_interval", c.positivity_interval);
  c.auto_halve_dt = r.boolean("auto_halve_dt", c.auto_halve_dt);
  r.finish();
  return c;
}

SweepSpec read_spec(Reader r) {
  SweepSpec s;
  s.cfg.dt = 0.0;
  s.name = r.string("name", s.name);
  if (r.has("base")) s.base = read_params(Reader(r.at("base"), r.path("base")));
  const std::string axes_path = r.path("axes");
  const json& axes = Reader::as_array(r.at("axes"), axes_path);
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const std::string ap = index_path(axes_path, i);
    Reader ar(axes[i], ap);
    Axis axis;
    axis.name = Reader::as_string(ar.at("name"), ar.path("name"));
    const json& values = Reader::as_array(ar.at("values"), ar.path("values"));
    for (std::size_t k = 0; k < values.size(); ++k) {
      axis.values.push_back(
          Reader::as_number(values[k], index_path(ar.path("values"), k)));
    }
    ar.finish();
    s.axes.push_back(std::move(axis));
  }
  s.n_traj = r.integer("n_traj", s.n_traj);
  s.n_runs = r.integer("n_runs", s.n_runs);
  if (r.has("sde")) s.cfg = read_sde(Reader(r.at("sde"), r.path("sde")));
  if (r.has("outputs")) {
    const std::string op = r.path("outputs");
    const json& outs = Reader::as_array(r.at("outputs"), op);
    s.outputs.clear();
    for (std::size_t k = 0; k < outs.size(); ++k) {
      s.outputs.insert(Reader::as_string(outs[k], index_path(op, k)));
    }
  }
  if (r.has("estimator")) {
    const std::string name = r.string("estimator", "");
    s.estimator = wrap(r.path("estimator"), [&] { return parse_estimator(name); });
  }
  s.common_random_numbers =
      r.boolean("common_random_numbers", s.common_random_numbers);
  if (r.has("plot")) {
    const std::string name = r.string("plot", "");
    s.plot = wrap(r.path("plot"), [&] { return parse_plot_kind(name); });
  }
  r.finish();
  return s;
}

json write_params(const ModelParams& p) {
  json j = json::object();
  for (const char* key : kParamKeys) j[key] = get_parameter(p, key);
  j["dim"] = p.dim;
  return j;
}

json write_spec(const SweepSpec& s) {
  json j = json::object();
  j["name"] = s.name;
  j["base"] = write_params(s.base);
  json axes = json::array();
  for (const Axis& a : s.axes) axes.push_back({{"name", a.name}, {"values", a.values}});
  j["axes"] = axes;
  j["n_traj"] = s.n_traj;
  j["n_runs"] = s.n_runs;
  j["sde"] = {{"dt", s.cfg.dt},
              {"t_burn", s.cfg.t_burn},
              {"t_end", s.cfg.t_end},
              {"renormalize_every_step", s.cfg.renormalize_every_step},
              {"time_average", s.cfg.time_average},
              {"sample_interval", s.cfg.sample_interval},
              {"positivity_interval", s.cfg.positivity_interval},
              {"auto_halve_dt", s.cfg.auto_halve_dt}};
  j["outputs"] = s.outputs;
  j["estimator"] = std::string(to_string(s.estimator));
  j["common_random_numbers"] = s.common_random_numbers;
  j["plot"] = std::string(to_string(s.plot));
  return j;
}

}  // namespace

RunConfig default_config() {
  RunConfig c;
  c.workers = default_workers();
  return c;
}

RunConfig parse_config(std::string_view document) {
  json j;
  try {
    j = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  Reader r(j, "");
  RunConfig c = default_config();
  if (r.has("preset")) c.preset = r.string("preset", "");
  if (r.has("custom")) c.custom = read_spec(Reader(r.at("custom"), "custom"));
  if (r.has("seed")) {
    const json& s = r.at("seed");
    if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned())) {
      throw ConfigError("seed", "expected unsigned 64-bit integer, got " +
                                    (s.is_number_integer() ? std::string("negative integer")
                                                           : type_name(s)));
    }
    c.seed = s.get<std::uint64_t>();
  }
  c.workers = r.integer("workers", c.workers);
  c.out_dir = r.string("out_dir", c.out_dir.string());
  c.emit_plots = r.boolean("emit_plots", c.emit_plots);
  if (r.has("formats")) {
    const json& f = Reader::as_array(r.at("formats"), "formats");
    c.formats.clear();
    for (std::size_t k = 0; k < f.size(); ++k) {
      c.formats.insert(Reader::as_string(f[k], index_path("formats", k)));
    }
  }
  if (r.has("trajectories")) c.trajectories = r.integer("trajectories", 0);
  if (r.has("estimator")) {
    const std::string name = r.string("estimator", "");
    c.estimator = wrap("estimator", [&] { return parse_estimator(name); });
  }
  r.finish();
  validate(c);
  return c;
}

std::string serialize(const RunConfig& c) {
  json j = json::object();
  if (c.preset) j["preset"] = *c.preset;
  if (c.custom) j["custom"] = write_spec(*c.custom);
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["out_dir"] = c.out_dir.string();
  j["emit_plots"] = c.emit_plots;
  j["formats"] = c.formats;
  if (c.trajectories) j["trajectories"] = *c.trajectories;
  if (c.estimator) j["estimator"] = std::string(to_string(*c.estimator));
  return j.dump(2) + "\n";
}

void validate(const RunConfig& c) {
  if (c.preset && c.custom) {
    throw ConfigError("", "'preset' and 'custom' are mutually exclusive; give one");
  }
  if (!c.preset && !c.custom) {
    throw ConfigError("", "one of 'preset' or 'custom' is required");
  }
  if (c.preset) {
    const auto& names = preset_names();
    if (std::find(names.begin(), names.end(), *c.preset) == names.end()) {
      wrap("preset", [&] { return figure_preset(*c.preset); });
    }
  }
  if (c.workers < 1) throw ConfigError("workers", "must be >= 1");
  if (c.out_dir.empty()) throw ConfigError("out_dir", "must not be empty");
  for (const std::string& f : c.formats) {
    if (f != "csv" && f != "svg") {
      throw ConfigError("formats", "unknown format '" + f + "' (csv, svg)");
    }
  }
  if (c.trajectories && *c.trajectories < 1) {
    throw ConfigError("trajectories", "must be >= 1");
  }
  if (c.custom) wrap("custom", [&] { c.custom->validate(); });
}

SweepSpec resolve_spec(const RunConfig& c) {
  validate(c);
  SweepSpec s = c.preset ? figure_preset(*c.preset) : *c.custom;
  s.cfg.seed = c.seed;
  if (c.trajectories) s.n_traj = *c.trajectories;
  if (c.estimator) s.estimator = *c.estimator;
  return s;
}

std::string spec_to_json(const SweepSpec& spec) {
  return write_spec(spec).dump();
}

std::uint64_t parameter_hash(const SweepSpec& spec) {
  const std::string text = spec_to_json(spec);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  h ^= spec.cfg.seed;  // seed lives outside the spec document
  h *= 0x100000001b3ULL;
  return h;
}

}  // namespace qsync::cli
