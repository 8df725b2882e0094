// Copyright 2026 The cdsim Authors
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

/**
 * @file
 * JSON experiment configuration. Unknown keys are rejected so that typos
 * surface as errors instead of silently falling back to defaults.
 */

#pragma once

#include <cstdint>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cdsim/cd_drivers.hpp"
#include "cdsim/error.hpp"
#include "cdsim/evolution.hpp"
#include "cdsim/models.hpp"

namespace cdsim {

enum class SweepAxis { total_time, coupling, size, steps };

inline std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::total_time: return "T";
    case SweepAxis::coupling: return "j0";
    case SweepAxis::size: return "n";
    case SweepAxis::steps: return "steps";
  }
  return "?";
}

struct SweepConfig {
  SweepAxis axis = SweepAxis::total_time;
  std::vector<double> values;
};

struct ExperimentConfig {
  std::string name = "experiment";
  ModelKind model = ModelKind::single_spin;
  std::size_t n = 1;
  double h_x = -1.0;
  std::vector<double> h_z{1.0};  // one entry broadcasts to every site
  double j0 = 0.0;
  std::optional<Boundary> boundary;  // model default when unset
  double total_time = 1.0;
  double dt = 0.2;
  CDSelection cd;                    // driver for evolve / export / mitigate
  std::vector<CDSelection> methods;  // compared in sweep / gatecount
  std::string trotter_order = "x,cd,z,zz";
  bool midpoint_sampling = false;
  std::optional<std::string> target;  // basis-label override
  std::optional<SweepConfig> sweep;
  std::uint64_t shots = 0;  // 0: analytic probabilities
  std::uint64_t seed = 1;
  double readout_error = 0.04;
  std::uint64_t calibration_shots = 0;  // 0: analytic response matrix
  double eps_rotation = 5e-4;
  double eps_cnot = 0.015;
  double gatecount_threshold = 0.99;
  std::vector<double> gatecount_dt{0.01, 0.02, 0.05, 0.1, 0.2, 0.5};
  std::size_t gatecount_max_steps = 200;
  std::size_t threads = 0;  // 0: hardware concurrency

  TrotterOptions trotter_options() const {
    TrotterOptions o;
    o.order = parse_block_order(trotter_order);
    o.midpoint_sampling = midpoint_sampling;
    return o;
  }
};

namespace detail {

inline ModelKind parse_model(const std::string& s) {
  if (s == "single_spin") return ModelKind::single_spin;
  if (s == "ising_chain") return ModelKind::ising_chain;
  if (s == "zz_chain") return ModelKind::zz_chain;
  throw ConfigError("model must be single_spin, ising_chain or zz_chain, got \"" + s + "\"");
}

inline SweepAxis parse_axis(const std::string& s) {
  if (s == "T" || s == "time") return SweepAxis::total_time;
  if (s == "j0" || s == "coupling") return SweepAxis::coupling;
  if (s == "n" || s == "size") return SweepAxis::size;
  if (s == "steps") return SweepAxis::steps;
  throw ConfigError("sweep axis must be T, j0, n or steps, got \"" + s + "\"");
}

template <typename T>
T get_as(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config key \"") + key + "\": " + e.what());
  }
}

inline CDSelection parse_method_entry(const std::string& name, std::optional<int> order) {
  if (name == "nc") {
    if (!order) throw ConfigError("cd_method \"nc\" needs cd_order");
    return parse_cd_method("nc:" + std::to_string(*order));
  }
  return parse_cd_method(name);
}

}  // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  static const std::set<std::string> known{
      "name", "model", "n", "h_x", "h_z", "j0", "boundary", "T", "dt", "schedule", "cd_method",
      "cd_order", "methods", "trotter_order", "midpoint_sampling", "target", "sweep", "shots",
      "seed", "readout_error", "calibration_shots", "eps_rotation", "eps_cnot", "gatecount",
      "threads"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown config key \"" + key + "\"");
  }
  using detail::get_as;
  ExperimentConfig c;
  if (j.contains("name")) c.name = get_as<std::string>(j, "name");
  if (!j.contains("model")) throw ConfigError("config key \"model\" is required");
  c.model = detail::parse_model(get_as<std::string>(j, "model"));
  c.n = c.model == ModelKind::single_spin ? 1 : 2;
  if (j.contains("n")) {
    const auto n = get_as<long long>(j, "n");
    if (n < 1 || n > 24) throw ConfigError("n must lie in [1, 24], got " + std::to_string(n));
    c.n = static_cast<std::size_t>(n);
  }
  if (c.model == ModelKind::single_spin && c.n != 1) throw ConfigError("single_spin needs n = 1");
  if (j.contains("h_x")) c.h_x = get_as<double>(j, "h_x");
  if (c.model == ModelKind::zz_chain) c.h_z = {0.0};
  if (j.contains("h_z")) {
    if (c.model == ModelKind::zz_chain) throw ConfigError("zz_chain has no longitudinal field; drop h_z");
    c.h_z = j.at("h_z").is_array() ? get_as<std::vector<double>>(j, "h_z")
                                   : std::vector<double>{get_as<double>(j, "h_z")};
  }
  if (j.contains("j0")) c.j0 = get_as<double>(j, "j0");
  else if (c.model == ModelKind::zz_chain) c.j0 = -1.0;
  if (j.contains("boundary")) {
    const auto b = get_as<std::string>(j, "boundary");
    if (b == "open") c.boundary = Boundary::open;
    else if (b == "periodic") c.boundary = Boundary::periodic;
    else throw ConfigError("boundary must be open or periodic, got \"" + b + "\"");
  }
  if (j.contains("T")) c.total_time = get_as<double>(j, "T");
  if (j.contains("dt")) c.dt = get_as<double>(j, "dt");
  if (j.contains("schedule") && get_as<std::string>(j, "schedule") != "sin2") {
    throw ConfigError("only the sin2 schedule is supported");
  }
  std::optional<int> order;
  if (j.contains("cd_order")) order = get_as<int>(j, "cd_order");
  if (j.contains("cd_method")) c.cd = detail::parse_method_entry(get_as<std::string>(j, "cd_method"), order);
  if (j.contains("methods")) {
    for (const auto& m : get_as<std::vector<std::string>>(j, "methods")) c.methods.push_back(parse_cd_method(m));
    if (c.methods.empty()) throw ConfigError("methods must not be empty");
  } else {
    c.methods.push_back({CDMethod::none, 0});
    if (c.cd.method != CDMethod::none) c.methods.push_back(c.cd);
  }
  if (j.contains("trotter_order")) c.trotter_order = get_as<std::string>(j, "trotter_order");
  parse_block_order(c.trotter_order);
  if (j.contains("midpoint_sampling")) c.midpoint_sampling = get_as<bool>(j, "midpoint_sampling");
  if (j.contains("target")) c.target = get_as<std::string>(j, "target");
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    if (!s.is_object() || !s.contains("axis") || !s.contains("values")) {
      throw ConfigError("sweep needs {\"axis\": ..., \"values\": [...]}");
    }
    SweepConfig sc;
    sc.axis = detail::parse_axis(get_as<std::string>(s, "axis"));
    sc.values = get_as<std::vector<double>>(s, "values");
    if (sc.values.empty()) throw ConfigError("sweep grid must not be empty");
    c.sweep = sc;
  }
  if (j.contains("shots")) c.shots = get_as<std::uint64_t>(j, "shots");
  if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j, "seed");
  if (j.contains("readout_error")) c.readout_error = get_as<double>(j, "readout_error");
  if (!(c.readout_error >= 0.0 && c.readout_error < 0.5)) {
    throw ConfigError("readout_error must lie in [0, 0.5)");
  }
  if (j.contains("calibration_shots")) c.calibration_shots = get_as<std::uint64_t>(j, "calibration_shots");
  if (j.contains("eps_rotation")) c.eps_rotation = get_as<double>(j, "eps_rotation");
  if (j.contains("eps_cnot")) c.eps_cnot = get_as<double>(j, "eps_cnot");
  if (j.contains("gatecount")) {
    const auto& g = j.at("gatecount");
    for (const auto& [key, value] : g.items()) {
      if (key != "threshold" && key != "dt_grid" && key != "max_steps") {
        throw ConfigError("unknown gatecount key \"" + key + "\"");
      }
    }
    if (g.contains("threshold")) c.gatecount_threshold = get_as<double>(g, "threshold");
    if (g.contains("dt_grid")) c.gatecount_dt = get_as<std::vector<double>>(g, "dt_grid");
    if (g.contains("max_steps")) c.gatecount_max_steps = get_as<std::size_t>(g, "max_steps");
    if (c.gatecount_dt.empty()) throw ConfigError("gatecount dt_grid must not be empty");
  }
  if (j.contains("threads")) c.threads = get_as<std::size_t>(j, "threads");
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file \"" + path + "\"");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file \"" + path + "\" is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

/// Fully resolved config, every default written out.
inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["name"] = c.name;
  j["model"] = to_string(c.model);
  j["n"] = c.n;
  j["h_x"] = c.h_x;
  if (c.model != ModelKind::zz_chain) j["h_z"] = c.h_z;
  j["j0"] = c.j0;
  if (c.boundary) j["boundary"] = to_string(*c.boundary);
  j["T"] = c.total_time;
  j["dt"] = c.dt;
  j["schedule"] = "sin2";
  j["cd_method"] = to_string(c.cd);
  std::vector<std::string> methods;
  for (const auto& m : c.methods) methods.push_back(to_string(m));
  j["methods"] = methods;
  j["trotter_order"] = c.trotter_order;
  j["midpoint_sampling"] = c.midpoint_sampling;
  if (c.target) j["target"] = *c.target;
  if (c.sweep) j["sweep"] = {{"axis", to_string(c.sweep->axis)}, {"values", c.sweep->values}};
  j["shots"] = c.shots;
  j["seed"] = c.seed;
  j["readout_error"] = c.readout_error;
  j["calibration_shots"] = c.calibration_shots;
  j["eps_rotation"] = c.eps_rotation;
  j["eps_cnot"] = c.eps_cnot;
  j["gatecount"] = {{"threshold", c.gatecount_threshold},
                    {"dt_grid", c.gatecount_dt},
                    {"max_steps", c.gatecount_max_steps}};
  j["threads"] = c.threads;
  return j;
}

/// Builds the annealing problem described by the config.
inline AnnealingProblem build_problem(const ExperimentConfig& c) {
  std::vector<double> h_z = c.h_z;
  if (h_z.size() == 1 && c.n > 1) h_z.assign(c.n, h_z[0]);
  AnnealingProblem p;
  switch (c.model) {
    case ModelKind::single_spin:
      if (h_z.size() != 1) throw ConfigError("single_spin takes a scalar h_z");
      p = build_single_spin(c.h_x, h_z[0], c.total_time, c.dt);
      break;
    case ModelKind::ising_chain:
      p = build_ising_chain({c.n, c.h_x, h_z, c.j0, c.boundary.value_or(Boundary::open)},
                            c.total_time, c.dt);
      break;
    case ModelKind::zz_chain:
      p = build_zz_chain(c.n, c.h_x, c.j0, c.total_time, c.dt, c.boundary.value_or(Boundary::periodic));
      break;
  }
  if (c.target) p.set_target(StateVector::from_label(*c.target));
  return p;
}

}  // namespace cdsim
