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
 * Experiment drivers behind the command-line tool. Every output file starts
 * with "# " lines holding the resolved config and seed; CSV bodies are
 * deterministic for a given config.
 */

#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cdsim/cd_drivers.hpp"
#include "cdsim/circuits.hpp"
#include "cdsim/config.hpp"
#include "cdsim/evolution.hpp"
#include "cdsim/models.hpp"
#include "cdsim/noise.hpp"
#include "cdsim/svg.hpp"

namespace cdsim {

/// Runs fn(0) .. fn(count - 1) on at most `threads` workers. The first
/// exception thrown by any job is rethrown after all workers stop.
inline void parallel_for(std::size_t count, std::size_t threads,
                         const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

/// Outcome of one evolution with its optimized circuit cost.
struct RunSummary {
  std::size_t steps = 0;
  double dt = 0.0;
  double p_gs = 0.0;
  double fidelity = 0.0;
  std::size_t rotations = 0;
  std::size_t cnots = 0;
  double expected_error = 0.0;
  bool gates_counted = false;  // false when a term has no two-qubit decomposition
  EvolutionResult evolution;
};

inline RunSummary run_method(const AnnealingProblem& problem, const CDSelection& method,
                             const TrotterOptions& options, double eps_rotation = 5e-4,
                             double eps_cnot = 0.015, bool skip_uncompilable = false) {
  const auto cd = make_cd_term(problem, method);
  const TrotterPlan plan = build_plan(problem, cd, options);
  RunSummary s;
  s.steps = plan.steps.size();
  s.dt = problem.dt;
  s.evolution = execute_with_records(problem, plan, options);
  s.p_gs = s.evolution.final_p_gs();
  s.fidelity = s.evolution.final_fidelity();
  Circuit circuit;
  try {
    circuit = compile(plan);
  } catch (const UnsupportedTermError&) {
    if (!skip_uncompilable) throw;
    return s;
  }
  const GateStats g = gate_stats(optimize(circuit), eps_rotation, eps_cnot);
  s.rotations = g.rotations;
  s.cnots = g.cnots;
  s.expected_error = g.expected_error;
  s.gates_counted = true;
  return s;
}

/// Smallest step count n (over a grid of dt, T = n dt) whose final fidelity
/// reaches `threshold`. Ties on n keep the first dt of the grid that passes.
inline std::optional<RunSummary> minimal_steps(const ExperimentConfig& base, const CDSelection& method,
                                               double threshold) {
  TrotterOptions options = base.trotter_options();
  options.record = false;
  for (std::size_t n = 1; n <= base.gatecount_max_steps; ++n) {
    for (double dt : base.gatecount_dt) {
      ExperimentConfig c = base;
      c.dt = dt;
      c.total_time = static_cast<double>(n) * dt;
      const AnnealingProblem p = build_problem(c);
      RunSummary s = run_method(p, method, options, base.eps_rotation, base.eps_cnot);
      if (s.fidelity >= threshold) return s;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// File helpers

inline std::string provenance_header(const ExperimentConfig& c, const std::string& command) {
  return "# cdsim " + command + "\n# config: " + to_json(c).dump() + "\n# seed: " +
         std::to_string(c.seed) + "\n";
}

inline std::filesystem::path prepare_out_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec) throw ConfigError("cannot create output directory \"" + dir + "\": " + ec.message());
  return p;
}

inline void write_file(const std::filesystem::path& path, const std::string& body,
                       std::vector<std::string>& written) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write \"" + path.string() + "\"");
  out << body;
  written.push_back(path.string());
}

inline std::string file_tag(const CDSelection& m) {
  std::string s = to_string(m);
  std::replace(s.begin(), s.end(), ':', '-');
  return s;
}

struct CommandOutput {
  std::vector<std::string> files;
  std::vector<std::string> messages;
};

// ---------------------------------------------------------------------------
// Commands

/// Per-step CSV for the run without CD and for the configured driver.
inline CommandOutput run_evolve(const ExperimentConfig& c, const std::string& out_dir, bool svg) {
  const auto dir = prepare_out_dir(out_dir);
  const AnnealingProblem problem = build_problem(c);
  CommandOutput out;
  out.messages = problem.warnings;
  std::vector<CDSelection> methods{{CDMethod::none, 0}};
  if (c.cd.method != CDMethod::none) methods.push_back(c.cd);
  std::vector<PlotSeries> series;
  for (const auto& m : methods) {
    const RunSummary s = run_method(problem, m, c.trotter_options(), c.eps_rotation, c.eps_cnot);
    std::ostringstream body;
    body << provenance_header(c, "evolve") << "# method: " << to_string(m) << '\n';
    write_records_csv(body, s.evolution.records);
    write_file(dir / ("evolve_" + file_tag(m) + ".csv"), body.str(), out.files);
    out.messages.push_back(to_string(m) + ": final p_gs " + format_number(s.p_gs) + ", fidelity " +
                           format_number(s.fidelity));
    if (c.shots > 0) {
      const Distribution probs = s.evolution.final_state.probabilities();
      const auto model = ReadoutModel::symmetric(problem.n_qubits(), c.readout_error);
      const CountsHistogram h = apply_readout_noise(probs, model, c.seed, c.shots);
      std::ostringstream hist;
      hist << provenance_header(c, "evolve") << "# method: " << to_string(m) << '\n';
      write_histogram_csv(hist, h);
      write_file(dir / ("evolve_" + file_tag(m) + "_counts.csv"), hist.str(), out.files);
    }
    PlotSeries ps{to_string(m), {}, {}};
    for (const auto& r : s.evolution.records) {
      ps.x.push_back(r.t);
      ps.y.push_back(r.p_gs);
    }
    series.push_back(std::move(ps));
  }
  if (svg) {
    std::ostringstream plot;
    write_svg_plot(plot, c.name, "t", "P_gs", series);
    write_file(dir / "evolve.svg", plot.str(), out.files);
  }
  return out;
}

/// Config with the sweep variable set to `x`.
inline ExperimentConfig sweep_point(const ExperimentConfig& c, SweepAxis axis, double x) {
  ExperimentConfig p = c;
  switch (axis) {
    case SweepAxis::total_time: p.total_time = x; break;
    case SweepAxis::coupling: p.j0 = x; break;
    case SweepAxis::size:
      if (x < 1 || x != std::floor(x)) throw ConfigError("size sweep values must be positive integers");
      p.n = static_cast<std::size_t>(x);
      if (p.h_z.size() != 1) throw ConfigError("size sweeps need a scalar h_z");
      break;
    case SweepAxis::steps:
      if (x < 1 || x != std::floor(x)) throw ConfigError("step sweep values must be positive integers");
      p.dt = p.total_time / x;
      break;
  }
  return p;
}

struct SweepRow {
  double x = 0.0;
  RunSummary summary;
};

/// One CSV per method with rows x, p_gs, fidelity, rotations, cnots.
inline std::vector<std::vector<SweepRow>> compute_sweep(const ExperimentConfig& c) {
  if (!c.sweep) throw ConfigError("sweep command needs a \"sweep\" section in the config");
  const auto& grid = c.sweep->values;
  const std::size_t jobs = grid.size() * c.methods.size();
  std::vector<std::vector<SweepRow>> rows(c.methods.size(), std::vector<SweepRow>(grid.size()));
  TrotterOptions options = c.trotter_options();
  options.record = false;
  parallel_for(jobs, c.threads, [&](std::size_t job) {
    const std::size_t m = job / grid.size();
    const std::size_t i = job % grid.size();
    const ExperimentConfig pc = sweep_point(c, c.sweep->axis, grid[i]);
    const AnnealingProblem problem = build_problem(pc);
    rows[m][i] = {grid[i], run_method(problem, c.methods[m], options, c.eps_rotation, c.eps_cnot, true)};
  });
  return rows;
}

inline CommandOutput run_sweep(const ExperimentConfig& c, const std::string& out_dir, bool svg) {
  const auto dir = prepare_out_dir(out_dir);
  const auto rows = compute_sweep(c);
  CommandOutput out;
  std::vector<PlotSeries> series;
  for (std::size_t m = 0; m < c.methods.size(); ++m) {
    std::ostringstream body;
    body << provenance_header(c, "sweep") << "# method: " << to_string(c.methods[m]) << '\n';
    body << "x,p_gs,fidelity,rotations,cnots\n";
    PlotSeries ps{to_string(c.methods[m]), {}, {}};
    for (const auto& r : rows[m]) {
      body << format_number(r.x) << ',' << format_number(r.summary.p_gs) << ','
           << format_number(r.summary.fidelity) << ',';
      // Gate columns stay empty when the plan has terms beyond two qubits.
      if (r.summary.gates_counted) body << r.summary.rotations << ',' << r.summary.cnots;
      else body << ',';
      body << '\n';
      ps.x.push_back(r.x);
      ps.y.push_back(r.summary.p_gs);
    }
    write_file(dir / ("sweep_" + file_tag(c.methods[m]) + ".csv"), body.str(), out.files);
    series.push_back(std::move(ps));
  }
  if (svg) {
    std::ostringstream plot;
    write_svg_plot(plot, c.name, to_string(c.sweep->axis), "P_gs", series);
    write_file(dir / "sweep.svg", plot.str(), out.files);
  }
  return out;
}

/// Gate counts at the configured schedule, and at the smallest step count
/// reaching the fidelity threshold.
inline CommandOutput run_gatecount(const ExperimentConfig& c, const std::string& out_dir) {
  const auto dir = prepare_out_dir(out_dir);
  const AnnealingProblem problem = build_problem(c);
  CommandOutput out;
  std::vector<GateCountRow> configured;
  std::vector<GateCountRow> matched;
  for (const auto& m : c.methods) {
    const RunSummary s = run_method(problem, m, c.trotter_options(), c.eps_rotation, c.eps_cnot);
    configured.push_back({c.name, to_string(m), s.steps, s.rotations, s.cnots, s.expected_error, s.fidelity});
    if (auto best = minimal_steps(c, m, c.gatecount_threshold)) {
      matched.push_back({c.name, to_string(m), best->steps, best->rotations, best->cnots,
                         best->expected_error, best->fidelity});
    } else {
      out.messages.push_back(to_string(m) + ": threshold " + format_number(c.gatecount_threshold) +
                             " not reached within " + std::to_string(c.gatecount_max_steps) + " steps");
    }
  }
  std::ostringstream a;
  a << provenance_header(c, "gatecount");
  write_gate_stats_csv(a, configured);
  write_file(dir / "gatecount.csv", a.str(), out.files);
  std::ostringstream b;
  b << provenance_header(c, "gatecount") << "# threshold: " << format_number(c.gatecount_threshold) << '\n';
  write_gate_stats_csv(b, matched);
  write_file(dir / "gatecount_matched.csv", b.str(), out.files);
  return out;
}

struct MitigationDemo {
  Distribution actual;
  Distribution noisy;
  MitigationResult mitigation;
  double tv_noisy = 0.0;
  double tv_mitigated = 0.0;
};

/// Evolve, read out through the noisy channel, then invert the response matrix.
inline MitigationDemo compute_mitigation_demo(const ExperimentConfig& c) {
  const AnnealingProblem problem = build_problem(c);
  const RunSummary s = run_method(problem, c.cd, c.trotter_options());
  MitigationDemo d;
  d.actual = s.evolution.final_state.probabilities();
  d.actual /= d.actual.sum();
  const auto model = ReadoutModel::symmetric(problem.n_qubits(), c.readout_error);
  const ResponseMatrix analytic = build_response_matrix(model);
  d.noisy = c.shots == 0 ? noisy_distribution(d.actual, analytic)
                         : apply_readout_noise(d.actual, model, c.seed, c.shots).to_distribution();
  const ResponseMatrix used = c.calibration_shots == 0
                                  ? analytic
                                  : calibrate_response_matrix(model, c.calibration_shots, c.seed + 1);
  d.mitigation = mitigate(d.noisy, used);
  d.tv_noisy = total_variation(d.noisy, d.actual);
  d.tv_mitigated = total_variation(d.mitigation.mitigated, d.actual);
  return d;
}

inline CommandOutput run_mitigate_demo(const ExperimentConfig& c, const std::string& out_dir) {
  const auto dir = prepare_out_dir(out_dir);
  const MitigationDemo d = compute_mitigation_demo(c);
  CommandOutput out;
  std::ostringstream body;
  body << provenance_header(c, "mitigate-demo") << "# tv_noisy: " << format_number(d.tv_noisy)
       << "\n# tv_mitigated: " << format_number(d.tv_mitigated)
       << "\n# clipped_mass: " << format_number(d.mitigation.clipped_mass) << '\n';
  write_mitigation_csv(body, d.noisy, d.mitigation);
  write_file(dir / "mitigation.csv", body.str(), out.files);
  std::ostringstream actual;
  actual << provenance_header(c, "mitigate-demo") << "bitstring,p_actual\n";
  const std::size_t n = build_problem(c).n_qubits();
  for (Eigen::Index i = 0; i < d.actual.size(); ++i) {
    actual << StateVector::label_of(static_cast<std::uint64_t>(i), n) << ',' << format_number(d.actual(i)) << '\n';
  }
  write_file(dir / "actual.csv", actual.str(), out.files);
  out.messages.push_back("total variation: noisy " + format_number(d.tv_noisy) + ", mitigated " +
                         format_number(d.tv_mitigated));
  return out;
}

/// Preparation plus the compiled (optionally optimized) evolution circuit.
inline Circuit build_export_circuit(const ExperimentConfig& c, bool optimized) {
  const AnnealingProblem problem = build_problem(c);
  const auto cd = make_cd_term(problem, c.cd);
  Circuit circuit = preparation_circuit(problem);
  Circuit body = compile(build_plan(problem, cd, c.trotter_options()));
  if (optimized) body = optimize(std::move(body));
  circuit.append(body);
  return circuit;
}

inline CommandOutput export_circuit(const ExperimentConfig& c, const std::string& out_dir, bool optimized) {
  const auto dir = prepare_out_dir(out_dir);
  const Circuit circuit = build_export_circuit(c, optimized);
  CommandOutput out;
  // Provenance goes in comments after the version line.
  std::string comments;
  std::istringstream lines(provenance_header(c, "export-circuit"));
  for (std::string line; std::getline(lines, line);) comments += "//" + line.substr(1) + '\n';
  std::string qasm = to_qasm(circuit);
  qasm.insert(qasm.find('\n') + 1, comments);
  write_file(dir / "circuit.qasm", qasm, out.files);
  const GateStats g = gate_stats(circuit, c.eps_rotation, c.eps_cnot);
  out.messages.push_back(std::to_string(g.rotations) + " single-qubit gates, " + std::to_string(g.cnots) +
                         " CNOTs (including state preparation)");
  return out;
}

}  // namespace cdsim
