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

// Command-line experiment runner.
//
//   cdsim evolve --config configs/single_spin.json --out out --svg
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "cdsim/config.hpp"
#include "cdsim/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonFlags {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  bool svg = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_svg) {
  cmd->add_option("--config", f.config, "JSON experiment config")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out, "output directory")->capture_default_str();
  cmd->add_option("--seed", f.seed, "override the config seed");
  cmd->add_option("--threads", f.threads, "worker threads for sweeps (0: all cores)");
  if (with_svg) cmd->add_flag("--svg", f.svg, "also write an SVG plot");
}

cdsim::ExperimentConfig resolve(const CommonFlags& f) {
  cdsim::ExperimentConfig c = cdsim::load_config(f.config);
  if (f.seed) c.seed = *f.seed;
  if (f.threads) c.threads = *f.threads;
  return c;
}

void report(const cdsim::CommandOutput& out) {
  for (const auto& m : out.messages) std::cout << m << '\n';
  for (const auto& f : out.files) std::cout << "wrote " << f << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Digitized counter-diabatic annealing simulator"};
  app.require_subcommand(1);

  CommonFlags evolve_flags, sweep_flags, gate_flags, mitigate_flags, export_flags;
  bool no_optimize = false;

  auto* evolve = app.add_subcommand("evolve", "time series of P_gs with and without the CD driver");
  add_common(evolve, evolve_flags, true);
  auto* sweep = app.add_subcommand("sweep", "final P_gs over a grid of T, j0, n or step count");
  add_common(sweep, sweep_flags, true);
  auto* gatecount = app.add_subcommand("gatecount", "gate counts and fidelity per method");
  add_common(gatecount, gate_flags, false);
  auto* mitigate = app.add_subcommand("mitigate-demo", "readout noise and matrix-inversion mitigation");
  add_common(mitigate, mitigate_flags, false);
  auto* exporter = app.add_subcommand("export-circuit", "write the compiled circuit as OpenQASM 2");
  add_common(exporter, export_flags, false);
  exporter->add_flag("--no-optimize", no_optimize, "skip the peephole optimizer");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0; malformed flags count as configuration errors.
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  try {
    if (evolve->parsed()) {
      report(cdsim::run_evolve(resolve(evolve_flags), evolve_flags.out, evolve_flags.svg));
    } else if (sweep->parsed()) {
      report(cdsim::run_sweep(resolve(sweep_flags), sweep_flags.out, sweep_flags.svg));
    } else if (gatecount->parsed()) {
      report(cdsim::run_gatecount(resolve(gate_flags), gate_flags.out));
    } else if (mitigate->parsed()) {
      report(cdsim::run_mitigate_demo(resolve(mitigate_flags), mitigate_flags.out));
    } else if (exporter->parsed()) {
      report(cdsim::export_circuit(resolve(export_flags), export_flags.out, !no_optimize));
    }
  } catch (const cdsim::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const cdsim::Error& e) {
    // Config, domain and dimension errors all trace back to the input.
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
