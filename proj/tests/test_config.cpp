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


#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cdsim/config.hpp"
#include "cdsim/experiments.hpp"

using namespace cdsim;
using nlohmann::json;

namespace {

const std::filesystem::path kConfigs = std::filesystem::path(CDSIM_SOURCE_DIR) / "configs";

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// File body without the leading "# " provenance lines.
std::string body_of(const std::string& text) {
  std::istringstream in(text);
  std::string out;
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("# ", 0) != 0) out += line + '\n';
  }
  return out;
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("cdsim_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST(Config, Defaults) {
  const auto c = parse_config(json{{"model", "single_spin"}});
  EXPECT_EQ(c.n, 1U);
  EXPECT_EQ(c.h_x, -1.0);
  EXPECT_EQ(c.dt, 0.2);
  EXPECT_EQ(c.cd.method, CDMethod::none);
  EXPECT_EQ(c.methods.size(), 1U);
  EXPECT_EQ(c.trotter_order, "x,cd,z,zz");
  EXPECT_EQ(c.seed, 1U);
  EXPECT_EQ(c.shots, 0U);
}

TEST(Config, ParsesMethodsAndOrder) {
  const auto c = parse_config(json{{"model", "zz_chain"}, {"n", 3}, {"j0", -1.0}, {"cd_method", "nc"}, {"cd_order", 2}});
  EXPECT_EQ(to_string(c.cd), "nc:2");
  ASSERT_EQ(c.methods.size(), 2U);
  EXPECT_EQ(to_string(c.methods[1]), "nc:2");
  EXPECT_EQ(to_string(parse_config(json{{"model", "single_spin"}, {"cd_method", "nc:3"}}).cd), "nc:3");
}

TEST(Config, Rejections) {
  EXPECT_THROW(parse_config(json{{"model", "single_spin"}, {"bogus", 1}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"n", 2}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"model", "torus"}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"model", "single_spin"}, {"cd_method", "nc"}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"model", "zz_chain"}, {"n", 2}, {"h_z", 1.0}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"model", "single_spin"}, {"n", 2}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"model", "single_spin"}, {"dt", "fast"}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"model", "single_spin"}, {"trotter_order", "x,z"}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"model", "single_spin"}, {"schedule", "linear"}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"model", "single_spin"}, {"readout_error", 0.5}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"model", "single_spin"}, {"sweep", {{"axis", "T"}, {"values", json::array()}}}}),
               ConfigError);
  EXPECT_THROW(parse_config(json{{"model", "single_spin"}, {"gatecount", {{"limit", 3}}}}), ConfigError);
  EXPECT_THROW(parse_config(json::array()), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, ResolvedJsonRoundTrips) {
  for (const auto& entry : std::filesystem::directory_iterator(kConfigs)) {
    const auto c = load_config(entry.path().string());
    const auto j = to_json(c);
    EXPECT_EQ(to_json(parse_config(j)), j) << entry.path();
  }
}

TEST(Config, BundledConfigsBuildProblems) {
  for (const auto& entry : std::filesystem::directory_iterator(kConfigs)) {
    const auto c = load_config(entry.path().string());
    const auto p = build_problem(c);
    EXPECT_GE(p.steps(), 1U) << entry.path();
    EXPECT_NO_THROW(make_cd_term(p, c.cd)) << entry.path();
  }
}

TEST(Config, BuildProblemDefaultsBoundaryByModel) {
  const auto ising = build_problem(parse_config(json{{"model", "ising_chain"}, {"n", 3}, {"j0", 0.5}}));
  EXPECT_EQ(ising.chain.boundary, Boundary::open);
  EXPECT_EQ(ising.h_f.coefficient("ZZI"), Complex(0.5, 0));
  EXPECT_EQ(ising.h_f.coefficient("IZZ"), Complex(0.5, 0));
  EXPECT_EQ(ising.h_f.coefficient("ZIZ"), Complex(0, 0));
  const auto zz = build_problem(parse_config(json{{"model", "zz_chain"}, {"n", 3}}));
  EXPECT_EQ(zz.chain.boundary, Boundary::periodic);
  EXPECT_EQ(zz.h_f.coefficient("ZIZ"), Complex(-1, 0));
}

TEST(Config, TargetOverride) {
  const auto p = build_problem(
      parse_config(json{{"model", "ising_chain"}, {"n", 2}, {"h_z", 0.6}, {"j0", 2.0}, {"target", "10"}}));
  EXPECT_EQ(p.target_support, (std::vector<std::uint64_t>{2}));
}

TEST(Sweep, PointsOverrideTheAxisVariable) {
  const auto c = load_config((kConfigs / "sweep_size.json").string());
  EXPECT_EQ(sweep_point(c, SweepAxis::size, 5).n, 5U);
  EXPECT_THROW(sweep_point(c, SweepAxis::size, 2.5), ConfigError);
  EXPECT_DOUBLE_EQ(sweep_point(c, SweepAxis::steps, 3).dt, 0.002);
  EXPECT_EQ(sweep_point(c, SweepAxis::coupling, -0.5).j0, -0.5);
  EXPECT_EQ(sweep_point(c, SweepAxis::total_time, 0.01).total_time, 0.01);
}

TEST(Sweep, ResultsIndependentOfThreadCount) {
  auto c = load_config((kConfigs / "sweep_coupling.json").string());
  c.threads = 1;
  const auto serial = compute_sweep(c);
  c.threads = 3;
  const auto parallel = compute_sweep(c);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t m = 0; m < serial.size(); ++m) {
    for (std::size_t i = 0; i < serial[m].size(); ++i) {
      EXPECT_EQ(serial[m][i].x, parallel[m][i].x);
      EXPECT_EQ(serial[m][i].summary.p_gs, parallel[m][i].summary.p_gs);
    }
  }
}

TEST(Sweep, CouplingSweepFavoursVariationalAtStrongCoupling) {
  const auto rows = compute_sweep(load_config((kConfigs / "sweep_coupling.json").string()));
  // methods: none, local-berry, local-var; grid starts at -2, -1.5, -1.
  for (std::size_t i = 0; i < 3; ++i) EXPECT_GT(rows[2][i].summary.p_gs, rows[1][i].summary.p_gs);
}

TEST(Sweep, SizeSweepOrdersNestedCommutatorOrders) {
  const auto rows = compute_sweep(load_config((kConfigs / "sweep_size.json").string()));
  for (std::size_t i = 0; i < rows[0].size(); ++i) {
    EXPECT_LT(rows[0][i].summary.fidelity, rows[1][i].summary.fidelity);
    EXPECT_LE(rows[1][i].summary.fidelity, rows[2][i].summary.fidelity + 1e-12);
  }
}

TEST(Sweep, TimeSweepShape) {
  const auto rows = compute_sweep(load_config((kConfigs / "sweep_time.json").string()));
  // A single step samples the driver only at t = 0, where it vanishes.
  EXPECT_NEAR(rows[1].front().summary.p_gs, 0.5, 1e-12);
  for (std::size_t i = 1; i < rows[1].size(); ++i) EXPECT_GT(rows[1][i].summary.p_gs, 0.99);
  for (std::size_t i = 1; i < rows[0].size(); ++i) {
    EXPECT_GE(rows[0][i].summary.p_gs, rows[0][i - 1].summary.p_gs - 1e-12);
  }
  EXPECT_GT(rows[0].back().summary.p_gs, 0.9);
  EXPECT_LT(rows[0].back().summary.p_gs, rows[1].back().summary.p_gs);
}

TEST(ParallelFor, VisitsEveryIndexOnceAndPropagatesErrors) {
  std::vector<std::atomic<int>> hits(100);
  parallel_for(100, 4, [&](std::size_t i) { ++hits[i]; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  EXPECT_THROW(parallel_for(10, 3,
                            [](std::size_t i) {
                              if (i == 5) throw DomainError("boom");
                            }),
               DomainError);
  parallel_for(0, 4, [](std::size_t) { FAIL(); });
}

TEST(Commands, EvolveWritesDeterministicFiles) {
  const auto c = load_config((kConfigs / "single_spin.json").string());
  const auto dir = scratch("evolve");
  const auto first = run_evolve(c, dir.string(), true);
  ASSERT_EQ(first.files.size(), 3U);
  const std::string none = slurp((dir / "evolve_none.csv").string());
  const std::string berry = slurp((dir / "evolve_berry.csv").string());
  EXPECT_EQ(none.rfind("# cdsim evolve\n# config: {", 0), 0U);
  EXPECT_NE(none.find("# seed: 1\n"), std::string::npos);
  EXPECT_NE(body_of(none).find("step,t,lambda,p_gs,fidelity\n"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir / "evolve.svg"));
  run_evolve(c, dir.string(), false);
  EXPECT_EQ(slurp((dir / "evolve_none.csv").string()), none);
  EXPECT_EQ(slurp((dir / "evolve_berry.csv").string()), berry);
  // Final rows: no-CD near 0.56, CD near 1.
  const auto last_p = [](const std::string& text) {
    const auto b = body_of(text);
    const auto line = b.substr(b.rfind('\n', b.size() - 2) + 1);
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string col; std::getline(ss, col, ',');) cols.push_back(col);
    return std::stod(cols.at(3));
  };
  EXPECT_NEAR(last_p(none), 0.56, 0.05);
  EXPECT_GT(last_p(berry), 0.99);
}

TEST(Commands, EvolveWithShotsWritesHistograms) {
  auto c = load_config((kConfigs / "mitigate.json").string());
  const auto dir = scratch("evolve_shots");
  const auto out = run_evolve(c, dir.string(), false);
  EXPECT_EQ(out.files.size(), 4U);
  const auto hist = slurp((dir / "evolve_berry_counts.csv").string());
  EXPECT_NE(hist.find("# seed: 2024\n"), std::string::npos);
  EXPECT_NE(hist.find("bitstring,count\n"), std::string::npos);
}

TEST(Commands, GatecountBell) {
  const auto c = load_config((kConfigs / "bell.json").string());
  const auto dir = scratch("gatecount");
  run_gatecount(c, dir.string());
  const auto text = body_of(slurp((dir / "gatecount.csv").string()));
  EXPECT_EQ(text.substr(0, text.find('\n')), "problem,method,steps,rotations,cnots,expected_error,fidelity");
  const auto cd = minimal_steps(c, c.cd, 0.999);
  ASSERT_TRUE(cd.has_value());
  EXPECT_LE(cd->steps, 3U);
  EXPECT_TRUE(std::filesystem::exists(dir / "gatecount_matched.csv"));
}

TEST(Commands, GatecountGhzAndSingleSpin) {
  const auto ghz = load_config((kConfigs / "ghz3.json").string());
  const auto cd = minimal_steps(ghz, ghz.cd, 0.96);
  ASSERT_TRUE(cd.has_value());
  EXPECT_LE(cd->steps, 6U);
  const auto spin = load_config((kConfigs / "single_spin.json").string());
  const auto plain = minimal_steps(spin, {CDMethod::none, 0}, 0.99);
  const auto driven = minimal_steps(spin, spin.cd, 0.99);
  ASSERT_TRUE(plain.has_value());
  ASSERT_TRUE(driven.has_value());
  EXPECT_GE(plain->steps, 4 * driven->steps);
}

TEST(Commands, MitigationDemo) {
  const auto c = load_config((kConfigs / "mitigate.json").string());
  const auto d = compute_mitigation_demo(c);
  EXPECT_LT(d.tv_mitigated, d.tv_noisy);
  auto quiet = c;
  quiet.readout_error = 0.0;
  quiet.shots = 0;
  const auto z = compute_mitigation_demo(quiet);
  EXPECT_LT((z.noisy - z.actual).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((z.mitigation.mitigated - z.actual).cwiseAbs().maxCoeff(), 1e-15);
  const auto dir = scratch("mitigate");
  run_mitigate_demo(c, dir.string());
  const auto text = slurp((dir / "mitigation.csv").string());
  EXPECT_NE(text.find("# seed: 2024\n"), std::string::npos);
  EXPECT_NE(text.find("# tv_noisy: "), std::string::npos);
  EXPECT_NE(text.find("bitstring,p_noisy,p_inverted,p_mitigated\n"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir / "actual.csv"));
}

TEST(Commands, CalibratedMitigationDemo) {
  auto c = load_config((kConfigs / "mitigate.json").string());
  c.calibration_shots = 20000;
  c.shots = 8192;
  const auto d = compute_mitigation_demo(c);
  EXPECT_LT(d.tv_mitigated, d.tv_noisy);
}

TEST(Commands, ExportCircuit) {
  const auto c = load_config((kConfigs / "bell.json").string());
  const auto dir = scratch("qasm");
  export_circuit(c, dir.string(), true);
  const auto text = slurp((dir / "circuit.qasm").string());
  EXPECT_EQ(text.rfind("OPENQASM 2.0;\n// cdsim export-circuit\n// config: {", 0), 0U);
  EXPECT_NE(text.find("qreg q[2];\nh q[0];\nh q[1];\n"), std::string::npos);
  const auto raw = build_export_circuit(c, false);
  const auto opt = build_export_circuit(c, true);
  EXPECT_LT(gate_stats(opt).cnots, gate_stats(raw).cnots);
  const auto a = simulate_circuit(raw, StateVector(2));
  const auto b = simulate_circuit(opt, StateVector(2));
  EXPECT_NEAR(std::abs(a.inner(b)), 1.0, 1e-12);
}

TEST(Svg, WritesOnePolylinePerSeries) {
  std::ostringstream os;
  write_svg_plot(os, "t", "x", "y", {{"a", {0, 1}, {0, 1}}, {"b", {0, 1}, {1, 0}}});
  const auto s = os.str();
  EXPECT_EQ(s.rfind("<svg", 0), 0U);
  std::size_t count = 0;
  for (std::size_t pos = s.find("<polyline"); pos != std::string::npos; pos = s.find("<polyline", pos + 1)) ++count;
  EXPECT_EQ(count, 2U);
}
