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
 * First-order Trotterized evolution on dense state vectors, plus a
 * time-ordered exact propagator used as an oracle.
 */

#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cdsim/cd_drivers.hpp"
#include "cdsim/error.hpp"
#include "cdsim/format.hpp"
#include "cdsim/models.hpp"
#include "cdsim/pauli.hpp"
#include "cdsim/state_vector.hpp"

namespace cdsim {

/// psi <- exp(-i theta P) psi = (cos theta - i sin theta P) psi.
inline void apply_pauli_rotation(StateVector& psi, const PauliString& p, double theta) {
  if (p.size() != psi.n_qubits()) {
    throw DimensionError("Pauli string " + p.letters() + " does not fit a " +
                         std::to_string(psi.n_qubits()) + "-qubit state");
  }
  if (theta == 0.0) return;
  const double c = std::cos(theta);
  const Complex mis(0.0, -std::sin(theta));
  const std::uint64_t flip = p.flip_mask();
  const std::uint64_t dim = psi.dimension();
  if (flip == 0) {
    for (std::uint64_t i = 0; i < dim; ++i) psi[i] *= c + mis * p.basis_phase(i);
    return;
  }
  // Pairs (i, i ^ flip) are disjoint; visit each once from the side with
  // the flip's top bit clear.
  const std::uint64_t top = std::uint64_t{1} << (63 - std::countl_zero(flip));
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (i & top) continue;
    const std::uint64_t j = i ^ flip;
    const Complex ai = psi[i];
    const Complex aj = psi[j];
    psi[i] = c * ai + mis * p.basis_phase(j) * aj;
    psi[j] = c * aj + mis * p.basis_phase(i) * ai;
  }
}

enum class TermBlock { transverse, longitudinal, coupling, counterdiabatic };

inline std::string to_string(TermBlock b) {
  switch (b) {
    case TermBlock::transverse: return "x";
    case TermBlock::longitudinal: return "z";
    case TermBlock::coupling: return "zz";
    case TermBlock::counterdiabatic: return "cd";
  }
  return "?";
}

using BlockOrder = std::vector<TermBlock>;

/// Transverse field, CD, longitudinal field, couplings.
inline BlockOrder default_block_order() {
  return {TermBlock::transverse, TermBlock::counterdiabatic, TermBlock::longitudinal,
          TermBlock::coupling};
}

/// Parses a comma-separated permutation of x, z, zz, cd.
inline BlockOrder parse_block_order(const std::string& text) {
  BlockOrder out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    TermBlock b;
    if (item == "x") b = TermBlock::transverse;
    else if (item == "z") b = TermBlock::longitudinal;
    else if (item == "zz") b = TermBlock::coupling;
    else if (item == "cd") b = TermBlock::counterdiabatic;
    else throw ConfigError("unknown Trotter block \"" + item + "\" (expected x, z, zz, cd)");
    if (std::find(out.begin(), out.end(), b) != out.end()) {
      throw ConfigError("Trotter block \"" + item + "\" listed twice");
    }
    out.push_back(b);
  }
  if (out.size() != 4) throw ConfigError("Trotter order must list x, z, zz and cd exactly once");
  return out;
}

inline std::string to_string(const BlockOrder& order) {
  std::string out;
  for (auto b : order) {
    if (!out.empty()) out += ',';
    out += to_string(b);
  }
  return out;
}

struct TrotterOptions {
  BlockOrder order = default_block_order();
  /// Sample coefficients at (j - 1/2) dt instead of j dt.
  bool midpoint_sampling = false;
  bool record = true;
  /// Keep a copy of the state after every step (refused above 12 qubits).
  bool snapshots = false;
};

struct PlanEntry {
  PauliString string;
  double angle = 0.0;  // exp(-i angle P)
  TermBlock block = TermBlock::transverse;
};

struct PlanStep {
  std::size_t index = 0;  // 1-based
  double t = 0.0;         // end of the step
  double sample_time = 0.0;
  double lambda = 0.0;
  double lambda_dot = 0.0;
  std::vector<PlanEntry> entries;
};

struct TrotterPlan {
  std::size_t n_qubits = 0;
  double dt = 0.0;
  std::vector<PlanStep> steps;

  std::size_t entry_count() const {
    std::size_t c = 0;
    for (const auto& s : steps) c += s.entries.size();
    return c;
  }
};

namespace detail {

inline void emit(std::vector<PlanEntry>& out, const PauliSum& h, double scale, double dt,
                 TermBlock block, bool keep_zero) {
  for (const auto& [p, c] : h) {
    if (std::abs(c.imag()) > 1e-10 * std::max(1.0, std::abs(c.real()))) {
      throw NumericalError("non-Hermitian term " + p.letters() + " in Trotter block " +
                           to_string(block));
    }
    const double angle = dt * scale * c.real();
    if (!std::isfinite(angle)) {
      throw NumericalError("non-finite Trotter angle for " + p.letters());
    }
    if (angle == 0.0 && !keep_zero) continue;
    out.push_back({p, angle, block});
  }
}

}  // namespace detail

/// Per step j: each block of the configured order with angle dt * coefficient
/// sampled at t = j dt (or the step midpoint).
inline TrotterPlan build_plan(const AnnealingProblem& problem, const CDTerm* cd,
                              const TrotterOptions& options = {}) {
  const std::size_t n_steps = problem.steps();
  const std::size_t n = problem.n_qubits();
  if (cd != nullptr && cd->n_qubits() != n) {
    throw DimensionError("CD term and problem register sizes differ");
  }
  PauliSum transverse = problem.h_i;
  PauliSum longitudinal(n);
  PauliSum coupling(n);
  for (const auto& [p, c] : problem.h_f) {
    (p.weight() == 1 ? longitudinal : coupling).add(p, c);
  }

  TrotterPlan plan;
  plan.n_qubits = n;
  plan.dt = problem.dt;
  plan.steps.reserve(n_steps);
  for (std::size_t j = 1; j <= n_steps; ++j) {
    PlanStep step;
    step.index = j;
    step.t = static_cast<double>(j) * problem.dt;
    step.sample_time = options.midpoint_sampling ? (static_cast<double>(j) - 0.5) * problem.dt : step.t;
    step.lambda = problem.schedule.lambda(step.sample_time);
    step.lambda_dot = problem.schedule.lambda_dot(step.sample_time);
    for (TermBlock b : options.order) {
      switch (b) {
        case TermBlock::transverse:
          detail::emit(step.entries, transverse, 1.0 - step.lambda, problem.dt, b, true);
          break;
        case TermBlock::longitudinal:
          detail::emit(step.entries, longitudinal, step.lambda, problem.dt, b, true);
          break;
        case TermBlock::coupling:
          detail::emit(step.entries, coupling, step.lambda, problem.dt, b, true);
          break;
        case TermBlock::counterdiabatic:
          if (cd != nullptr) {
            detail::emit(step.entries, cd->evaluate(step.lambda, step.lambda_dot), 1.0, problem.dt,
                         b, false);
          }
          break;
      }
    }
    plan.steps.push_back(std::move(step));
  }
  return plan;
}

inline TrotterPlan build_plan(const AnnealingProblem& problem, const std::optional<CDTerm>& cd,
                              const TrotterOptions& options = {}) {
  return build_plan(problem, cd ? &*cd : nullptr, options);
}

/// Applies entries in emission order: the first entry acts first.
inline void execute_step(const PlanStep& step, StateVector& psi) {
  for (const auto& e : step.entries) apply_pauli_rotation(psi, e.string, e.angle);
}

inline void execute_plan(const TrotterPlan& plan, StateVector& psi) {
  for (const auto& s : plan.steps) execute_step(s, psi);
}

/// The inverse plan: entries reversed with negated angles.
inline TrotterPlan reverse_plan(const TrotterPlan& plan) {
  TrotterPlan out = plan;
  std::reverse(out.steps.begin(), out.steps.end());
  for (auto& s : out.steps) {
    std::reverse(s.entries.begin(), s.entries.end());
    for (auto& e : s.entries) e.angle = -e.angle;
  }
  return out;
}

/// |<target|psi>|^2.
inline double fidelity(const StateVector& psi, const StateVector& target) {
  return std::norm(target.inner(psi));
}

/// Probability of the computational basis state named by `label`.
inline double ground_probability(const StateVector& psi, std::string_view label) {
  if (label.size() != psi.n_qubits()) {
    throw DomainError("label \"" + std::string(label) + "\" does not match " +
                      std::to_string(psi.n_qubits()) + " qubits");
  }
  return std::norm(psi[StateVector::index_of(label)]);
}

/// Total probability on a set of basis indices.
inline double support_probability(const StateVector& psi, const std::vector<std::uint64_t>& support) {
  double p = 0.0;
  for (auto i : support) p += std::norm(psi[i]);
  return p;
}

/// |psi><psi|.
inline DenseMatrix density_matrix(const StateVector& psi) {
  if (psi.n_qubits() > 10) throw DimensionError("density matrix export is limited to 10 qubits");
  return psi.amplitudes() * psi.amplitudes().adjoint();
}

struct StepRecord {
  std::size_t step = 0;
  double t = 0.0;
  double lambda = 0.0;
  double p_gs = 0.0;
  double fidelity = 0.0;
};

struct EvolutionResult {
  std::vector<StepRecord> records;  // step 0 is the initial state
  std::vector<StateVector> snapshots;
  StateVector final_state;

  double final_fidelity() const { return records.empty() ? 0.0 : records.back().fidelity; }
  double final_p_gs() const { return records.empty() ? 0.0 : records.back().p_gs; }
};

inline StepRecord observe(const AnnealingProblem& problem, const StateVector& psi, std::size_t step,
                          double t) {
  return {step, t, problem.schedule.lambda(t), support_probability(psi, problem.target_support),
          fidelity(psi, problem.target_state)};
}

inline EvolutionResult execute_with_records(const AnnealingProblem& problem, const TrotterPlan& plan,
                                            const TrotterOptions& options = {}) {
  if (options.snapshots && problem.n_qubits() > 12) {
    throw DimensionError("state snapshots are disabled above 12 qubits");
  }
  EvolutionResult out;
  StateVector psi = problem.initial_state;
  if (options.record) out.records.push_back(observe(problem, psi, 0, 0.0));
  for (const auto& s : plan.steps) {
    execute_step(s, psi);
    if (options.record) out.records.push_back(observe(problem, psi, s.index, s.t));
    if (options.snapshots) out.snapshots.push_back(psi);
  }
  if (!options.record) out.records.push_back(observe(problem, psi, plan.steps.size(), problem.total_time()));
  out.final_state = std::move(psi);
  return out;
}

inline EvolutionResult trotter_evolve(const AnnealingProblem& problem, const CDTerm* cd,
                                      const TrotterOptions& options = {}) {
  return execute_with_records(problem, build_plan(problem, cd, options), options);
}

inline EvolutionResult trotter_evolve(const AnnealingProblem& problem,
                                      const std::optional<CDTerm>& cd,
                                      const TrotterOptions& options = {}) {
  return trotter_evolve(problem, cd ? &*cd : nullptr, options);
}

// ---------------------------------------------------------------------------
// Exact propagation

using HamiltonianFn = std::function<PauliSum(double t)>;

struct ExactOptions {
  double max_slice = 1e-3;  // initial slice width
  double tolerance = 1e-8;  // ||psi_h - psi_{h/2}|| target
  int max_halvings = 12;
  std::size_t max_qubits = 10;
};

struct ExactResult {
  StateVector state;
  std::size_t slices = 0;
  double achieved_tolerance = 0.0;
};

namespace detail {

/// exp(-i tau H) psi through the Hermitian eigendecomposition.
inline Eigen::VectorXcd hermitian_propagate(const DenseMatrix& h, double tau,
                                            const Eigen::VectorXcd& psi) {
  const Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(h);
  if (eig.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");
  Eigen::VectorXcd coeff = eig.eigenvectors().adjoint() * psi;
  for (Eigen::Index k = 0; k < coeff.size(); ++k) {
    coeff(k) *= std::exp(Complex(0.0, -tau * eig.eigenvalues()(k)));
  }
  return eig.eigenvectors() * coeff;
}

/// Fourth-order commutator-free Magnus integrator with a fixed slice count.
inline Eigen::VectorXcd magnus4(const HamiltonianFn& h, double t0, double t1, std::size_t slices,
                                Eigen::VectorXcd psi, std::size_t max_qubits) {
  const double s3 = std::sqrt(3.0);
  const double c1 = 0.5 - s3 / 6.0;
  const double c2 = 0.5 + s3 / 6.0;
  const double a1 = (3.0 - 2.0 * s3) / 12.0;
  const double a2 = (3.0 + 2.0 * s3) / 12.0;
  const double width = (t1 - t0) / static_cast<double>(slices);
  for (std::size_t k = 0; k < slices; ++k) {
    const double t = t0 + static_cast<double>(k) * width;
    const DenseMatrix h1 = to_dense(h(t + c1 * width), max_qubits);
    const DenseMatrix h2 = to_dense(h(t + c2 * width), max_qubits);
    psi = hermitian_propagate(a2 * h1 + a1 * h2, width, psi);
    psi = hermitian_propagate(a1 * h1 + a2 * h2, width, psi);
  }
  return psi;
}

}  // namespace detail

/// Time-ordered propagation of psi0 from t0 to t1, halving slices until
/// successive results agree to options.tolerance.
inline ExactResult propagate_exact(const HamiltonianFn& h, const StateVector& psi0, double t0,
                                   double t1, const ExactOptions& options = {}) {
  if (psi0.n_qubits() > options.max_qubits) {
    throw DimensionError("exact propagation is limited to " + std::to_string(options.max_qubits) +
                         " qubits");
  }
  if (!(t1 >= t0)) throw DomainError("propagation interval must be ordered");
  ExactResult out;
  if (t1 == t0) {
    out.state = psi0;
    return out;
  }
  auto slices = static_cast<std::size_t>(std::ceil((t1 - t0) / options.max_slice - 1e-9));
  slices = std::max<std::size_t>(slices, 1);
  Eigen::VectorXcd coarse = detail::magnus4(h, t0, t1, slices, psi0.amplitudes(), options.max_qubits);
  double diff = 0.0;
  for (int halving = 0; halving <= options.max_halvings; ++halving) {
    slices *= 2;
    Eigen::VectorXcd fine = detail::magnus4(h, t0, t1, slices, psi0.amplitudes(), options.max_qubits);
    diff = (fine - coarse).norm();
    coarse = std::move(fine);
    if (diff < options.tolerance) {
      out.state = StateVector(psi0.n_qubits(), std::move(coarse));
      out.slices = slices;
      out.achieved_tolerance = diff;
      return out;
    }
  }
  throw NumericalError("exact propagation did not converge: achieved " + format_number(diff) +
                       " against tolerance " + format_number(options.tolerance) + " with " +
                       std::to_string(slices) + " slices");
}

/// H(t) + lambda_dot(t) A(lambda(t)) for a problem and optional driver.
inline HamiltonianFn driven_hamiltonian(const AnnealingProblem& problem, const CDTerm* cd) {
  return [&problem, cd](double t) {
    const double lambda = problem.schedule.lambda(t);
    PauliSum h = interpolate(problem, lambda);
    if (cd != nullptr) h += cd->evaluate(lambda, problem.schedule.lambda_dot(t));
    return h;
  };
}

/// Exact final state; slices start at dt / 100.
inline StateVector exact_evolve(const AnnealingProblem& problem, const CDTerm* cd,
                                ExactOptions options = {}) {
  options.max_slice = std::min(options.max_slice, problem.dt / 100.0);
  return propagate_exact(driven_hamiltonian(problem, cd), problem.initial_state, 0.0,
                         problem.total_time(), options)
      .state;
}

inline StateVector exact_evolve(const AnnealingProblem& problem, const std::optional<CDTerm>& cd,
                                ExactOptions options = {}) {
  return exact_evolve(problem, cd ? &*cd : nullptr, options);
}

// ---------------------------------------------------------------------------
// I/O

inline void write_records_csv(std::ostream& os, const std::vector<StepRecord>& records) {
  os << "step,t,lambda,p_gs,fidelity\n";
  for (const auto& r : records) {
    os << r.step << ',' << format_number(r.t) << ',' << format_number(r.lambda) << ','
       << format_number(r.p_gs) << ',' << format_number(r.fidelity) << '\n';
  }
}

namespace detail {

inline void put_le(std::ostream& os, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  char buf[8];
  for (int k = 0; k < 8; ++k) buf[k] = static_cast<char>((bits >> (8 * k)) & 0xFFU);
  os.write(buf, 8);
}

inline bool get_le(std::istream& is, double& v) {
  unsigned char buf[8];
  if (!is.read(reinterpret_cast<char*>(buf), 8)) return false;
  std::uint64_t bits = 0;
  for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(buf[k]) << (8 * k);
  std::memcpy(&v, &bits, sizeof v);
  return true;
}

}  // namespace detail

/// Raw little-endian doubles: re0, im0, re1, im1, ...
inline void write_state_binary(std::ostream& os, const StateVector& psi) {
  for (std::uint64_t i = 0; i < psi.dimension(); ++i) {
    detail::put_le(os, psi[i].real());
    detail::put_le(os, psi[i].imag());
  }
}

inline StateVector read_state_binary(std::istream& is) {
  std::vector<Complex> amps;
  double re = 0.0;
  double im = 0.0;
  while (detail::get_le(is, re)) {
    if (!detail::get_le(is, im)) throw DomainError("state dump ends inside an amplitude");
    amps.emplace_back(re, im);
  }
  if (amps.empty() || !std::has_single_bit(amps.size())) {
    throw DomainError("state dump length " + std::to_string(amps.size()) + " is not a power of two");
  }
  Eigen::VectorXcd v(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t i = 0; i < amps.size(); ++i) v(static_cast<Eigen::Index>(i)) = amps[i];
  return StateVector(static_cast<std::size_t>(std::countr_zero(amps.size())), std::move(v));
}

}  // namespace cdsim
