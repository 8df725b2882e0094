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
 * Compilation of Trotter plans to rotation + CNOT circuits, a
 * commutation-aware peephole optimizer, gate statistics and QASM export.
 *
 * Rotation convention: R_A(phi) = exp(-i phi A / 2), so a plan entry
 * exp(-i theta P) becomes a rotation with parameter 2 theta.
 */

#pragma once

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "cdsim/error.hpp"
#include "cdsim/evolution.hpp"
#include "cdsim/format.hpp"
#include "cdsim/models.hpp"
#include "cdsim/state_vector.hpp"

namespace cdsim {

enum class GateKind { rx, ry, rz, cnot, h };

struct Gate {
  GateKind kind = GateKind::h;
  std::size_t qubit = 0;   // rotation/H qubit, or CNOT control
  std::size_t target = 0;  // CNOT target
  double angle = 0.0;

  static Gate rx(std::size_t q, double a) { return {GateKind::rx, q, 0, a}; }
  static Gate ry(std::size_t q, double a) { return {GateKind::ry, q, 0, a}; }
  static Gate rz(std::size_t q, double a) { return {GateKind::rz, q, 0, a}; }
  static Gate cnot(std::size_t c, std::size_t t) { return {GateKind::cnot, c, t, 0.0}; }
  static Gate hadamard(std::size_t q) { return {GateKind::h, q, 0, 0.0}; }

  bool is_rotation() const noexcept {
    return kind == GateKind::rx || kind == GateKind::ry || kind == GateKind::rz;
  }
  bool touches(std::size_t q) const noexcept {
    return qubit == q || (kind == GateKind::cnot && target == q);
  }

  friend bool operator==(const Gate&, const Gate&) = default;
};

struct Circuit {
  std::size_t n_qubits = 0;
  std::vector<Gate> gates;

  void add(const Gate& g) {
    if (g.qubit >= n_qubits || (g.kind == GateKind::cnot && (g.target >= n_qubits || g.target == g.qubit))) {
      throw DimensionError("gate addresses a qubit outside a " + std::to_string(n_qubits) +
                           "-qubit circuit");
    }
    if (!std::isfinite(g.angle)) throw NumericalError("non-finite gate angle");
    gates.push_back(g);
  }

  void append(const Circuit& other) {
    if (other.n_qubits != n_qubits) throw DimensionError("circuit register sizes differ");
    gates.insert(gates.end(), other.gates.begin(), other.gates.end());
  }

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

namespace detail {

inline void basis_change(Circuit& c, std::size_t q, Pauli p, bool undo) {
  switch (p) {
    case Pauli::X: c.add(Gate::hadamard(q)); break;
    case Pauli::Y: c.add(Gate::rx(q, undo ? -std::numbers::pi / 2 : std::numbers::pi / 2)); break;
    default: break;
  }
}

}  // namespace detail

/// Appends the gates realizing exp(-i theta P) for a weight <= 2 string.
inline void compile_entry(Circuit& c, const PauliString& p, double theta) {
  if (theta == 0.0) return;
  const auto support = p.support();
  if (support.empty()) return;  // global phase
  if (support.size() == 1) {
    const std::size_t q = support[0];
    switch (p[q]) {
      case Pauli::X: c.add(Gate::rx(q, 2.0 * theta)); break;
      case Pauli::Y: c.add(Gate::ry(q, 2.0 * theta)); break;
      case Pauli::Z: c.add(Gate::rz(q, 2.0 * theta)); break;
      default: break;
    }
    return;
  }
  if (support.size() > 2) {
    throw UnsupportedTermError(p.letters(), "weight " + std::to_string(support.size()) +
                                                " exceeds the two-qubit decompositions");
  }
  const std::size_t a = support[0];
  const std::size_t b = support[1];
  detail::basis_change(c, a, p[a], false);
  detail::basis_change(c, b, p[b], false);
  c.add(Gate::cnot(a, b));
  c.add(Gate::rz(b, 2.0 * theta));
  c.add(Gate::cnot(a, b));
  detail::basis_change(c, b, p[b], true);
  detail::basis_change(c, a, p[a], true);
}

inline Circuit compile(const TrotterPlan& plan) {
  Circuit c{plan.n_qubits, {}};
  for (const auto& step : plan.steps) {
    for (const auto& e : step.entries) compile_entry(c, e.string, e.angle);
  }
  return c;
}

/// State preparation for the initial ground state of h_x sum X_j.
inline Circuit preparation_circuit(const AnnealingProblem& problem) {
  Circuit c{problem.n_qubits(), {}};
  for (std::size_t q = 0; q < c.n_qubits; ++q) {
    if (problem.chain.h_x < 0.0) c.add(Gate::hadamard(q));
    else c.add(Gate::ry(q, -std::numbers::pi / 2));
  }
  return c;
}

namespace detail {

inline bool rotation_commutes(const Gate& rot, const Gate& g) {
  if (!g.touches(rot.qubit)) return true;
  if (g.is_rotation()) return g.kind == rot.kind;
  if (g.kind == GateKind::cnot) {
    if (g.qubit == rot.qubit) return rot.kind == GateKind::rz;
    return rot.kind == GateKind::rx;
  }
  return false;
}

inline bool cnot_commutes(const Gate& cx, const Gate& g) {
  if (!g.touches(cx.qubit) && !g.touches(cx.target)) return true;
  if (g.kind == GateKind::cnot) return g.qubit != cx.target && g.target != cx.qubit;
  if (g.kind == GateKind::rz) return g.qubit == cx.qubit;
  if (g.kind == GateKind::rx) return g.qubit == cx.target;
  return false;
}

/// One sweep of merges and cancellations; returns true if anything changed.
inline bool optimize_pass(std::vector<Gate>& gates, double angle_eps) {
  bool changed = false;
  std::vector<bool> dead(gates.size(), false);
  for (std::size_t i = 0; i < gates.size(); ++i) {
    if (dead[i]) continue;
    Gate& g = gates[i];
    if (g.is_rotation() && std::abs(g.angle) < angle_eps) {
      dead[i] = changed = true;
      continue;
    }
    for (std::size_t k = i + 1; k < gates.size(); ++k) {
      if (dead[k]) continue;
      const Gate& h = gates[k];
      if (g.is_rotation()) {
        if (h.kind == g.kind && h.qubit == g.qubit) {
          g.angle += h.angle;
          dead[k] = changed = true;
          if (std::abs(g.angle) < angle_eps) dead[i] = true;
          break;
        }
        if (!rotation_commutes(g, h)) break;
      } else if (g.kind == GateKind::cnot) {
        if (h == g) {
          dead[i] = dead[k] = changed = true;
          break;
        }
        if (!cnot_commutes(g, h)) break;
      } else {  // Hadamard
        if (h.kind == GateKind::h && h.qubit == g.qubit) {
          dead[i] = dead[k] = changed = true;
          break;
        }
        if (h.touches(g.qubit)) break;
      }
    }
  }
  if (changed) {
    std::vector<Gate> kept;
    kept.reserve(gates.size());
    for (std::size_t i = 0; i < gates.size(); ++i) {
      if (!dead[i]) kept.push_back(gates[i]);
    }
    gates = std::move(kept);
  }
  return changed;
}

}  // namespace detail

/// Merges same-axis rotations and cancels CNOT and H pairs, moving past
/// gates they commute with, until nothing changes. Idempotent.
inline Circuit optimize(Circuit c, double angle_eps = 1e-12) {
  while (detail::optimize_pass(c.gates, angle_eps)) {
  }
  return c;
}

inline void apply_gate(StateVector& psi, const Gate& g) {
  const std::size_t n = psi.n_qubits();
  const auto bit = [n](std::size_t q) { return std::uint64_t{1} << (n - 1 - q); };
  switch (g.kind) {
    case GateKind::rx:
      apply_pauli_rotation(psi, PauliString::single(n, g.qubit, Pauli::X), g.angle / 2.0);
      break;
    case GateKind::ry:
      apply_pauli_rotation(psi, PauliString::single(n, g.qubit, Pauli::Y), g.angle / 2.0);
      break;
    case GateKind::rz:
      apply_pauli_rotation(psi, PauliString::single(n, g.qubit, Pauli::Z), g.angle / 2.0);
      break;
    case GateKind::cnot: {
      const std::uint64_t cb = bit(g.qubit);
      const std::uint64_t tb = bit(g.target);
      for (std::uint64_t i = 0; i < psi.dimension(); ++i) {
        if ((i & cb) && !(i & tb)) std::swap(psi[i], psi[i | tb]);
      }
      break;
    }
    case GateKind::h: {
      const std::uint64_t b = bit(g.qubit);
      const double s = 1.0 / std::numbers::sqrt2;
      for (std::uint64_t i = 0; i < psi.dimension(); ++i) {
        if (i & b) continue;
        const Complex a0 = psi[i];
        const Complex a1 = psi[i | b];
        psi[i] = s * (a0 + a1);
        psi[i | b] = s * (a0 - a1);
      }
      break;
    }
  }
}

inline StateVector simulate_circuit(const Circuit& c, StateVector psi) {
  if (psi.n_qubits() != c.n_qubits) {
    throw DimensionError("circuit has " + std::to_string(c.n_qubits) + " qubits, state has " +
                         std::to_string(psi.n_qubits()));
  }
  for (const auto& g : c.gates) apply_gate(psi, g);
  return psi;
}

struct GateStats {
  std::size_t rotations = 0;  // single-qubit gates
  std::size_t cnots = 0;
  double expected_error = 0.0;
  double eps_rotation = 0.0;
  double eps_cnot = 0.0;

  std::size_t total() const noexcept { return rotations + cnots; }
};

/// Counts gates; expected error 1 - (1 - eps_rot)^r (1 - eps_cnot)^c.
inline GateStats gate_stats(const Circuit& c, double eps_rotation = 5e-4, double eps_cnot = 0.015) {
  if (!(eps_rotation >= 0.0 && eps_rotation <= 1.0 && eps_cnot >= 0.0 && eps_cnot <= 1.0)) {
    throw DomainError("gate error rates must lie in [0, 1]");
  }
  GateStats s;
  s.eps_rotation = eps_rotation;
  s.eps_cnot = eps_cnot;
  for (const auto& g : c.gates) (g.kind == GateKind::cnot ? s.cnots : s.rotations) += 1;
  s.expected_error = 1.0 - std::pow(1.0 - eps_rotation, static_cast<double>(s.rotations)) *
                               std::pow(1.0 - eps_cnot, static_cast<double>(s.cnots));
  return s;
}

/// OpenQASM 2 text using rx, ry, rz, cx and h.
inline std::string to_qasm(const Circuit& c) {
  std::string out = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[" + std::to_string(c.n_qubits) + "];\n";
  const auto q = [](std::size_t i) { return "q[" + std::to_string(i) + "]"; };
  for (const auto& g : c.gates) {
    switch (g.kind) {
      case GateKind::rx: out += "rx(" + format_number(g.angle) + ") " + q(g.qubit) + ";\n"; break;
      case GateKind::ry: out += "ry(" + format_number(g.angle) + ") " + q(g.qubit) + ";\n"; break;
      case GateKind::rz: out += "rz(" + format_number(g.angle) + ") " + q(g.qubit) + ";\n"; break;
      case GateKind::cnot: out += "cx " + q(g.qubit) + "," + q(g.target) + ";\n"; break;
      case GateKind::h: out += "h " + q(g.qubit) + ";\n"; break;
    }
  }
  return out;
}

struct GateCountRow {
  std::string problem;
  std::string method;
  std::size_t steps = 0;
  std::size_t rotations = 0;
  std::size_t cnots = 0;
  double expected_error = 0.0;
  double fidelity = 0.0;
};

inline void write_gate_stats_csv(std::ostream& os, const std::vector<GateCountRow>& rows) {
  os << "problem,method,steps,rotations,cnots,expected_error,fidelity\n";
  for (const auto& r : rows) {
    os << r.problem << ',' << r.method << ',' << r.steps << ',' << r.rotations << ',' << r.cnots
       << ',' << format_number(r.expected_error) << ',' << format_number(r.fidelity) << '\n';
  }
}

}  // namespace cdsim
