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

#pragma once

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <cstdint>
#include <string>
#include <string_view>

#include "cdsim/error.hpp"
#include "cdsim/pauli.hpp"

namespace cdsim {

/**
 * Dense 2^N amplitude vector. Basis index bit (N - 1 - q) holds qubit q,
 * so the label "01" is index 1.
 */
class StateVector {
 public:
  static constexpr std::size_t kMaxQubits = 30;

  StateVector() = default;

  /// |0...0> on `n_qubits` qubits.
  explicit StateVector(std::size_t n_qubits) : n_(n_qubits) {
    if (n_qubits == 0 || n_qubits > kMaxQubits) {
      throw DimensionError("state vector size must be in [1, " + std::to_string(kMaxQubits) +
                           "] qubits, got " + std::to_string(n_qubits));
    }
    amps_ = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(std::uint64_t{1} << n_qubits));
    amps_(0) = 1.0;
  }

  StateVector(std::size_t n_qubits, Eigen::VectorXcd amplitudes) : n_(n_qubits) {
    if (n_qubits == 0 || n_qubits > kMaxQubits ||
        amplitudes.size() != static_cast<Eigen::Index>(std::uint64_t{1} << n_qubits)) {
      throw DimensionError("amplitude vector of length " + std::to_string(amplitudes.size()) +
                           " does not describe " + std::to_string(n_qubits) + " qubits");
    }
    amps_ = std::move(amplitudes);
  }

  static StateVector basis(std::size_t n_qubits, std::uint64_t index) {
    StateVector s(n_qubits);
    if (index >= s.dimension()) throw DimensionError("basis index out of range");
    s.amps_(0) = 0.0;
    s.amps_(static_cast<Eigen::Index>(index)) = 1.0;
    return s;
  }

  /// Computational basis state from a bitstring, qubit 0 first.
  static StateVector from_label(std::string_view label) {
    return basis(label.size(), index_of(label));
  }

  /// |+>^N.
  static StateVector plus(std::size_t n_qubits) {
    StateVector s(n_qubits);
    s.amps_.setConstant(1.0 / std::sqrt(static_cast<double>(s.dimension())));
    return s;
  }

  /// |-> on every qubit: amplitude sign (-1)^popcount(i).
  static StateVector minus(std::size_t n_qubits) {
    StateVector s = plus(n_qubits);
    for (std::uint64_t i = 0; i < s.dimension(); ++i) {
      if (std::popcount(i) & 1) s.amps_(static_cast<Eigen::Index>(i)) *= -1.0;
    }
    return s;
  }

  /// (|0...0> + |1...1>) / sqrt(2).
  static StateVector ghz(std::size_t n_qubits) {
    StateVector s(n_qubits);
    s.amps_(0) = 1.0 / std::numbers::sqrt2;
    s.amps_(s.amps_.size() - 1) = 1.0 / std::numbers::sqrt2;
    return s;
  }

  /// Parses a bitstring label into a basis index.
  static std::uint64_t index_of(std::string_view label) {
    if (label.empty() || label.size() > kMaxQubits) {
      throw DomainError("bad basis label \"" + std::string(label) + "\"");
    }
    std::uint64_t index = 0;
    for (char c : label) {
      if (c != '0' && c != '1') throw DomainError("bad basis label \"" + std::string(label) + "\"");
      index = (index << 1) | static_cast<std::uint64_t>(c == '1');
    }
    return index;
  }

  static std::string label_of(std::uint64_t index, std::size_t n_qubits) {
    std::string out(n_qubits, '0');
    for (std::size_t q = 0; q < n_qubits; ++q) {
      if ((index >> (n_qubits - 1 - q)) & 1U) out[q] = '1';
    }
    return out;
  }

  std::size_t n_qubits() const noexcept { return n_; }
  std::uint64_t dimension() const noexcept { return static_cast<std::uint64_t>(amps_.size()); }
  const Eigen::VectorXcd& amplitudes() const noexcept { return amps_; }
  Eigen::VectorXcd& amplitudes() noexcept { return amps_; }

  Complex operator[](std::uint64_t index) const { return amps_(static_cast<Eigen::Index>(index)); }
  Complex& operator[](std::uint64_t index) { return amps_(static_cast<Eigen::Index>(index)); }

  double norm() const { return amps_.norm(); }

  void normalize() {
    const double n = norm();
    if (!(n > 0.0)) throw NumericalError("cannot normalize a zero state");
    amps_ /= n;
  }

  /// <this|other>.
  Complex inner(const StateVector& other) const {
    check_same_size(other);
    return amps_.dot(other.amps_);
  }

  /// |amplitude|^2 for every basis index.
  Eigen::VectorXd probabilities() const { return amps_.cwiseAbs2(); }

  void check_same_size(const StateVector& other) const {
    if (other.n_ != n_) {
      throw DimensionError("state size mismatch: " + std::to_string(n_) + " vs " +
                           std::to_string(other.n_) + " qubits");
    }
  }

 private:
  std::size_t n_ = 0;
  Eigen::VectorXcd amps_;
};

/// P|psi> for a single Pauli string.
inline StateVector apply_pauli(const StateVector& psi, const PauliString& p) {
  if (p.size() != psi.n_qubits()) {
    throw DimensionError("Pauli string " + p.letters() + " does not fit a " +
                         std::to_string(psi.n_qubits()) + "-qubit state");
  }
  StateVector out = psi;
  const std::uint64_t flip = p.flip_mask();
  for (std::uint64_t i = 0; i < psi.dimension(); ++i) out[i ^ flip] = p.basis_phase(i) * psi[i];
  return out;
}

/// H|psi> for a Pauli sum, without forming the dense matrix.
inline StateVector apply_sum(const StateVector& psi, const PauliSum& h) {
  if (h.n_qubits() != psi.n_qubits()) {
    throw DimensionError("operator and state register sizes differ");
  }
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(psi.dimension()));
  for (const auto& [p, c] : h) {
    const std::uint64_t flip = p.flip_mask();
    for (std::uint64_t i = 0; i < psi.dimension(); ++i) {
      out(static_cast<Eigen::Index>(i ^ flip)) += c * p.basis_phase(i) * psi[i];
    }
  }
  return StateVector(psi.n_qubits(), std::move(out));
}

/// <psi|H|psi>, real part.
inline double expectation(const StateVector& psi, const PauliSum& h) {
  return psi.inner(apply_sum(psi, h)).real();
}

}  // namespace cdsim
