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
 * Annealing problems H(lambda) = (1 - lambda) H_i + lambda H_f on spin
 * chains, with a sin^2 schedule and ground-state bookkeeping.
 */

#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "cdsim/error.hpp"
#include "cdsim/pauli.hpp"
#include "cdsim/state_vector.hpp"

namespace cdsim {

/// lambda(t) = sin^2(pi t / 2T). The rate is exactly zero at and beyond both ends.
class Sin2Schedule {
 public:
  Sin2Schedule() = default;

  explicit Sin2Schedule(double total_time) : total_time_(total_time) {
    if (!(total_time > 0.0) || !std::isfinite(total_time)) {
      throw DomainError("schedule total time must be positive, got " + format_number(total_time));
    }
  }

  double total_time() const noexcept { return total_time_; }
  double omega() const noexcept { return std::numbers::pi / (2.0 * total_time_); }

  double lambda(double t) const {
    if (t <= 0.0) return 0.0;
    if (t >= total_time_) return 1.0;
    const double s = std::sin(omega() * t);
    return std::clamp(s * s, 0.0, 1.0);
  }

  double lambda_dot(double t) const {
    if (t <= 0.0 || t >= total_time_) return 0.0;
    return omega() * std::sin(2.0 * omega() * t);
  }

 private:
  double total_time_ = 1.0;
};

enum class Boundary { open, periodic };
enum class ModelKind { single_spin, ising_chain, zz_chain };

inline std::string to_string(Boundary b) { return b == Boundary::open ? "open" : "periodic"; }

inline std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::single_spin: return "single_spin";
    case ModelKind::ising_chain: return "ising_chain";
    case ModelKind::zz_chain: return "zz_chain";
  }
  return "unknown";
}

struct SpinChainSpec {
  std::size_t n = 1;
  double h_x = -1.0;
  std::vector<double> h_z{1.0};
  double j0 = 0.0;
  Boundary boundary = Boundary::open;

  void validate() const {
    if (n < 1) throw DomainError("chain needs at least one spin");
    if (h_z.size() != n) {
      throw DimensionError("h_z has " + std::to_string(h_z.size()) + " entries for " +
                           std::to_string(n) + " spins");
    }
  }

  /// Distinct coupled pairs (a, b), a < b. A two-site ring has a single bond.
  std::vector<std::pair<std::size_t, std::size_t>> bonds() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t j = 0; j + 1 < n; ++j) out.emplace_back(j, j + 1);
    if (boundary == Boundary::periodic && n > 2) out.emplace_back(0, n - 1);
    return out;
  }

  /// Number of bonds touching `site`.
  std::size_t coordination(std::size_t site) const {
    std::size_t c = 0;
    for (auto [a, b] : bonds()) c += (a == site) + (b == site);
    return c;
  }
};

struct AnnealingProblem {
  ModelKind model = ModelKind::single_spin;
  SpinChainSpec chain;
  PauliSum h_i;
  PauliSum h_f;
  Sin2Schedule schedule;
  double dt = 0.1;
  StateVector initial_state;
  StateVector target_state;
  /// Basis indices carrying weight in the target; P_gs sums over these.
  std::vector<std::uint64_t> target_support;
  std::vector<std::string> warnings;

  std::size_t n_qubits() const noexcept { return h_i.n_qubits(); }
  double total_time() const noexcept { return schedule.total_time(); }

  /// Number of Trotter steps T / dt; throws unless it is a positive integer.
  std::size_t steps() const {
    const double ratio = total_time() / dt;
    const double rounded = std::round(ratio);
    if (!(dt > 0.0) || rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
      throw DomainError("T / dt = " + format_number(total_time()) + " / " + format_number(dt) +
                        " is not a positive integer");
    }
    return static_cast<std::size_t>(rounded);
  }

  /// dH/dlambda, independent of lambda.
  PauliSum dh() const { return h_f - h_i; }

  /// Replaces the target with an arbitrary normalized state.
  void set_target(StateVector target) {
    target.check_same_size(initial_state);
    target.normalize();
    target_support.clear();
    for (std::uint64_t i = 0; i < target.dimension(); ++i) {
      if (std::abs(target[i]) > 1e-12) target_support.push_back(i);
    }
    target_state = std::move(target);
  }
};

/// (1 - lambda) H_i + lambda H_f.
inline PauliSum interpolate(const AnnealingProblem& p, double lambda) {
  if (!(lambda >= -1e-12 && lambda <= 1.0 + 1e-12)) {
    throw DomainError("lambda must lie in [0, 1], got " + format_number(lambda));
  }
  return p.h_i * (1.0 - lambda) + p.h_f * lambda;
}

namespace detail {

inline PauliSum transverse_field(std::size_t n, double h_x) {
  PauliSum h(n);
  for (std::size_t j = 0; j < n; ++j) h.add(PauliString::single(n, j, Pauli::X), h_x);
  return h;
}

inline PauliSum longitudinal_part(const SpinChainSpec& chain) {
  PauliSum h(chain.n);
  for (std::size_t j = 0; j < chain.n; ++j) h.add(PauliString::single(chain.n, j, Pauli::Z), chain.h_z[j]);
  for (auto [a, b] : chain.bonds()) {
    h.add(PauliString::pair(chain.n, a, Pauli::Z, b, Pauli::Z), chain.j0);
  }
  return h;
}

/// Diagonal of a Z-only Pauli sum in the computational basis.
inline std::vector<double> diagonal_energies(const PauliSum& h) {
  const std::uint64_t dim = std::uint64_t{1} << h.n_qubits();
  std::vector<double> e(dim, 0.0);
  for (const auto& [p, c] : h) {
    if (p.flip_mask() != 0) throw DomainError("operator is not diagonal: " + p.letters());
    for (std::uint64_t i = 0; i < dim; ++i) e[i] += (c * p.basis_phase(i)).real();
  }
  return e;
}

inline void finish_problem(AnnealingProblem& p, double total_time, double dt) {
  p.chain.validate();
  if (p.chain.h_x == 0.0) {
    throw DomainError("transverse field h_x must be nonzero for a unique initial ground state");
  }
  p.schedule = Sin2Schedule(total_time);
  p.dt = dt;
  p.steps();
  p.h_i = transverse_field(p.chain.n, p.chain.h_x);
  p.h_f = longitudinal_part(p.chain);
  p.initial_state = p.chain.h_x < 0.0 ? StateVector::plus(p.chain.n) : StateVector::minus(p.chain.n);

  // Equal-weight superposition over the degenerate minimum of the diagonal H_f.
  const auto energies = diagonal_energies(p.h_f);
  const double e_min = *std::min_element(energies.begin(), energies.end());
  Eigen::VectorXcd target = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(energies.size()));
  for (std::uint64_t i = 0; i < energies.size(); ++i) {
    if (energies[i] - e_min < 1e-9) target(static_cast<Eigen::Index>(i)) = 1.0;
  }
  p.set_target(StateVector(p.chain.n, std::move(target)));
}

}  // namespace detail

/// H_i = h_x X, H_f = h_z Z.
inline AnnealingProblem build_single_spin(double h_x, double h_z, double total_time, double dt) {
  if (h_x == 0.0 || h_z == 0.0) throw DomainError("single-spin fields must both be nonzero");
  AnnealingProblem p;
  p.model = ModelKind::single_spin;
  p.chain = SpinChainSpec{1, h_x, {h_z}, 0.0, Boundary::open};
  detail::finish_problem(p, total_time, dt);
  return p;
}

/// H_i = h_x sum X_j, H_f = sum h_z^j Z_j + J0 sum Z_a Z_b over the chain bonds.
inline AnnealingProblem build_ising_chain(const SpinChainSpec& chain, double total_time, double dt) {
  if (chain.n < 2) throw DomainError("ising chain needs n >= 2, got " + std::to_string(chain.n));
  AnnealingProblem p;
  p.model = ModelKind::ising_chain;
  p.chain = chain;
  if (chain.boundary == Boundary::periodic && chain.n == 2) {
    p.warnings.push_back("two-site periodic chain: wrapped bond coincides with the open bond, kept once");
  }
  detail::finish_problem(p, total_time, dt);
  return p;
}

/// Pure ZZ ring (no longitudinal field); ferromagnetic J0 < 0 targets GHZ.
inline AnnealingProblem build_zz_chain(std::size_t n, double h_x, double j0, double total_time,
                                       double dt, Boundary boundary = Boundary::periodic) {
  if (n < 2) throw DomainError("zz chain needs n >= 2, got " + std::to_string(n));
  if (j0 == 0.0) throw DomainError("zz chain coupling must be nonzero");
  AnnealingProblem p;
  p.model = ModelKind::zz_chain;
  p.chain = SpinChainSpec{n, h_x, std::vector<double>(n, 0.0), j0, boundary};
  if (boundary == Boundary::periodic && n == 2) {
    p.warnings.push_back("two-site periodic chain: wrapped bond coincides with the open bond, kept once");
  }
  detail::finish_problem(p, total_time, dt);
  return p;
}

/// Eigenvectors spanning the lowest eigenspace of a dense Hermitian matrix.
inline Eigen::MatrixXcd ground_eigenspace(const PauliSum& h, double degeneracy_tol = 1e-9,
                                          std::size_t max_qubits = 12) {
  const Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(to_dense(h, max_qubits));
  if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");
  const auto& e = solver.eigenvalues();
  Eigen::Index k = 1;
  while (k < e.size() && e(k) - e(0) < degeneracy_tol) ++k;
  return solver.eigenvectors().leftCols(k);
}

/// Sum of |<g_k|psi>|^2 over the ground eigenspace of h.
inline double ground_manifold_overlap(const PauliSum& h, const StateVector& psi) {
  if (h.n_qubits() != psi.n_qubits()) throw DimensionError("operator and state sizes differ");
  const Eigen::MatrixXcd g = ground_eigenspace(h);
  return (g.adjoint() * psi.amplitudes()).squaredNorm();
}

/// True when psi lies in the ground eigenspace of h to within `tol` in norm.
inline bool in_ground_eigenspace(const PauliSum& h, const StateVector& psi, double tol = 1e-10) {
  const Eigen::MatrixXcd g = ground_eigenspace(h);
  const Eigen::VectorXcd residual = psi.amplitudes() - g * (g.adjoint() * psi.amplitudes());
  return residual.norm() < tol;
}

}  // namespace cdsim
