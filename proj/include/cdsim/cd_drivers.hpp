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
 * Counter-diabatic drivers. Every driver produces H_CD = lambda_dot * A(lambda)
 * where A approximates the adiabatic gauge potential:
 *  - berry_exact_single: exact A for one spin in a rotating field.
 *  - local_berry / local_variational: sum_j coeff_j Y_j on a chain.
 *  - nested_commutator: A = i sum_k alpha_k C_{2k-1}, with C_d the depth-d
 *    nested commutator of H with dH/dlambda and alpha minimizing Tr[G^2],
 *    G = dH/dlambda + i[A, H].
 */

#pragma once

#include <Eigen/Eigenvalues>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cdsim/error.hpp"
#include "cdsim/format.hpp"
#include "cdsim/models.hpp"
#include "cdsim/pauli.hpp"

namespace cdsim {

enum class CDMethod { none, berry_exact, local_berry, local_variational, nested_commutator };

struct CDSelection {
  CDMethod method = CDMethod::none;
  int order = 0;  // nested-commutator order; 0 otherwise
};

/// Short method name as accepted on the command line.
inline std::string to_string(const CDSelection& s) {
  switch (s.method) {
    case CDMethod::none: return "none";
    case CDMethod::berry_exact: return "berry";
    case CDMethod::local_berry: return "local-berry";
    case CDMethod::local_variational: return "local-var";
    case CDMethod::nested_commutator: return "nc:" + std::to_string(s.order);
  }
  return "unknown";
}

/// Accepts none, berry, local-berry, local-var and nc:<l>.
inline CDSelection parse_cd_method(const std::string& name) {
  if (name == "none") return {CDMethod::none, 0};
  if (name == "berry") return {CDMethod::berry_exact, 0};
  if (name == "local-berry") return {CDMethod::local_berry, 0};
  if (name == "local-var") return {CDMethod::local_variational, 0};
  if (name.rfind("nc:", 0) == 0) {
    const auto order = parse_number(std::string_view(name).substr(3));
    if (!order || *order < 1 || *order > 8 || *order != std::floor(*order)) {
      throw ConfigError("nested-commutator order must be an integer in [1, 8]: \"" + name + "\"");
    }
    return {CDMethod::nested_commutator, static_cast<int>(*order)};
  }
  throw ConfigError("unknown CD method \"" + name +
                    "\" (expected none, berry, local-berry, local-var or nc:<l>)");
}

/// A rule producing the CD Hamiltonian at (lambda, lambda_dot).
class CDTerm {
 public:
  /// Returns the gauge potential A(lambda); the term scales it by lambda_dot.
  using GaugeFn = std::function<PauliSum(double lambda)>;

  CDTerm(CDSelection selection, std::size_t n_qubits, GaugeFn gauge)
      : selection_(selection), n_(n_qubits), gauge_(std::move(gauge)) {}

  const CDSelection& selection() const noexcept { return selection_; }
  CDMethod method() const noexcept { return selection_.method; }
  int order() const noexcept { return selection_.order; }
  std::size_t n_qubits() const noexcept { return n_; }
  std::string name() const { return to_string(selection_); }

  /// Approximate gauge potential at lambda (no lambda_dot factor).
  PauliSum gauge_potential(double lambda) const { return gauge_(lambda); }

  /// lambda_dot * A(lambda); exactly empty when lambda_dot is zero.
  PauliSum evaluate(double lambda, double lambda_dot) const {
    if (lambda_dot == 0.0) return PauliSum(n_);
    return gauge_(lambda) * lambda_dot;
  }

 private:
  CDSelection selection_;
  std::size_t n_;
  GaugeFn gauge_;
};

/// Gauge potential of a spin-1/2 in a field h: (h x dh) . sigma / 2|h|^2,
/// with dh the derivative of h along the path. Zero field gives zero.
inline PauliSum berry_field_term(const std::array<double, 3>& h, const std::array<double, 3>& dh) {
  const double norm2 = h[0] * h[0] + h[1] * h[1] + h[2] * h[2];
  PauliSum out(1);
  if (norm2 == 0.0) return out;
  const std::array<double, 3> cross{h[1] * dh[2] - h[2] * dh[1], h[2] * dh[0] - h[0] * dh[2],
                                    h[0] * dh[1] - h[1] * dh[0]};
  out.add(PauliString::from_letters("X"), cross[0] / (2.0 * norm2));
  out.add(PauliString::from_letters("Y"), cross[1] / (2.0 * norm2));
  out.add(PauliString::from_letters("Z"), cross[2] / (2.0 * norm2));
  return out;
}

namespace detail {

/// Y-coefficient of the single-spin gauge potential for the field
/// (h_x (1 - lambda), 0, h_z lambda).
inline double single_spin_gauge(double h_x, double h_z, double lambda) {
  const double a = h_x * (1.0 - lambda);
  const double b = h_z * lambda;
  const double denom = 2.0 * (a * a + b * b);
  if (h_x * h_z == 0.0 || denom == 0.0) return 0.0;
  return -h_x * h_z / denom;
}

inline PauliSum site_y_sum(std::size_t n, const std::vector<double>& coeffs) {
  PauliSum out(n);
  for (std::size_t j = 0; j < n; ++j) out.add(PauliString::single(n, j, Pauli::Y), coeffs[j]);
  return out;
}

}  // namespace detail

/// Exact transitionless driver for build_single_spin problems.
inline CDTerm berry_exact_single(double h_x, double h_z) {
  if (h_x == 0.0 && h_z == 0.0) throw DomainError("berry driver needs a nonzero field");
  return CDTerm({CDMethod::berry_exact, 0}, 1, [h_x, h_z](double lambda) {
    return detail::site_y_sum(1, {detail::single_spin_gauge(h_x, h_z, lambda)});
  });
}

/// Per-site single-spin formula with the mean-field shifted longitudinal
/// field h_z^j + J0.
inline CDTerm local_berry(const SpinChainSpec& chain) {
  chain.validate();
  return CDTerm({CDMethod::local_berry, 0}, chain.n, [chain](double lambda) {
    std::vector<double> c(chain.n);
    for (std::size_t j = 0; j < chain.n; ++j) {
      c[j] = detail::single_spin_gauge(chain.h_x, chain.h_z[j] + chain.j0, lambda);
    }
    return detail::site_y_sum(chain.n, c);
  });
}

/// Coefficient of Y_j minimizing the action for the ansatz sum_j a_j Y_j.
/// A site with c bonds contributes c J0^2 to the longitudinal weight.
inline double local_variational_coefficient(double h_x, double h_z, double j0,
                                            std::size_t coordination, double lambda) {
  const double a = h_x * (1.0 - lambda);
  const double denom =
      2.0 * (a * a + (h_z * h_z + static_cast<double>(coordination) * j0 * j0) * lambda * lambda);
  if (h_x * h_z == 0.0 || denom == 0.0) return 0.0;
  return -h_x * h_z / denom;
}

inline CDTerm local_variational(const SpinChainSpec& chain) {
  chain.validate();
  std::vector<std::size_t> coordination(chain.n);
  for (std::size_t j = 0; j < chain.n; ++j) coordination[j] = chain.coordination(j);
  return CDTerm({CDMethod::local_variational, 0}, chain.n, [chain, coordination](double lambda) {
    std::vector<double> c(chain.n);
    for (std::size_t j = 0; j < chain.n; ++j) {
      c[j] = local_variational_coefficient(chain.h_x, chain.h_z[j], chain.j0, coordination[j], lambda);
    }
    return detail::site_y_sum(chain.n, c);
  });
}

struct VariationalSolveRecord {
  double lambda = 0.0;
  Eigen::MatrixXd gram;   // Re<C_2k, C_2m> / 2^N
  Eigen::VectorXd rhs;    // -Re<C_2k, dH> / 2^N
  Eigen::VectorXd alpha;  // minimum-norm minimizer
  double action = 0.0;    // Tr[G^2] at alpha
  Eigen::Index rank = 0;
  bool singular = false;
};

struct VariationalAnsatz {
  double lambda = 0.0;
  std::vector<double> alpha;
  std::vector<PauliSum> odd_commutators;  // C_1, C_3, ..., C_{2l-1}
  PauliSum gauge;                         // i sum_k alpha_k C_{2k-1}
  VariationalSolveRecord record;
};

/// Action Tr[G^2] with G = dH + i[A, H].
inline double action_value(const PauliSum& h, const PauliSum& dh, const PauliSum& gauge) {
  const PauliSum g = dh + Complex(0.0, 1.0) * commutator(gauge, h);
  return trace_inner_product(g, g).real();
}

/// Minimizes the action over the order-`order` nested-commutator ansatz at
/// a single lambda.
inline VariationalAnsatz variational_nc(const PauliSum& h_i, const PauliSum& h_f, int order,
                                        double lambda) {
  if (order < 1) throw DomainError("nested-commutator order must be >= 1");
  if (!(lambda >= -1e-12 && lambda <= 1.0 + 1e-12)) {
    throw DomainError("lambda must lie in [0, 1], got " + format_number(lambda));
  }
  const PauliSum h = h_i * (1.0 - lambda) + h_f * lambda;
  const PauliSum dh = h_f - h_i;

  std::vector<PauliSum> c{dh};
  for (int d = 1; d <= 2 * order; ++d) c.push_back(commutator(h, c.back()));

  const auto l = static_cast<Eigen::Index>(order);
  VariationalAnsatz out;
  out.lambda = lambda;
  auto& rec = out.record;
  rec.lambda = lambda;
  rec.gram.resize(l, l);
  rec.rhs.resize(l);
  for (Eigen::Index k = 0; k < l; ++k) {
    const PauliSum& ck = c[static_cast<std::size_t>(2 * (k + 1))];
    for (Eigen::Index m = 0; m < l; ++m) {
      rec.gram(k, m) =
          normalized_trace_inner_product(ck, c[static_cast<std::size_t>(2 * (m + 1))]).real();
    }
    rec.rhs(k) = -normalized_trace_inner_product(ck, dh).real();
  }

  // Pseudo-inverse through the symmetric eigendecomposition.
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(rec.gram);
  const Eigen::VectorXd& w = eig.eigenvalues();
  const double w_max = w.cwiseAbs().maxCoeff();
  const double cutoff = 1e-12 * std::max(w_max, 1e-300);
  Eigen::VectorXd proj = eig.eigenvectors().transpose() * rec.rhs;
  for (Eigen::Index i = 0; i < l; ++i) {
    if (w(i) > cutoff) {
      proj(i) /= w(i);
      ++rec.rank;
    } else {
      proj(i) = 0.0;
    }
  }
  rec.alpha = eig.eigenvectors() * proj;
  rec.singular = rec.rank < l;

  out.gauge = PauliSum(h.n_qubits());
  for (Eigen::Index k = 0; k < l; ++k) {
    const PauliSum& odd = c[static_cast<std::size_t>(2 * k + 1)];
    out.alpha.push_back(rec.alpha(k));
    out.odd_commutators.push_back(odd);
    out.gauge += odd * Complex(0.0, rec.alpha(k));
  }
  rec.action = action_value(h, dh, out.gauge);
  return out;
}

inline VariationalAnsatz variational_nc(const AnnealingProblem& p, int order, double lambda) {
  return variational_nc(p.h_i, p.h_f, order, lambda);
}

inline CDTerm nc_cd_term(const AnnealingProblem& p, int order) {
  if (order < 1) throw DomainError("nested-commutator order must be >= 1");
  return CDTerm({CDMethod::nested_commutator, order}, p.n_qubits(),
                [h_i = p.h_i, h_f = p.h_f, order](double lambda) {
                  return variational_nc(h_i, h_f, order, lambda).gauge;
                });
}

/// Builds the driver named by `selection`, or nothing for CDMethod::none.
inline std::optional<CDTerm> make_cd_term(const AnnealingProblem& p, const CDSelection& selection) {
  switch (selection.method) {
    case CDMethod::none: return std::nullopt;
    case CDMethod::berry_exact:
      if (p.n_qubits() != 1) {
        throw ConfigError("the exact berry driver applies to single-spin problems only");
      }
      return berry_exact_single(p.chain.h_x, p.chain.h_z[0]);
    case CDMethod::local_berry: return local_berry(p.chain);
    case CDMethod::local_variational: return local_variational(p.chain);
    case CDMethod::nested_commutator: return nc_cd_term(p, selection.order);
  }
  return std::nullopt;
}

struct GaugeOracleResult {
  DenseMatrix gauge;
  std::size_t degenerate_pairs = 0;  // off-diagonal pairs zeroed for a vanishing gap
};

/// Exact gauge potential <m|A|n> = i <m|dH|n> / (E_n - E_m) in the eigenbasis of H(lambda).
inline GaugeOracleResult exact_gauge_oracle(const PauliSum& h_i, const PauliSum& h_f, double lambda,
                                            double gap_tol = 1e-9) {
  if (h_i.n_qubits() > 8) throw DimensionError("exact gauge oracle is limited to 8 qubits");
  const DenseMatrix h = to_dense(h_i * (1.0 - lambda) + h_f * lambda);
  const DenseMatrix dh = to_dense(h_f - h_i);
  const Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(h);
  if (eig.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");
  const DenseMatrix& v = eig.eigenvectors();
  const Eigen::VectorXd& e = eig.eigenvalues();
  const DenseMatrix dh_eig = v.adjoint() * dh * v;
  DenseMatrix a = DenseMatrix::Zero(h.rows(), h.cols());
  GaugeOracleResult out;
  for (Eigen::Index m = 0; m < h.rows(); ++m) {
    for (Eigen::Index n = 0; n < h.cols(); ++n) {
      if (m == n) continue;
      const double gap = e(n) - e(m);
      if (std::abs(gap) < gap_tol) {
        if (m < n && std::abs(dh_eig(m, n)) > gap_tol) ++out.degenerate_pairs;
        continue;
      }
      a(m, n) = Complex(0.0, 1.0) * dh_eig(m, n) / gap;
    }
  }
  out.gauge = v * a * v.adjoint();
  return out;
}

inline GaugeOracleResult exact_gauge_oracle(const AnnealingProblem& p, double lambda) {
  return exact_gauge_oracle(p.h_i, p.h_f, lambda);
}

/// CSV with columns lambda, alpha_1..alpha_l, action_residual.
inline void write_solve_records_csv(std::ostream& os, const std::vector<VariationalSolveRecord>& rows) {
  const Eigen::Index l = rows.empty() ? 0 : rows.front().alpha.size();
  os << "lambda";
  for (Eigen::Index k = 1; k <= l; ++k) os << ",alpha_" << k;
  os << ",action_residual\n";
  for (const auto& r : rows) {
    os << format_number(r.lambda);
    for (Eigen::Index k = 0; k < r.alpha.size(); ++k) os << ',' << format_number(r.alpha(k));
    os << ',' << format_number(r.action) << '\n';
  }
}

}  // namespace cdsim
