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
 * Independent per-qubit readout errors, shot sampling and response-matrix
 * inversion.
 *
 * Sampling uses std::mt19937_64 with a fixed conversion to [0, 1): the top
 * 53 bits of each draw scaled by 2^-53. std::uniform_real_distribution is
 * avoided because its output is not specified across standard libraries.
 */

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "cdsim/error.hpp"
#include "cdsim/format.hpp"
#include "cdsim/state_vector.hpp"

namespace cdsim {

using Distribution = Eigen::VectorXd;
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from one generator draw.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct ReadoutModel {
  std::vector<double> p10;  // read 1 given a true 0
  std::vector<double> p01;  // read 0 given a true 1

  static ReadoutModel symmetric(std::size_t n_qubits, double p) {
    ReadoutModel m{std::vector<double>(n_qubits, p), std::vector<double>(n_qubits, p)};
    m.validate();
    return m;
  }

  std::size_t n_qubits() const noexcept { return p10.size(); }

  void validate() const {
    if (p10.size() != p01.size() || p10.empty()) {
      throw DimensionError("readout model needs matching nonempty p10 and p01 lists");
    }
    for (std::size_t q = 0; q < p10.size(); ++q) {
      for (double p : {p10[q], p01[q]}) {
        if (!(p >= 0.0 && p < 0.5)) {
          throw DomainError("readout error " + format_number(p) + " on qubit " + std::to_string(q) +
                            " is outside [0, 0.5)");
        }
      }
    }
  }
};

struct ResponseMatrix {
  std::size_t n_qubits = 0;
  Eigen::MatrixXd matrix;  // column j: readout distribution for true state j
};

/// Tensor product of per-qubit confusion matrices, qubit 0 as the leftmost factor.
inline ResponseMatrix build_response_matrix(const ReadoutModel& model) {
  model.validate();
  if (model.n_qubits() > 12) throw DimensionError("response matrix is limited to 12 qubits");
  Eigen::MatrixXd m = Eigen::MatrixXd::Ones(1, 1);
  for (std::size_t q = 0; q < model.n_qubits(); ++q) {
    Eigen::Matrix2d c;
    c << 1.0 - model.p10[q], model.p01[q], model.p10[q], 1.0 - model.p01[q];
    Eigen::MatrixXd next(m.rows() * 2, m.cols() * 2);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index k = 0; k < m.cols(); ++k) next.block(2 * r, 2 * k, 2, 2) = m(r, k) * c;
    }
    m = std::move(next);
  }
  return {model.n_qubits(), std::move(m)};
}

struct CountsHistogram {
  std::size_t n_qubits = 0;
  std::vector<std::uint64_t> counts;  // indexed by basis state
  std::uint64_t shots = 0;

  Distribution to_distribution() const {
    Distribution d(static_cast<Eigen::Index>(counts.size()));
    for (std::size_t i = 0; i < counts.size(); ++i) {
      d(static_cast<Eigen::Index>(i)) =
          shots == 0 ? 0.0 : static_cast<double>(counts[i]) / static_cast<double>(shots);
    }
    return d;
  }
};

namespace detail {

inline void check_distribution(const Distribution& p) {
  if (p.size() == 0 || !std::has_single_bit(static_cast<std::uint64_t>(p.size()))) {
    throw DimensionError("distribution length must be a power of two");
  }
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!(p(i) >= -1e-12) || !std::isfinite(p(i))) {
      throw DomainError("distribution has a negative or non-finite entry");
    }
  }
  if (std::abs(p.sum() - 1.0) > 1e-9) {
    throw DomainError("distribution sums to " + format_number(p.sum()) + ", expected 1");
  }
}

inline std::size_t qubits_of(const Distribution& p) {
  return static_cast<std::size_t>(std::countr_zero(static_cast<std::uint64_t>(p.size())));
}

}  // namespace detail

/// Draws `shots` true outcomes from probs, then flips each bit independently.
inline CountsHistogram sample_readout(const Distribution& probs, const ReadoutModel& model, Rng& rng,
                                      std::uint64_t shots) {
  detail::check_distribution(probs);
  model.validate();
  const std::size_t n = detail::qubits_of(probs);
  if (model.n_qubits() != n) throw DimensionError("readout model and distribution sizes differ");
  std::vector<double> cdf(static_cast<std::size_t>(probs.size()));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    acc += std::max(0.0, probs(i));
    cdf[static_cast<std::size_t>(i)] = acc;
  }
  CountsHistogram h{n, std::vector<std::uint64_t>(cdf.size(), 0), shots};
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = uniform01(rng) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::uint64_t outcome = static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(
        it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
    for (std::size_t q = 0; q < n; ++q) {
      const std::uint64_t b = std::uint64_t{1} << (n - 1 - q);
      const double flip = (outcome & b) ? model.p01[q] : model.p10[q];
      if (uniform01(rng) < flip) outcome ^= b;
    }
    ++h.counts[outcome];
  }
  return h;
}

inline CountsHistogram apply_readout_noise(const Distribution& probs, const ReadoutModel& model,
                                           std::uint64_t seed, std::uint64_t shots) {
  Rng rng(seed);
  return sample_readout(probs, model, rng, shots);
}

/// Infinite-shot readout distribution M_R p.
inline Distribution noisy_distribution(const Distribution& probs, const ResponseMatrix& m) {
  detail::check_distribution(probs);
  if (m.matrix.cols() != probs.size()) throw DimensionError("response matrix and distribution sizes differ");
  return m.matrix * probs;
}

/// Estimates M_R by preparing each basis state `shots` times.
inline ResponseMatrix calibrate_response_matrix(const ReadoutModel& model, std::uint64_t shots,
                                                std::uint64_t seed) {
  model.validate();
  const std::size_t n = model.n_qubits();
  if (n > 12) throw DimensionError("response matrix is limited to 12 qubits");
  if (shots == 0) throw DomainError("calibration needs at least one shot per state");
  const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n);
  Rng rng(seed);
  ResponseMatrix out{n, Eigen::MatrixXd::Zero(dim, dim)};
  for (Eigen::Index j = 0; j < dim; ++j) {
    Distribution delta = Distribution::Zero(dim);
    delta(j) = 1.0;
    out.matrix.col(j) = sample_readout(delta, model, rng, shots).to_distribution();
  }
  return out;
}

struct MitigationResult {
  Distribution inverted;   // M_R^-1 p_noisy, may hold negative entries
  Distribution mitigated;  // clipped at zero and renormalized
  double clipped_mass = 0.0;
};

inline MitigationResult mitigate(const Distribution& noisy, const ResponseMatrix& m) {
  if (m.matrix.rows() != noisy.size() || m.matrix.cols() != noisy.size()) {
    throw DimensionError("response matrix and distribution sizes differ");
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(m.matrix);
  if (!lu.isInvertible()) throw NumericalError("response matrix is singular");
  MitigationResult r;
  r.inverted = lu.solve(noisy);
  r.mitigated = r.inverted;
  for (Eigen::Index i = 0; i < r.mitigated.size(); ++i) {
    if (!std::isfinite(r.mitigated(i))) throw NumericalError("mitigation produced a non-finite value");
    if (r.mitigated(i) < 0.0) {
      r.clipped_mass -= r.mitigated(i);
      r.mitigated(i) = 0.0;
    }
  }
  const double total = r.mitigated.sum();
  if (total > 0.0) {
    r.mitigated /= total;
  } else {
    r.mitigated.setConstant(1.0 / static_cast<double>(r.mitigated.size()));
  }
  return r;
}

inline double total_variation(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) throw DimensionError("distribution sizes differ");
  return 0.5 * (p - q).cwiseAbs().sum();
}

inline void write_histogram_csv(std::ostream& os, const CountsHistogram& h) {
  os << "bitstring,count\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    os << StateVector::label_of(i, h.n_qubits) << ',' << h.counts[i] << '\n';
  }
}

inline void write_mitigation_csv(std::ostream& os, const Distribution& noisy, const MitigationResult& r) {
  os << "bitstring,p_noisy,p_inverted,p_mitigated\n";
  const std::size_t n = detail::qubits_of(noisy);
  for (Eigen::Index i = 0; i < noisy.size(); ++i) {
    os << StateVector::label_of(static_cast<std::uint64_t>(i), n) << ',' << format_number(noisy(i))
       << ',' << format_number(r.inverted(i)) << ',' << format_number(r.mitigated(i)) << '\n';
  }
}

}  // namespace cdsim
