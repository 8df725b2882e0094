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

#include <cmath>
#include <numbers>

#include "cdsim/models.hpp"
#include "oracle.hpp"

using namespace cdsim;

namespace {

// Dense check that psi is an eigenvector at the bottom of h's spectrum.
void expect_ground(const PauliSum& h, const StateVector& psi) {
  const auto m = oracle::dense(h);
  Eigen::SelfAdjointEigenSolver<oracle::Mat> eig(m);
  const double e0 = eig.eigenvalues()(0);
  const Eigen::VectorXcd v = psi.amplitudes();
  EXPECT_LT((m * v - e0 * v).norm(), 1e-10);
}

}  // namespace

TEST(Schedule, Endpoints) {
  const Sin2Schedule s(1.0);
  EXPECT_EQ(s.lambda(0.0), 0.0);
  EXPECT_EQ(s.lambda(1.0), 1.0);
  EXPECT_EQ(Sin2Schedule(2.0).lambda_dot(0.0), 0.0);
  EXPECT_EQ(Sin2Schedule(2.0).lambda_dot(2.0), 0.0);
}

TEST(Schedule, Midpoint) {
  const Sin2Schedule s(1.0);
  EXPECT_NEAR(s.lambda(0.5), 0.5, 1e-15);
  EXPECT_NEAR(s.lambda_dot(0.5), std::numbers::pi / 2, 1e-14);
}

TEST(Schedule, RejectsNonPositiveTime) {
  EXPECT_THROW(Sin2Schedule(0.0), DomainError);
  EXPECT_THROW(Sin2Schedule(-1.0), DomainError);
}

TEST(Schedule, DerivativeMatchesCenteredDifference) {
  for (double total : {0.03, 1.0, 7.5}) {
    const Sin2Schedule s(total);
    const double h = 1e-6 * total;
    for (int k = 1; k < 20; ++k) {
      const double t = total * k / 20.0;
      const double fd = (s.lambda(t + h) - s.lambda(t - h)) / (2 * h);
      EXPECT_NEAR(s.lambda_dot(t), fd, 1e-6 * std::max(1.0, s.omega()));
    }
  }
}

TEST(SingleSpin, GroundStates) {
  const auto p = build_single_spin(-1.0, 1.0, 1.0, 0.1);
  EXPECT_EQ(p.initial_state.amplitudes(), StateVector::plus(1).amplitudes());
  EXPECT_EQ(p.target_state.amplitudes(), StateVector::from_label("1").amplitudes());
  const auto q = build_single_spin(-1.0, -1.0, 1.0, 0.1);
  EXPECT_EQ(q.target_state.amplitudes(), StateVector::from_label("0").amplitudes());
  expect_ground(p.h_i, p.initial_state);
  expect_ground(p.h_f, p.target_state);
}

TEST(SingleSpin, Interpolation) {
  const auto p = build_single_spin(-1.0, 1.0, 1.0, 0.1);
  EXPECT_EQ(interpolate(p, 0.5), PauliSum(1, {{"X", -0.5}, {"Z", 0.5}}));
  EXPECT_EQ(interpolate(p, 0.25), PauliSum(1, {{"X", -0.75}, {"Z", 0.25}}));
  EXPECT_EQ(interpolate(p, 0.0), p.h_i);
  EXPECT_EQ(interpolate(p, 1.0), p.h_f);
  EXPECT_THROW(interpolate(p, 1.5), DomainError);
  EXPECT_THROW(interpolate(p, -0.1), DomainError);
}

TEST(SingleSpin, RejectsZeroFields) {
  EXPECT_THROW(build_single_spin(0.0, 1.0, 1.0, 0.1), DomainError);
  EXPECT_THROW(build_single_spin(-1.0, 0.0, 1.0, 0.1), DomainError);
}

TEST(Problem, StepCountMustBeInteger) {
  EXPECT_EQ(build_single_spin(-1.0, 1.0, 0.3, 0.1).steps(), 3U);
  EXPECT_THROW(build_single_spin(-1.0, 1.0, 1.0, 0.3), DomainError);
}

TEST(IsingChain, TwoSpinExample) {
  const auto p = build_ising_chain({2, -1.0, {1.0, 1.0}, -0.1, Boundary::open}, 1.0, 0.1);
  EXPECT_EQ(p.h_f, PauliSum(2, {{"ZI", 1.0}, {"IZ", 1.0}, {"ZZ", -0.1}}));
  EXPECT_EQ(p.h_i, PauliSum(2, {{"XI", -1.0}, {"IX", -1.0}}));
  EXPECT_EQ(p.target_state.amplitudes(), StateVector::from_label("11").amplitudes());
  expect_ground(p.h_f, p.target_state);
  expect_ground(p.h_i, p.initial_state);
}

TEST(IsingChain, DegenerateManifold) {
  const auto p = build_ising_chain({2, -1.0, {0.6, 0.6}, 2.0, Boundary::open}, 1.0, 0.1);
  EXPECT_EQ(p.target_support, (std::vector<std::uint64_t>{1, 2}));
  EXPECT_EQ(ground_eigenspace(p.h_f).cols(), 2);
  expect_ground(p.h_f, p.target_state);
  EXPECT_NEAR(ground_manifold_overlap(p.h_f, StateVector::from_label("01")), 1.0, 1e-12);
  EXPECT_NEAR(ground_manifold_overlap(p.h_f, StateVector::from_label("11")), 0.0, 1e-12);
}

TEST(IsingChain, DecoupledThreeSpins) {
  const auto p = build_ising_chain({3, -1.0, {1.0, 1.0, 1.0}, 0.0, Boundary::open}, 1.0, 0.1);
  EXPECT_EQ(p.target_support, (std::vector<std::uint64_t>{7}));
  EXPECT_EQ(ground_eigenspace(p.h_f).cols(), 1);
}

TEST(IsingChain, Errors) {
  EXPECT_THROW(build_ising_chain({1, -1.0, {1.0}, 0.0, Boundary::open}, 1.0, 0.1), DomainError);
  EXPECT_THROW(build_ising_chain({3, -1.0, {1.0, 1.0}, 0.0, Boundary::open}, 1.0, 0.1), DimensionError);
}

TEST(IsingChain, BoundaryControlsBondCount) {
  SpinChainSpec chain{4, -1.0, {1, 1, 1, 1}, 0.5, Boundary::open};
  EXPECT_EQ(chain.bonds().size(), 3U);
  EXPECT_EQ(chain.coordination(0), 1U);
  EXPECT_EQ(chain.coordination(1), 2U);
  chain.boundary = Boundary::periodic;
  EXPECT_EQ(chain.bonds().size(), 4U);
  EXPECT_EQ(chain.coordination(0), 2U);
  const auto p = build_ising_chain(chain, 1.0, 0.5);
  EXPECT_EQ(p.h_f.coefficient("ZIIZ"), Complex(0.5, 0));
}

TEST(ZZChain, BellAndGhzTargets) {
  const auto bell = build_zz_chain(2, -1.0, -1.0, 1.0, 0.1);
  EXPECT_LT((bell.target_state.amplitudes() - StateVector::ghz(2).amplitudes()).norm(), 1e-15);
  EXPECT_EQ(bell.initial_state.amplitudes(), StateVector::plus(2).amplitudes());
  const auto ghz = build_zz_chain(3, -1.0, -1.0, 1.0, 0.1);
  EXPECT_LT((ghz.target_state.amplitudes() - StateVector::ghz(3).amplitudes()).norm(), 1e-15);
  EXPECT_EQ(ghz.h_f, PauliSum(3, {{"ZZI", -1.0}, {"IZZ", -1.0}, {"ZIZ", -1.0}}));
  expect_ground(ghz.h_f, ghz.target_state);
}

TEST(ZZChain, TwoSiteRingDeduplicatesAndWarns) {
  const auto p = build_zz_chain(2, -1.0, -1.0, 1.0, 0.1, Boundary::periodic);
  EXPECT_EQ(p.h_f, PauliSum(2, {{"ZZ", -1.0}}));
  EXPECT_EQ(p.warnings.size(), 1U);
  EXPECT_TRUE(build_zz_chain(2, -1.0, -1.0, 1.0, 0.1, Boundary::open).warnings.empty());
  EXPECT_THROW(build_zz_chain(1, -1.0, -1.0, 1.0, 0.1), DomainError);
}

TEST(Problem, EndpointStatesAreGroundStatesUpToTenSpins) {
  for (std::size_t n = 2; n <= 10; ++n) {
    std::vector<double> hz(n);
    for (std::size_t j = 0; j < n; ++j) hz[j] = 0.5 + 0.1 * static_cast<double>(j);
    const auto ising = build_ising_chain({n, -1.0, hz, -0.3, Boundary::open}, 1.0, 0.5);
    EXPECT_TRUE(in_ground_eigenspace(ising.h_i, ising.initial_state)) << n;
    EXPECT_TRUE(in_ground_eigenspace(ising.h_f, ising.target_state)) << n;
    const auto zz = build_zz_chain(n, 0.7, -1.0, 1.0, 0.5);
    EXPECT_TRUE(in_ground_eigenspace(zz.h_i, zz.initial_state)) << n;
    EXPECT_TRUE(in_ground_eigenspace(zz.h_f, zz.target_state)) << n;
    EXPECT_TRUE(zz.h_i.is_hermitian() && zz.h_f.is_hermitian());
  }
}

TEST(Problem, InterpolationIsAffineAndDerivativeConstant) {
  const auto p = build_ising_chain({3, -0.8, {1.0, -0.4, 0.3}, 0.9, Boundary::periodic}, 1.0, 0.5);
  for (double lambda : {0.0, 0.2, 0.7, 1.0}) {
    const auto affine = p.h_i + lambda * (p.h_f - p.h_i);
    EXPECT_LT(oracle::max_diff(oracle::dense(interpolate(p, lambda)), oracle::dense(affine)), 1e-15);
    EXPECT_TRUE(interpolate(p, lambda).is_hermitian());
  }
  const double e = 1e-3;
  const auto fd = (1.0 / (2 * e)) * (interpolate(p, 0.5 + e) - interpolate(p, 0.5 - e));
  EXPECT_LT(oracle::max_diff(oracle::dense(fd), oracle::dense(p.dh())), 1e-12);
}

TEST(Problem, TargetOverride) {
  auto p = build_ising_chain({2, -1.0, {0.6, 0.6}, 2.0, Boundary::open}, 1.0, 0.1);
  p.set_target(StateVector::from_label("01"));
  EXPECT_EQ(p.target_support, (std::vector<std::uint64_t>{1}));
  EXPECT_THROW(p.set_target(StateVector::from_label("011")), DimensionError);
}
