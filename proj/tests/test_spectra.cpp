// Copyright 2026 The jcsim Authors
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

#include <random>

#include "jcsim/spectra.hpp"
#include "oracles.hpp"

namespace jcsim {
namespace {

std::vector<double> dense_energies(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

TEST(ClosedForm, RejectsNegativeCoupling) {
  EXPECT_THROW(analytic_spectrum_2s1e(-0.5, 1.0, 1.0), InvalidArgument);
}

TEST(ClosedForm, TwoSiteEnergiesAndVectors) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    const double g = u(rng), J = u(rng), d = u(rng);
    const auto a = analytic_spectrum_2s1e(g, J, d);
    const auto e = oracle::energies_2s1e(g, J, d);
    const oracle::M v = oracle::vectors_2s1e(g, J, d);
    const oracle::M h = oracle::hr_2s1e(g, J, d);
    for (int k = 0; k < 4; ++k) {
      EXPECT_NEAR(a.energies[k], e[k], 1e-12);
      EXPECT_NEAR(std::abs(v.col(k).dot(a.states[k])), 1.0, 1e-12);
      EXPECT_LT((h * a.states[k] - a.energies[k] * a.states[k]).norm(), 1e-12);
    }
    auto sorted = dense_energies(h);
    std::array<double, 4> ours = a.energies;
    std::sort(ours.begin(), ours.end());
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(ours[k], sorted[k], 1e-12);
  }
}

TEST(ClosedForm, StableWhenGIsTiny) {
  const auto a = analytic_spectrum_2s1e(1e-9, 0.5, 1.0);
  for (const auto& v : a.states) EXPECT_NEAR(v.norm(), 1.0, 1e-14);
}

TEST(ClosedForm, UndefinedAtZeroChi) {
  EXPECT_THROW(analytic_spectrum_2s1e(0.0, 1.0, 1.0), DegenerateFormulaError);
}

TEST(ClosedForm, TwoExcitationEnergies) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 3.0);
  const Basis b = enumerate_basis(2, 2);
  for (int i = 0; i < 200; ++i) {
    const double g = u(rng), J = u(rng);
    const auto printed = oracle::energies_2s2e(g, J);
    const auto ours = analytic_spectrum_2s2e(g, J);
    const Spectrum s = labeled_eigenstates(build_hamiltonian({2, g, J, 0.0}, b));
    for (int k = 0; k < 8; ++k) {
      EXPECT_NEAR(ours[k], printed[k], 1e-12);
      EXPECT_NEAR(s.energies(k), printed[k], 1e-10) << "v" << k + 1;
    }
  }
}

TEST(Labels, TwoSiteParities) {
  const Spectrum s = labeled_eigenstates(build_hamiltonian({2, 1.0, 0.8, 1.0}, enumerate_basis(2, 1)));
  EXPECT_EQ(s.parities[0], Parity::symmetric);
  EXPECT_EQ(s.parities[1], Parity::symmetric);
  EXPECT_EQ(s.parities[2], Parity::antisymmetric);
  EXPECT_EQ(s.parities[3], Parity::antisymmetric);
  const auto a = analytic_spectrum_2s1e(1.0, 0.8, 1.0);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(s.state(k).dot(a.states[k])), 1.0, 1e-12);
}

TEST(Labels, TwoExcitationSubsets) {
  const Spectrum s = labeled_eigenstates(build_hamiltonian({2, 1.0, 0.6, 0.0}, enumerate_basis(2, 2)));
  for (int k : {1, 2, 3}) EXPECT_EQ(s.parities[k], Parity::antisymmetric) << k;
  for (int k : {0, 4, 5, 6, 7}) EXPECT_EQ(s.parities[k], Parity::symmetric) << k;
  EXPECT_EQ(std::min_element(s.energies.data(), s.energies.data() + 8) - s.energies.data(), 6);
}

TEST(Degeneracy, E1EqualsE3AtZeroHopping) {
  const Basis b = enumerate_basis(2, 1);
  for (double g : {0.1, 0.5, 1.0, 2.0}) {
    for (double d : {-1.0, 0.0, 0.3, 1.0, 2.5}) {
      const auto a = analytic_spectrum_2s1e(g, 0.0, d);
      EXPECT_LT(std::abs(a.energies[0] - a.energies[2]), 1e-12);
      EXPECT_LT(std::abs(a.energies[1] - a.energies[3]), 1e-12);
      const Spectrum s = labeled_eigenstates(build_hamiltonian({2, g, 0.0, d}, b));
      EXPECT_LT(std::abs(s.energies(0) - s.energies(2)), 1e-12);
      EXPECT_EQ(s.parities[0], Parity::symmetric);
    }
  }
}

TEST(Symmetric, DefiniteParityInsideDegenerateSubspace) {
  const Basis b = enumerate_basis(2, 1);
  const Spectrum s = eigendecompose_symmetric(build_hamiltonian({2, 1.0, 0.0, 1.0}, b), reflection_permutation(b));
  for (int k = 0; k < 4; ++k) EXPECT_NE(s.parities[k], Parity::none);
  EXPECT_EQ(s.parities[0], Parity::symmetric);  // symmetric first in exact ties
}

TEST(Symmetric, RejectsNonCommutingPermutation) {
  const Basis b = enumerate_basis(2, 1);
  Matrix p = Matrix::Identity(4, 4);
  p.row(0).swap(p.row(1));
  EXPECT_THROW(eigendecompose_symmetric(build_hamiltonian({2, 1, 1, 1}, b), p), InvalidArgument);
}

TEST(Hermiticity, NonHermitianRejected) {
  Matrix h = Matrix::Zero(2, 2);
  h(0, 1) = 1.0;
  EXPECT_THROW(eigendecompose({enumerate_basis(1, 1), h}), InvalidArgument);
}

TEST(Gauge, FirstLargeAmplitudeRealPositive) {
  const Spectrum s = eigendecompose(build_hamiltonian({2, 0.9, 0.4, 0.2}, enumerate_basis(2, 1)));
  for (int k = 0; k < s.size(); ++k) {
    for (int r = 0; r < 4; ++r) {
      if (std::abs(s.states(r, k)) > kGaugeThreshold) {
        EXPECT_GT(s.states(r, k).real(), 0.0);
        EXPECT_EQ(s.states(r, k).imag(), 0.0);
        break;
      }
    }
  }
}

TEST(Tracking, FollowsLabelsAndPhases) {
  const Basis b = enumerate_basis(2, 1);
  const Spectrum a = labeled_eigenstates(build_hamiltonian({2, 1.0, 0.5, 1.0}, b));
  Spectrum shuffled = eigendecompose(build_hamiltonian({2, 1.0, 0.5001, 1.0}, b));
  shuffled.states.col(1) *= Complex(0.0, 1.0);
  const Spectrum t = track_states(a, shuffled);
  EXPECT_FALSE(t.ambiguous);
  for (int k = 0; k < 4; ++k) {
    const Complex o = a.state(k).dot(t.state(k));
    EXPECT_GT(o.real(), 0.999);
    EXPECT_NEAR(o.imag(), 0.0, 1e-12);
  }
}

TEST(Tracking, FlagsTies) {
  const Basis b = enumerate_basis(1, 1);
  Matrix h = Matrix::Zero(2, 2);
  const Spectrum a = eigendecompose({b, h});
  Spectrum rotated = a;
  rotated.states = a.states * (Matrix(2, 2) << 1, 1, 1, -1).finished() / std::sqrt(2.0);
  EXPECT_TRUE(track_states(a, rotated).ambiguous);
}

TEST(Degeneracy, ResolvedAlongDirection) {
  // Degenerate symmetric pair at g = 0 for Delta = J; the ramp direction V_g
  // picks the lower polariton combination.
  const Basis b = enumerate_basis(2, 1);
  const Spectrum s = labeled_eigenstates(build_hamiltonian({2, 0.0, 2.0, 2.0}, b), coupling_operator(b));
  Vector expected(4);
  const double r = 0.5;
  expected << r, -r, r, -r;  // (|1,->|0,g> + |0,g>|1,->)/sqrt2 with |1,-> = (|1,g> - |0,e>)/sqrt2
  EXPECT_NEAR(std::abs(s.state(0).dot(expected)), 1.0, 1e-12);
}

}  // namespace
}  // namespace jcsim
