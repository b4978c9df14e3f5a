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

#include "jcsim/model.hpp"
#include "oracles.hpp"

namespace jcsim {
namespace {

TEST(Basis, SectorSizes) {
  EXPECT_EQ(enumerate_basis(2, 1).size(), 4);
  EXPECT_EQ(enumerate_basis(3, 1).size(), 6);
  EXPECT_EQ(enumerate_basis(2, 2).size(), 8);
  EXPECT_EQ(enumerate_basis(2, 0).size(), 1);
  EXPECT_EQ(enumerate_basis(3, 2).size(), 18);
}

TEST(Basis, OrderingMatchesListings) {
  const Basis b = enumerate_basis(2, 2);
  const std::vector<std::string> expected = {"|2,g>|0,g>", "|1,e>|0,g>", "|0,g>|2,g>", "|0,g>|1,e>",
                                             "|1,g>|1,g>", "|0,e>|1,g>", "|1,g>|0,e>", "|0,e>|0,e>"};
  for (int i = 0; i < b.size(); ++i) EXPECT_EQ(to_string(b[i]), expected[i]) << i;
  EXPECT_EQ(to_string(enumerate_basis(3, 1)[4]), "|0,g>|0,g>|1,g>");
}

TEST(Basis, IndexRoundTrip) {
  const Basis b = enumerate_basis(3, 2);
  for (int i = 0; i < b.size(); ++i) {
    EXPECT_EQ(b.index_of(b[i]), i);
    EXPECT_EQ(excitations(b[i]), 2);
  }
  EXPECT_FALSE(b.index_of(enumerate_basis(3, 1)[0]).has_value());
}

TEST(Basis, DirectSumBlocks) {
  const Basis b = Basis::direct_sum(2, {2, 1, 0});
  ASSERT_EQ(b.blocks().size(), 3u);
  EXPECT_EQ(b.size(), 13);
  EXPECT_EQ(b.blocks()[1].offset, 8);
  EXPECT_FALSE(b.n_excitations().has_value());
  EXPECT_THROW(Basis::direct_sum(2, {1, 1}), InvalidArgument);
}

class PrintedHamiltonian : public ::testing::Test {
 protected:
  std::mt19937_64 rng{11};
  std::uniform_real_distribution<double> u{-2.0, 2.0};
};

TEST_F(PrintedHamiltonian, TwoSitesOneExcitation) {
  const Basis b = enumerate_basis(2, 1);
  for (int i = 0; i < 20; ++i) {
    const double g = u(rng), J = u(rng), d = u(rng);
    EXPECT_LT(max_abs(build_hamiltonian({2, g, J, d}, b).matrix - oracle::hr_2s1e(g, J, d)), 1e-15);
  }
}

TEST_F(PrintedHamiltonian, ThreeSitesOneExcitation) {
  const Basis b = enumerate_basis(3, 1);
  for (int i = 0; i < 20; ++i) {
    const double g = u(rng), J = u(rng), d = u(rng);
    EXPECT_LT(max_abs(build_hamiltonian({3, g, J, d}, b).matrix - oracle::hr_3s1e(g, J, d)), 1e-15);
  }
}

TEST_F(PrintedHamiltonian, TwoSitesTwoExcitations) {
  const Basis b = enumerate_basis(2, 2);
  for (int i = 0; i < 20; ++i) {
    const double g = u(rng), J = u(rng), d = u(rng);
    EXPECT_LT(max_abs(build_hamiltonian({2, g, J, d}, b).matrix - oracle::hr_2s2e(g, J, d)), 1e-14);
  }
}

TEST(Hamiltonian, BoundaryConditions) {
  const Basis b2 = enumerate_basis(2, 1);
  EXPECT_EQ(hopping_operator(b2, Boundary::open), hopping_operator(b2, Boundary::periodic));
  const Basis b3 = enumerate_basis(3, 1);
  const Matrix diff = hopping_operator(b3, Boundary::periodic) - hopping_operator(b3, Boundary::open);
  // The extra link couples the photon on site 1 with the photon on site 3.
  EXPECT_EQ(diff(0, 4), Complex(-1.0));
  EXPECT_NEAR(diff.cwiseAbs().sum(), 2.0, 1e-15);
}

TEST(Hamiltonian, SiteMismatchThrows) {
  EXPECT_THROW(build_hamiltonian({3, 1, 1, 1}, enumerate_basis(2, 1)), InvalidArgument);
}

TEST(Hamiltonian, MirrorSymmetry) {
  for (int n : {2, 3, 4}) {
    for (int k : {1, 2}) {
      const Basis b = enumerate_basis(n, k);
      const Matrix h = build_hamiltonian({n, 0.7, 1.3, 0.4}, b).matrix;
      const Matrix p = reflection_permutation(b);
      EXPECT_LT(max_abs(p * h - h * p), 1e-14) << n << " " << k;
      EXPECT_LT(max_abs(p * p - Matrix::Identity(b.size(), b.size())), 1e-15);
    }
  }
}

TEST(Operators, NumberFromLadders) {
  const Basis b = enumerate_basis(3, 2);
  for (int j = 0; j < 3; ++j) {
    const Matrix n = build_operator({{OpKind::a_dagger, j}, {OpKind::a, j}}, b);
    EXPECT_LT(max_abs(n - build_operator(OpKind::number, j, b)), 1e-15);
  }
  Matrix total = Matrix::Zero(b.size(), b.size());
  for (int j = 0; j < 3; ++j) total += build_operator(OpKind::number, j, b);
  EXPECT_LT(max_abs(total - photon_number(b)), 1e-15);
  EXPECT_LT(max_abs(excitation_number(b) - 2.0 * Matrix::Identity(b.size(), b.size())), 1e-15);
}

TEST(Operators, LadderMapBetweenSectors) {
  const Basis b = enumerate_basis(2, 2);
  const SectorMap down = ladder_map(OpKind::a, 0, b);
  EXPECT_EQ(down.rows.size(), 4);
  // a |2,g>|0,g> = sqrt(2) |1,g>|0,g>
  EXPECT_NEAR(down.matrix(0, 0).real(), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(ladder_map(OpKind::a, 0, enumerate_basis(2, 0)).matrix.rows(), 0);
  EXPECT_THROW(ladder_map(OpKind::sigma_x, 0, b), InvalidArgument);
}

TEST(Operators, CouplingIsHermitianJcExchange) {
  const Basis b = enumerate_basis(2, 2);
  const Matrix vg = coupling_operator(b);
  EXPECT_LT(hermiticity_defect(vg), 1e-15);
  // <1,e|V_g|2,g> = sqrt(2) on site 1.
  EXPECT_NEAR(vg(1, 0).real(), std::sqrt(2.0), 1e-15);
}

}  // namespace
}  // namespace jcsim
