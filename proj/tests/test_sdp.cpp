// Copyright 2026 The qmimo Authors
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

#include <qmimo/block_sdp.hpp>

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <random>

namespace qmimo::sdp {
namespace {

Constraint trace_constraint(int block, int n, double rhs) {
  Constraint c;
  for (int i = 0; i < n; ++i) c.entries.push_back({block, i, i, 1.0});
  c.rhs = rhs;
  return c;
}

TEST(BlockSdp, LinearProgramOnScalarBlocks) {
  // min x1 + 2 x2 s.t. x1 + x2 = 1, x >= 0  ->  1 at x = (1, 0).
  Problem p;
  p.block_sizes = {1, 1};
  p.cost = {Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 2.0)};
  p.constraints.push_back({{{0, 0, 0, 1.0}, {1, 0, 0, 1.0}}, 1.0});
  const auto r = solve(p);
  ASSERT_EQ(r.status, Status::optimal);
  EXPECT_NEAR(r.primal_objective, 1.0, 1e-8);
  EXPECT_NEAR(r.X[0](0, 0).real(), 1.0, 1e-6);
  EXPECT_NEAR(r.X[1](0, 0).real(), 0.0, 1e-6);
}

TEST(BlockSdp, MinimumEigenvalue) {
  // min <C, X> s.t. Tr X = 1, X >= 0  ->  lambda_min(C).
  std::mt19937_64 gen(41);
  for (int n : {2, 5, 8}) {
    const Matrix C = test::random_hermitian(n, gen);
    Problem p;
    p.block_sizes = {n};
    p.cost = {C};
    p.constraints = {trace_constraint(0, n, 1.0)};
    const auto r = solve(p);
    ASSERT_EQ(r.status, Status::optimal) << "n=" << n;
    EXPECT_NEAR(r.primal_objective, min_eigenvalue(C), 1e-7);
    EXPECT_NEAR(r.dual_objective, min_eigenvalue(C), 1e-7);
    EXPECT_GE(min_eigenvalue(r.X[0]), -1e-9);
    EXPECT_GE(min_eigenvalue(r.Z[0]), -1e-9);
  }
}

TEST(BlockSdp, ComplexOffDiagonalConstraint) {
  // min Tr X s.t. Re X01 = 1/2, Im X01 = 1/2 (Hermitian pairs), X >= 0:
  // |X01|^2 <= X00 X11 gives Tr X >= 2 |X01| = sqrt(2).
  Problem p;
  p.block_sizes = {2};
  p.cost = {Matrix::Identity(2, 2)};
  // (|0><1| + |1><0|)/2 picks Re X01, (i|0><1| - i|1><0|)/2 picks Im X01.
  p.constraints.push_back({{{0, 0, 1, 0.5}, {0, 1, 0, 0.5}}, 0.5});
  p.constraints.push_back({{{0, 0, 1, cplx(0.0, 0.5)}, {0, 1, 0, cplx(0.0, -0.5)}}, 0.5});
  const auto r = solve(p);
  ASSERT_EQ(r.status, Status::optimal);
  EXPECT_NEAR(r.primal_objective, std::sqrt(2.0), 1e-7);
  EXPECT_NEAR(std::abs(r.X[0](0, 1)), std::sqrt(0.5), 1e-6);
}

TEST(BlockSdp, WeakDualityAndResiduals) {
  std::mt19937_64 gen(42);
  const int n = 6;
  Problem p;
  p.block_sizes = {n, 3};
  p.cost = {test::random_hermitian(n, gen), test::random_hermitian(3, gen)};
  p.constraints = {trace_constraint(0, n, 1.0), trace_constraint(1, 3, 2.0)};
  // A coupling constraint over both blocks.
  Constraint c;
  c.entries = {{0, 0, 0, 1.0}, {1, 2, 2, -1.0}};
  c.rhs = 0.0;
  p.constraints.push_back(c);
  const auto r = solve(p);
  ASSERT_EQ(r.status, Status::optimal);
  EXPECT_GE(r.primal_objective - r.dual_objective, -1e-8);
  EXPECT_LT(r.relative_gap, 1e-8);
  EXPECT_LT(r.primal_infeasibility, 1e-8);
  EXPECT_LT(r.dual_infeasibility, 1e-8);
  EXPECT_NEAR(r.X[0].trace().real(), 1.0, 1e-8);
  EXPECT_NEAR(r.X[1].trace().real(), 2.0, 1e-8);
  EXPECT_NEAR(r.X[0](0, 0).real(), r.X[1](2, 2).real(), 1e-8);
}

TEST(BlockSdp, IterationLimitIsReported) {
  std::mt19937_64 gen(43);
  Problem p;
  p.block_sizes = {4};
  p.cost = {test::random_hermitian(4, gen)};
  p.constraints = {trace_constraint(0, 4, 1.0)};
  const auto r = solve(p, Settings{1e-10, 2, 0.98});
  EXPECT_EQ(r.status, Status::max_iterations);
  EXPECT_EQ(std::string(to_string(r.status)), "max-iter");
}

}  // namespace
}  // namespace qmimo::sdp
