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

#include <qmimo/linalg.hpp>

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace qmimo {
namespace {

using test::max_abs_diff;
using test::random_density;

TEST(Pauli, Algebra) {
  const cplx i(0.0, 1.0);
  EXPECT_LT(max_abs_diff(pauli::x() * pauli::y(), i * pauli::z()), 1e-15);
  EXPECT_LT(max_abs_diff(pauli::y() * pauli::z(), i * pauli::x()), 1e-15);
  for (int k = 1; k <= 3; ++k) {
    EXPECT_LT(max_abs_diff(pauli::sigma(k) * pauli::sigma(k), pauli::identity()), 1e-15);
    EXPECT_NEAR(pauli::sigma(k).trace().real(), 0.0, 1e-15);
  }
  EXPECT_LT(max_abs_diff(pauli::sigma(0), pauli::identity()), 1e-15);
}

TEST(Kron, ExplicitEntries) {
  const Matrix k = kron(pauli::x(), pauli::z());
  Matrix expect = Matrix::Zero(4, 4);
  expect(0, 2) = 1.0;
  expect(1, 3) = -1.0;
  expect(2, 0) = 1.0;
  expect(3, 1) = -1.0;
  EXPECT_LT(max_abs_diff(k, expect), 1e-15);
}

TEST(PartialTrace, ProductStateKeepsFactors) {
  std::mt19937_64 gen(1);
  const Matrix a = random_density(2, gen), b = random_density(3, gen), c = random_density(2, gen);
  const Matrix abc = kron(kron(a, b), c);
  const Dims dims{2, 3, 2};
  EXPECT_LT(max_abs_diff(partial_trace(abc, dims, {0, 2}), kron(a, c)), 1e-14);
  EXPECT_LT(max_abs_diff(partial_trace(abc, dims, {2, 0}), kron(a, c)), 1e-14);
  EXPECT_LT(max_abs_diff(partial_trace(abc, dims, {1}), b), 1e-14);
  EXPECT_NEAR(partial_trace(abc, dims, {}).trace().real(), 1.0, 1e-14);
}

TEST(PartialTrace, BellStateIsMaximallyMixed) {
  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const Matrix rho = bell * bell.adjoint();
  EXPECT_LT(max_abs_diff(partial_trace(rho, qubit_dims(2), {0}), 0.5 * pauli::identity()), 1e-15);
  EXPECT_LT(max_abs_diff(partial_trace(rho, qubit_dims(2), {1}), 0.5 * pauli::identity()), 1e-15);
}

TEST(PartialTrace, RejectsBadIndices) {
  const Matrix m = Matrix::Identity(4, 4);
  EXPECT_THROW(partial_trace(m, qubit_dims(2), {0, 0}), DimensionError);
  EXPECT_THROW(partial_trace(m, qubit_dims(2), {2}), DimensionError);
  EXPECT_THROW(partial_trace(m, qubit_dims(3), {0}), DimensionError);
}

TEST(PartialTranspose, ActsOnOneFactor) {
  std::mt19937_64 gen(2);
  const Matrix a = test::random_complex(2, 2, gen), b = test::random_complex(3, 3, gen);
  const Dims dims{2, 3};
  EXPECT_LT(max_abs_diff(partial_transpose(kron(a, b), dims, 1), kron(a, Matrix(b.transpose()))), 1e-15);
  EXPECT_LT(max_abs_diff(partial_transpose(kron(a, b), dims, 0), kron(Matrix(a.transpose()), b)), 1e-15);
  const int both[] = {0, 1};
  const Matrix m = test::random_complex(6, 6, gen);
  EXPECT_LT(max_abs_diff(partial_transpose(m, dims, both), m.transpose()), 1e-15);
}

TEST(PartialTranspose, BellStateHasNegativeEigenvalue) {
  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(min_eigenvalue(partial_transpose(bell * bell.adjoint(), qubit_dims(2), 1)), -0.5, 1e-14);
}

TEST(Permute, RelabelsFactors) {
  std::mt19937_64 gen(3);
  const Matrix a = random_density(2, gen), b = random_density(3, gen), c = random_density(4, gen);
  const Dims dims{2, 3, 4};
  const Matrix abc = kron(kron(a, b), c);
  // Output factor k is input factor perm[k].
  EXPECT_LT(max_abs_diff(permute_subsystems(abc, dims, {2, 0, 1}), kron(kron(c, a), b)), 1e-15);
  EXPECT_LT(max_abs_diff(permute_subsystems(abc, dims, {0, 1, 2}), abc), 1e-15);
  EXPECT_THROW(permute_subsystems(abc, dims, {0, 0, 1}), DimensionError);
}

TEST(Permute, OperatorIsUnitaryAndMatches) {
  std::mt19937_64 gen(4);
  const Dims dims{2, 3, 2};
  const Matrix m = test::random_complex(12, 12, gen);
  for (const auto& perm : {std::vector<int>{1, 2, 0}, std::vector<int>{2, 1, 0}, std::vector<int>{0, 2, 1}}) {
    const Matrix P = permutation_operator(dims, perm);
    EXPECT_LT(max_abs_diff(P * P.adjoint(), Matrix::Identity(12, 12)), 1e-15);
    EXPECT_LT(max_abs_diff(P * m * P.adjoint(), permute_subsystems(m, dims, perm)), 1e-14);
  }
  // Two-qubit swap: |01> <-> |10>.
  const Matrix swap = permutation_operator(qubit_dims(2), {1, 0});
  EXPECT_EQ(swap(1, 2), cplx(1.0));
  EXPECT_EQ(swap(2, 1), cplx(1.0));
  EXPECT_EQ(swap(0, 0), cplx(1.0));
  EXPECT_EQ(swap(1, 1), cplx(0.0));
}

TEST(MaximallyMixed, ReplacesOneFactor) {
  std::mt19937_64 gen(5);
  const Matrix a = random_density(2, gen), b = random_density(2, gen), c = random_density(2, gen);
  const Matrix out = replace_with_maximally_mixed(kron(kron(a, b), c), qubit_dims(3), 1);
  EXPECT_LT(max_abs_diff(out, kron(kron(a, 0.5 * pauli::identity()), c)), 1e-15);
}

TEST(PureQubit, BlochRoundTripAndProjector) {
  std::mt19937_64 gen(6);
  for (int t = 0; t < 20; ++t) {
    const PureQubit psi = test::random_qubit(gen);
    const Bloch r = psi.bloch();
    EXPECT_NEAR(r[0] * r[0] + r[1] * r[1] + r[2] * r[2], 1.0, 1e-14);
    EXPECT_LT(max_abs_diff(psi.projector(), bloch_operator(r)), 1e-14);
    EXPECT_LT(max_abs_diff(PureQubit::from_bloch(r).projector(), psi.projector()), 1e-12);
    EXPECT_NEAR(fidelity_with_pure(psi.projector(), psi), 1.0, 1e-14);
    EXPECT_NEAR(fidelity_with_pure(psi.orthogonal().projector(), psi), 0.0, 1e-14);
    EXPECT_NEAR(fidelity_with_pure(Matrix(0.5 * pauli::identity()), psi), 0.5, 1e-14);
  }
}

TEST(Validity, DetectsInvalidStates) {
  std::mt19937_64 gen(7);
  EXPECT_TRUE(check_state(random_density(4, gen)).ok());
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;
  EXPECT_FALSE(check_state(bad).positive());
  EXPECT_TRUE(check_state(bad).unit_trace());
  EXPECT_THROW(DensityMatrix::checked(bad, {2}), std::exception);
  Matrix nonherm = Matrix::Identity(2, 2) * 0.5;
  nonherm(0, 1) = 0.1;
  EXPECT_FALSE(check_state(nonherm).hermitian());
}

TEST(DensityMatrix, TensorAndReduce) {
  std::mt19937_64 gen(8);
  const DensityMatrix a{random_density(2, gen), {2}};
  const DensityMatrix b{random_density(2, gen), {2}};
  const auto ab = tensor_product(a, b);
  EXPECT_EQ(ab.subsystems(), 2);
  EXPECT_LT(max_abs_diff(partial_trace(ab, {1}).data(), b.data()), 1e-15);
  EXPECT_EQ(DensityMatrix::maximally_mixed(3).dimension(), 8);
}

TEST(TraceProduct, MatchesDefinition) {
  std::mt19937_64 gen(9);
  const Matrix a = test::random_hermitian(6, gen), b = test::random_hermitian(6, gen);
  EXPECT_NEAR(trace_product(a, b), (a * b).trace().real(), 1e-12);
}

}  // namespace
}  // namespace qmimo
