// Copyright 2026 The factdil Authors
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

#include "factdil/matcore.hpp"

#include <gtest/gtest.h>

#include "factdil/random.hpp"
#include "test_util.hpp"

namespace factdil {
namespace {

using test::MatrixNear;

TEST(Kron, IdentityTimesIdentity) {
  EXPECT_EQ(kron(Matrix::identity(2), Matrix::identity(3)), Matrix::identity(6));
}

TEST(Kron, DiagonalCase) {
  const cplx d[] = {1.0, 2.0};
  const cplx expect[] = {1.0, 1.0, 2.0, 2.0};
  EXPECT_EQ(kron(Matrix::diagonal(d), Matrix::identity(2)), Matrix::diagonal(expect));
}

TEST(Kron, MatchesFourIndexLoop) {
  Rng rng(11);
  const Matrix a = ginibre(rng, 2, 2);
  const Matrix b = ginibre(rng, 2, 2);
  const Matrix k = kron(a, b);
  for (std::size_t i1 = 0; i1 < 2; ++i1)
    for (std::size_t i2 = 0; i2 < 2; ++i2)
      for (std::size_t j1 = 0; j1 < 2; ++j1)
        for (std::size_t j2 = 0; j2 < 2; ++j2)
          EXPECT_EQ(k(i1 * 2 + i2, j1 * 2 + j2), a(i1, j1) * b(i2, j2));
}

TEST(Kron, AssociativeAndBilinear) {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = ginibre(rng, 2, 3);
    const Matrix b = ginibre(rng, 3, 2);
    const Matrix c = ginibre(rng, 2, 2);
    const Matrix a2 = ginibre(rng, 2, 3);
    EXPECT_TRUE(MatrixNear(kron(kron(a, b), c), kron(a, kron(b, c)), 1e-12));
    const cplx s(0.3, -1.2);
    EXPECT_TRUE(MatrixNear(kron(a + a2 * s, b), kron(a, b) + kron(a2, b) * s, 1e-12));
    EXPECT_TRUE(MatrixNear(kron(b, a + a2 * s), kron(b, a) + kron(b, a2) * s, 1e-12));
  }
}

TEST(MatrixUnit, Basics) {
  EXPECT_EQ(matrix_unit(2, 0, 0), (Matrix{{1, 0}, {0, 0}}));
  EXPECT_EQ(matrix_unit(2, 0, 1) * matrix_unit(2, 1, 0), matrix_unit(2, 0, 0));
  Matrix sum(3, 3);
  for (std::size_t i = 0; i < 3; ++i) sum += matrix_unit(3, i, i);
  EXPECT_EQ(sum, Matrix::identity(3));
}

TEST(MatrixUnit, UnitAlgebra) {
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t l = 0; l < 3; ++l) {
          const Matrix expect = j == k ? matrix_unit(3, i, l) : Matrix(3, 3);
          EXPECT_EQ(matrix_unit(3, i, j) * matrix_unit(3, k, l), expect);
        }
}

TEST(MatrixUnit, OutOfRangeThrows) {
  EXPECT_THROW(matrix_unit(2, 2, 0), PreconditionError);
  EXPECT_THROW(matrix_unit(2, 0, 5), PreconditionError);
}

TEST(MatrixShape, NonFiniteRejected) {
  EXPECT_THROW(Matrix(1, 1, {cplx(std::nan(""), 0)}), PreconditionError);
  EXPECT_THROW(Matrix(2, 2, {cplx(1.0)}), PreconditionError);
}

TEST(HermitianEig, Diagonal) {
  const cplx d[] = {3.0, 1.0, 2.0};
  const auto es = hermitian_eig(Matrix::diagonal(d));
  ASSERT_EQ(es.values.size(), 3u);
  EXPECT_NEAR(es.values[0], 1.0, 1e-14);
  EXPECT_NEAR(es.values[1], 2.0, 1e-14);
  EXPECT_NEAR(es.values[2], 3.0, 1e-14);
}

TEST(HermitianEig, PauliX) {
  const auto es = hermitian_eig(test::pauli_x());
  EXPECT_NEAR(es.values[0], -1.0, 1e-14);
  EXPECT_NEAR(es.values[1], 1.0, 1e-14);
}

TEST(HermitianEig, ReconstructsRandomHermitian) {
  Rng rng(5);
  for (std::size_t n : {1u, 2u, 4u, 7u, 16u}) {
    const Matrix a = random_hermitian(rng, n);
    const auto es = hermitian_eig(a);
    std::vector<cplx> lam(es.values.begin(), es.values.end());
    const Matrix rec = es.vectors * Matrix::diagonal(lam) * es.vectors.adjoint();
    EXPECT_LT(distance(rec, a), 1e-10) << "n=" << n;
    EXPECT_TRUE(is_unitary(es.vectors, Tolerance(1e-10, 1e-10)));
    EXPECT_TRUE(std::is_sorted(es.values.begin(), es.values.end()));
    double sum = 0.0;
    for (double v : es.values) sum += v;
    EXPECT_NEAR(sum, a.trace().real(), 1e-10);
  }
}

TEST(HermitianEig, GramMatrixIsPositive) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = ginibre(rng, 5, 5);
    EXPECT_GE(min_eigenvalue(a.adjoint() * a), -1e-12);
  }
}

TEST(HermitianEig, DegenerateSpectrum) {
  Rng rng(7);
  const Matrix u = haar_unitary(rng, 4);
  const cplx d[] = {1.0, 1.0, -2.0, -2.0};
  const Matrix a = u * Matrix::diagonal(d) * u.adjoint();
  const auto es = hermitian_eig(a);
  EXPECT_NEAR(es.values[0], -2.0, 1e-12);
  EXPECT_NEAR(es.values[3], 1.0, 1e-12);
}

TEST(HermitianEig, Errors) {
  EXPECT_THROW(hermitian_eig(Matrix(2, 3)), PreconditionError);
  EXPECT_THROW(hermitian_eig(Matrix{{0, 1}, {0, 0}}), PreconditionError);
}

TEST(IsUnitary, Cases) {
  EXPECT_TRUE(is_unitary(Matrix::identity(4)));
  const cplx d[] = {1.0, 2.0};
  EXPECT_FALSE(is_unitary(Matrix::diagonal(d)));
  EXPECT_THROW(is_unitary(Matrix(2, 3)), PreconditionError);
}

TEST(IsUnitary, GramSchmidtGinibre) {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix q = orthonormalize_columns(ginibre(rng, 5, 5));
    EXPECT_TRUE(is_unitary(q));
    // Columns are orthonormal by an independent inner-product loop.
    for (std::size_t a = 0; a < 5; ++a)
      for (std::size_t b = 0; b < 5; ++b) {
        cplx s = 0.0;
        for (std::size_t r = 0; r < 5; ++r) s += std::conj(q(r, a)) * q(r, b);
        EXPECT_NEAR(std::abs(s - (a == b ? 1.0 : 0.0)), 0.0, 1e-12);
      }
  }
}

TEST(SliceRight, ElementaryTensor) {
  Rng rng(9);
  const Matrix a = ginibre(rng, 3, 3);
  const Matrix x = ginibre(rng, 2, 2);
  const std::vector<double> w{0.25, 0.75};
  const cplx tau = w[0] * x(0, 0) + w[1] * x(1, 1);
  EXPECT_TRUE(MatrixNear(slice_right(kron(a, x), 3, 2, w), a * tau, 1e-13));
}

TEST(SliceRight, IdentityGoesToIdentity) {
  const std::vector<double> w{0.2, 0.3, 0.5};
  EXPECT_TRUE(MatrixNear(slice_right(Matrix::identity(6), 2, 3, w), Matrix::identity(2), 1e-15));
}

TEST(SliceRight, MatchesBlockLoop) {
  Rng rng(10);
  const Matrix z = ginibre(rng, 6, 6);
  const std::vector<double> w{0.5, 0.5};  // normalised trace on M_2
  const Matrix s = slice_right(z, 3, 2, w);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const Matrix blk = z.block(i * 2, j * 2, 2, 2);
      EXPECT_NEAR(std::abs(s(i, j) - blk.trace() / 2.0), 0.0, 1e-14);
    }
}

TEST(SliceRight, InverseOfTensoringWithIdentity) {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix x = ginibre(rng, 3, 3);
    const auto w = random_simplex_point(rng, 4);
    EXPECT_TRUE(MatrixNear(slice_right(kron(x, Matrix::identity(4)), 3, 4, w), x, 1e-13));
  }
}

TEST(SliceRight, TraceCompatible) {
  Rng rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix z = ginibre(rng, 8, 8);
    const auto w = random_simplex_point(rng, 4);
    cplx direct = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t a = 0; a < 4; ++a) direct += w[a] * z(i * 4 + a, i * 4 + a);
    EXPECT_NEAR(std::abs(slice_right(z, 2, 4, w).trace() - direct), 0.0, 1e-10);
  }
}

TEST(SliceRight, Errors) {
  const std::vector<double> w{0.5, 0.5};
  EXPECT_THROW(slice_right(Matrix(5, 5), 2, 2, w), PreconditionError);
  const std::vector<double> bad{0.7, 0.7};
  EXPECT_THROW(slice_right(Matrix(4, 4), 2, 2, bad), PreconditionError);
  const std::vector<double> neg{1.5, -0.5};
  EXPECT_THROW(slice_right(Matrix(4, 4), 2, 2, neg), PreconditionError);
}

TEST(LegPermutation, SwapsTensorFactors) {
  Rng rng(15);
  const Matrix a = ginibre(rng, 2, 2);
  const Matrix b = ginibre(rng, 3, 3);
  const std::size_t dims[] = {2, 3};
  const std::size_t order[] = {1, 0};
  const Matrix p = leg_permutation(dims, order);
  EXPECT_TRUE(MatrixNear(p * kron(a, b) * p.adjoint(), kron(b, a), 1e-14));
}

TEST(LegPermutation, ThreeLegCycle) {
  Rng rng(16);
  const Matrix a = ginibre(rng, 2, 2);
  const Matrix b = ginibre(rng, 3, 3);
  const Matrix c = ginibre(rng, 2, 2);
  const std::size_t dims[] = {2, 3, 2};
  const std::size_t order[] = {2, 0, 1};
  const Matrix p = leg_permutation(dims, order);
  EXPECT_TRUE(MatrixNear(p * kron(kron(a, b), c) * p.adjoint(), kron(kron(c, a), b), 1e-13));
}

TEST(Solve, RecoversSolution) {
  Rng rng(17);
  const Matrix a = ginibre(rng, 5, 5);
  const Matrix x = ginibre(rng, 5, 2);
  EXPECT_TRUE(MatrixNear(solve(a, a * x), x, 1e-10));
}

TEST(ExpIHermitian, IsUnitaryAndMatchesDiagonal) {
  Rng rng(18);
  const Matrix h = random_hermitian(rng, 4);
  EXPECT_TRUE(is_unitary(exp_i_hermitian(h), Tolerance(1e-12, 1e-12)));
  const cplx d[] = {0.5, -1.0};
  const cplx e[] = {std::polar(1.0, 0.5), std::polar(1.0, -1.0)};
  EXPECT_TRUE(MatrixNear(exp_i_hermitian(Matrix::diagonal(d)), Matrix::diagonal(e), 1e-14));
}

TEST(Tolerance, RejectsNonPositive) {
  EXPECT_THROW(Tolerance(0.0, 1e-10), PreconditionError);
  EXPECT_THROW(Tolerance(1e-8, -1.0), PreconditionError);
}

}  // namespace
}  // namespace factdil
