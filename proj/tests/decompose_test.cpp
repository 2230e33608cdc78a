#include <gtest/gtest.h>

#include "cartop/decompose.hpp"
#include "cartop/errors.hpp"
#include "support/random_ops.hpp"

namespace cartop {
namespace {

using namespace cartop::testing;

TEST(RealPart, ExampleOperatorIsHalfSigmaX) {
  EXPECT_EQ(real_part(lowering()), Complex(0.5, 0.0) * sigma_x());
}

TEST(RealPart, TrivialForHermitianAndZeroForAntiHermitian) {
  Rng rng(21);
  const ComplexMatrix h = random_hermitian(rng, 5);
  EXPECT_LE(max_abs_diff(real_part(h), h), 1e-15);
  EXPECT_LE(frobenius_norm(real_part(I * h)), 1e-15);
}

TEST(ImagPart, ExampleOperatorIsMinusHalfSigmaY) {
  EXPECT_LE(max_abs_diff(imag_part(lowering()), Complex(-0.5, 0.0) * sigma_y()), 0.0);
}

TEST(ImagPart, ZeroForHermitianAndScalarForMultiplesOfIdentity) {
  Rng rng(22);
  EXPECT_EQ(frobenius_norm(imag_part(random_hermitian(rng, 4))), 0.0);
  const Complex a{1.25, -3.5};
  EXPECT_LE(max_abs_diff(imag_part(a * ComplexMatrix::identity(3)),
                         Complex(a.imag(), 0.0) * ComplexMatrix::identity(3)),
            0.0);
}

TEST(Decompose, ExampleOperator) {
  const auto d = decompose(lowering());
  EXPECT_EQ(d.a1, Complex(0.5, 0.0) * sigma_x());
  EXPECT_LE(max_abs_diff(d.a2, Complex(-0.5, 0.0) * sigma_y()), 0.0);
  EXPECT_NEAR(d.commutator_norm, std::sqrt(2.0) / 2.0, 1e-15);
  EXPECT_FALSE(d.normal);
}

TEST(Decompose, SelfAdjointIsTrivial) {
  const auto d = decompose(sigma_z());
  EXPECT_EQ(d.a1, sigma_z());
  EXPECT_EQ(frobenius_norm(d.a2), 0.0);
  EXPECT_TRUE(d.normal);
}

TEST(Decompose, UnitariesAreNormal) {
  Rng rng(23);
  for (std::size_t dim : {2, 3, 5, 8}) {
    const ComplexMatrix u = random_unitary(rng, dim);
    const auto d = decompose(u);
    EXPECT_TRUE(d.normal);
    EXPECT_LE(d.commutator_norm, d.normality_tol);
  }
}

TEST(Decompose, RejectsNonPositiveTolerance) {
  EXPECT_THROW(decompose(sigma_x(), 0.0), std::invalid_argument);
  EXPECT_THROW(is_normal(sigma_x(), -1.0), std::invalid_argument);
}

TEST(Decompose, ScalarAnalogy) {
  const Complex a{0.375, -1.75};
  const auto d = decompose(ComplexMatrix(1, {a}));
  EXPECT_EQ(d.a1(0, 0), Complex(a.real(), 0.0));
  EXPECT_EQ(d.a2(0, 0).real(), a.imag());
  EXPECT_EQ(d.a2(0, 0).imag(), 0.0);
  EXPECT_EQ(recompose(d)(0, 0), a);
  EXPECT_TRUE(d.normal);
}

TEST(Recompose, ExamplesAndZero) {
  const CartesianDecomposition d{Complex(0.5, 0.0) * sigma_x(), Complex(-0.5, 0.0) * sigma_y(), 0.0,
                                 1e-10, false};
  EXPECT_LE(max_abs_diff(recompose(d), lowering()), 0.0);
  const CartesianDecomposition z{ComplexMatrix::zero(3), ComplexMatrix::zero(3), 0.0, 1e-10, true};
  EXPECT_EQ(recompose(z), ComplexMatrix::zero(3));
}

TEST(Decompose, RoundTripAndHermiticityProperty) {
  Rng rng(24);
  for (std::size_t dim = 1; dim <= 16; ++dim) {
    for (int rep = 0; rep < 10; ++rep) {
      const ComplexMatrix a = random_matrix(rng, dim);
      const auto d = decompose(a);
      EXPECT_LE(frobenius_norm(a - recompose(d)), 1e-12);
      EXPECT_LE(hermiticity_defect(d.a1), 1e-12);
      EXPECT_LE(hermiticity_defect(d.a2), 1e-12);
      EXPECT_EQ(d.normal, d.commutator_norm <= d.normality_tol);
    }
  }
}

TEST(Decompose, Linearity) {
  Rng rng(25);
  for (std::size_t dim : {1, 2, 4, 7}) {
    const ComplexMatrix a = random_matrix(rng, dim), b = random_matrix(rng, dim);
    EXPECT_LE(frobenius_norm(real_part(a + b) - (real_part(a) + real_part(b))), 1e-12);
    EXPECT_LE(frobenius_norm(imag_part(a + b) - (imag_part(a) + imag_part(b))), 1e-12);
  }
}

TEST(IsNormal, Examples) {
  EXPECT_TRUE(is_normal(sigma_x() + Complex(2.0, 0.0) * sigma_z(), 1e-10));
  EXPECT_FALSE(is_normal(lowering(), 1e-10));
  Rng rng(26);
  for (std::size_t dim : {2, 3, 4, 8}) {
    const ComplexMatrix a = random_normal(rng, dim);
    EXPECT_TRUE(is_normal(a, default_normality_tol(a)));
  }
}

TEST(IsNormal, CriteriaAgree) {
  Rng rng(27);
  for (std::size_t dim : {2, 3, 4, 8}) {
    for (int rep = 0; rep < 200; ++rep) {
      const ComplexMatrix a = rep % 2 ? random_normal(rng, dim) : random_matrix(rng, dim);
      const auto r = normality_report(a, default_normality_tol(a));
      EXPECT_EQ(r.by_parts, r.by_adjoint);
      EXPECT_EQ(r.by_parts, rep % 2 == 1);
    }
  }
}

}  // namespace
}  // namespace cartop
