#include "support.hpp"

#include <gtest/gtest.h>

using namespace hkt_test;

namespace {

std::vector<Vector> random_vectors(std::mt19937& rng, std::size_t count, std::size_t n) {
  std::vector<Vector> out;
  for (std::size_t c = 0; c < count; ++c) {
    Vector v(n);
    for (auto& x : v) x = random_rational(rng);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

TEST(Rational, ParseAndPrintRoundTrip) {
  for (const char* s : {"0", "7", "-3", "5/6", "-12/7"}) EXPECT_EQ(to_string(parse_rational(s)), s);
  EXPECT_EQ(to_string(parse_rational("4/6")), "2/3");
  EXPECT_THROW(parse_rational("3/-4"), Error);
  EXPECT_THROW(parse_rational("1.5"), Error);
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational(""), Error);
}

TEST(Rational, ExactSqrt) {
  EXPECT_EQ(*exact_sqrt(Rational(9, 4)), Rational(3, 2));
  EXPECT_FALSE(exact_sqrt(Rational(2)).has_value());
  EXPECT_FALSE(exact_sqrt(Rational(-1)).has_value());
}

TEST(KForm, StorageSignsAndRanks) {
  KForm f(2, 4);
  f.set({2, 0}, Rational(5));
  EXPECT_EQ(f({0, 2}), Rational(-5));
  EXPECT_EQ(f({2, 0}), Rational(5));
  EXPECT_EQ(f({1, 1}), Rational(0));
  for (std::size_t r = 0; r < f.size(); ++r) EXPECT_EQ(f.rank_of_sorted(f.sorted_tuple(r)), r);
}

TEST(KForm, TensorRoundTripAndRejection) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const KForm f = random_form(rng, 3, 6);
    EXPECT_EQ(KForm::from_tensor(f.to_tensor()), f);
  }
  Tensor t(2, 3);
  t(0, 1) = 1;
  EXPECT_FALSE(KForm::is_antisymmetric(t));
  EXPECT_THROW(KForm::from_tensor(t), Error);
}

TEST(Wedge, MatchesPermutationSumOracle) {
  std::mt19937 rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 4 + trial % 3;
    const std::size_t k = 1 + trial % 2, l = 1 + (trial / 2) % 3;
    const KForm a = random_form(rng, k, n), b = random_form(rng, l, n);
    const KForm ab = wedge(a, b);
    const auto v = random_vectors(rng, k + l, n);
    EXPECT_EQ(ab.evaluate(v), oracle_wedge_eval(a, b, v)) << "trial " << trial;
  }
}

TEST(Wedge, GradedCommutativeAndAssociative) {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 5 + trial % 3;
    const std::size_t k = 1 + trial % 3, l = 1 + (trial + 1) % 2, m = 1;
    const KForm a = random_form(rng, k, n), b = random_form(rng, l, n), c = random_form(rng, m, n);
    const Rational sign = ((k * l) % 2 == 0) ? Rational(1) : Rational(-1);
    EXPECT_EQ(wedge(a, b), sign * wedge(b, a));
    EXPECT_EQ(wedge(wedge(a, b), c), wedge(a, wedge(b, c)));
  }
}

TEST(Wedge, OddFormSquaresToZeroAndDegreeLimit) {
  std::mt19937 rng(3);
  const KForm a = random_form(rng, 1, 4, 1.0);
  EXPECT_TRUE(wedge(a, a).is_zero());
  const KForm b = random_form(rng, 3, 4, 1.0);
  EXPECT_THROW(wedge(b, random_form(rng, 2, 4)), Error);
}

TEST(Wedge, CoordinateProduct) {
  const KForm e123 = wedge(wedge(KForm::basis_covector(0, 4), KForm::basis_covector(1, 4)), KForm::basis_covector(2, 4));
  EXPECT_EQ(e123({0, 1, 2}), Rational(1));
  EXPECT_EQ(e123({2, 1, 0}), Rational(-1));
}

TEST(Tensor, ApplyInSlotEvaluatesOnImage) {
  std::mt19937 rng(4);
  const std::size_t n = 4;
  const KForm f = random_form(rng, 3, n, 1.0);
  const Matrix M = random_matrix(rng, n);
  const Tensor t = apply_in_slot(f.to_tensor(), 1, M);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        EXPECT_EQ(t(i, j, k), f.evaluate({basis_vector(i, n), M.column(j), basis_vector(k, n)}));
}

TEST(JTwist, IsAnInvolutionForComplexStructures) {
  std::mt19937 rng(5);
  const auto& J = builtin("nil8").structure.j(2);
  for (int trial = 0; trial < 5; ++trial) {
    const KForm a = random_form(rng, 3, 8, 0.3);
    // two twists give a(J^2 ., J^2 ., J^2 .) = -a
    EXPECT_EQ(j_twist(j_twist(a, J), J), Rational(-1) * a);
  }
  EXPECT_THROW(j_twist(random_form(rng, 2, 8), J), Error);
}

TEST(Norm, FullSumConvention) {
  const Metric g = Metric::identity(4);
  KForm e123(3, 4);
  e123.set({0, 1, 2}, Rational(1));
  EXPECT_EQ(norm_sq(e123, g), Rational(6));
  EXPECT_EQ(norm_sq(e123, g, NormConvention::FactorialNormalized), Rational(1));
  // Scaling the metric by 4 divides each raised slot by 4.
  const Metric g4(Rational(4) * Matrix::identity(4));
  EXPECT_EQ(norm_sq(e123, g4), Rational(6, 64));
}

TEST(Metric, ValidatesSymmetryAndDefiniteness) {
  Matrix asym = Matrix::identity(3);
  asym(0, 1) = 1;
  EXPECT_THROW(Metric{asym}, Error);
  Matrix indef = Matrix::identity(3);
  indef(2, 2) = -1;
  try {
    Metric m(indef);
    FAIL() << "indefinite metric accepted";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("leading minor 3"), std::string::npos);
  }
}

TEST(Metric, OrthonormalFrameExactOrRefused) {
  Matrix m = Matrix::identity(3);
  m(0, 0) = 4;
  m(0, 1) = m(1, 0) = 2;
  m(1, 1) = 2;
  const Metric g(m);
  const auto frame = orthonormal_frame(g);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) EXPECT_EQ(g(frame[a], frame[b]), Rational(a == b ? 1 : 0));
  Matrix bad = Matrix::identity(2);
  bad(0, 0) = 2;
  try {
    (void)orthonormal_frame(Metric(bad));
    FAIL() << "irrational frame accepted";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("supply orthonormal input"), std::string::npos);
  }
}

TEST(LinearAlgebra, SolveInverseAndNullSpace) {
  std::mt19937 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix P = random_basis_change(rng, 5);
    const auto Pinv = inverse(P);
    ASSERT_TRUE(Pinv);
    EXPECT_EQ(P * *Pinv, Matrix::identity(5));
    const Vector b = P.column(trial % 5);
    const auto sol = solve(P, b);
    EXPECT_TRUE(sol.unique());
    EXPECT_EQ(P.apply(sol.particular), b);
  }
  Matrix singular(2, 2);
  singular(0, 0) = 1;
  singular(0, 1) = 2;
  singular(1, 0) = 2;
  singular(1, 1) = 4;
  EXPECT_FALSE(inverse(singular));
  const auto ns = null_space(singular);
  ASSERT_EQ(ns.size(), 1u);
  EXPECT_TRUE(singular.apply(ns[0])[0].is_zero());
}
