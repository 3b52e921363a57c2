#include <gtest/gtest.h>

#include <random>

#include "lxe/pauli.hpp"
#include "../support/dense.hpp"

using lxe::PauliOperator;

TEST(Pauli, ParseAndPrint) {
  EXPECT_EQ(PauliOperator::parse("-XIZY").to_string(), "-XIZY");
  EXPECT_EQ(PauliOperator::parse("X_Z").to_string(), "+XIZ");
  EXPECT_THROW(PauliOperator::parse("XQ"), std::invalid_argument);
  EXPECT_THROW(PauliOperator(0), std::invalid_argument);
}

TEST(Pauli, CommutationExamples) {
  using lxe::commutes;
  EXPECT_FALSE(commutes(PauliOperator::parse("X"), PauliOperator::parse("Z")));
  EXPECT_TRUE(commutes(PauliOperator::parse("X"), PauliOperator::parse("X")));
  EXPECT_TRUE(commutes(PauliOperator::parse("XX"), PauliOperator::parse("ZZ")));
  EXPECT_THROW(commutes(PauliOperator::parse("X"), PauliOperator::parse("XX")), std::invalid_argument);
}

TEST(Pauli, ProductExamples) {
  using lxe::multiply;
  EXPECT_EQ(multiply(PauliOperator::parse("ZZI"), PauliOperator::parse("IZZ")).to_string(), "+ZIZ");
  const auto id = multiply(PauliOperator::parse("X"), PauliOperator::parse("X"));
  EXPECT_TRUE(id.is_identity());
  EXPECT_EQ(id.sign(), +1);
  const auto yy = multiply(PauliOperator::parse("Y"), PauliOperator::parse("Y"));
  EXPECT_TRUE(yy.is_identity());
  EXPECT_EQ(yy.sign(), +1);
  EXPECT_THROW(multiply(PauliOperator::parse("X"), PauliOperator::parse("Z")), std::domain_error);
}

// (X Z)(X Z) built from raw x/z factors with the i-phase tracked explicitly.
TEST(Pauli, XzSquaredPhase) {
  using lxe::PhasedPauli;
  PhasedPauli xz = PhasedPauli::from(PauliOperator::parse("X"));
  xz *= PhasedPauli::from(PauliOperator::parse("Z"));  // = -iY
  EXPECT_EQ(xz.exponent, 3);
  PhasedPauli sq = xz;
  sq *= xz;
  EXPECT_TRUE(sq.ops.is_identity());
  EXPECT_EQ(sq.exponent, 2);  // (-iY)^2 = -1

  const auto xm = oracle::pauli_matrix(PauliOperator::parse("X"));
  const auto zm = oracle::pauli_matrix(PauliOperator::parse("Z"));
  const auto prod = (xm * zm) * (xm * zm);
  EXPECT_NEAR(prod(0, 0).real(), -1.0, 1e-12);
  EXPECT_NEAR(prod(1, 1).real(), -1.0, 1e-12);
}

TEST(Pauli, ProductsMatchDenseMatrices) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 1 + rng() % 3;
    auto rand_op = [&] {
      PauliOperator p(n);
      for (std::size_t j = 0; j < n; ++j) p.set(j, rng() & 1, rng() & 1);
      p.set_sign((rng() & 1) ? -1 : 1);
      return p;
    };
    const auto a = rand_op();
    const auto b = rand_op();
    lxe::PhasedPauli r = lxe::PhasedPauli::from(a);
    r *= lxe::PhasedPauli::from(b);
    const auto dense = oracle::pauli_matrix(a) * oracle::pauli_matrix(b);
    oracle::Matrix expect = oracle::pauli_matrix(r.ops);
    const std::complex<double> phases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    expect = expect * phases[r.exponent];
    EXPECT_LT(dense.distance(expect), 1e-12) << a.to_string() << " * " << b.to_string();
    EXPECT_EQ(lxe::commutes(a, b), r.hermitian());
  }
}

TEST(Pauli, WideOperatorsCrossWordBoundaries) {
  PauliOperator a(130), b(130);
  a.set(64, true, false);
  a.set(129, false, true);
  b.set(64, false, true);
  EXPECT_FALSE(lxe::commutes(a, b));
  b.set(129, true, true);
  EXPECT_TRUE(lxe::commutes(a, b));
  EXPECT_EQ(a.weight(), 2u);
}
