#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace bredonk;

namespace {

IntMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo = -5, int hi = 5) {
  std::uniform_int_distribution<int> e(lo, hi);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = e(rng);
  return m;
}

}  // namespace

TEST(Rational, ParsesFractionsAndIntegers) {
  EXPECT_EQ(*parse_rational("3/4"), Rational(3, 4));
  EXPECT_EQ(*parse_rational("-2"), Rational(-2));
  EXPECT_EQ(*parse_rational("6/8"), Rational(3, 4));
  EXPECT_FALSE(parse_rational("0.5"));
  EXPECT_FALSE(parse_rational("1/0"));
  EXPECT_FALSE(parse_rational("x"));
}

TEST(Rational, RrefRankAndInverse) {
  RatMatrix m{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
  EXPECT_EQ(rank(m), 2u);
  auto n = nullspace(m);
  EXPECT_EQ(n.cols(), 1u);
  EXPECT_TRUE((m * n).is_zero());
  EXPECT_EQ(determinant(m), 0);
  EXPECT_FALSE(inverse(m));
  RatMatrix a{{2, 1}, {1, 1}};
  EXPECT_EQ(*inverse(a) * a, RatMatrix::identity(2));
}

TEST(Smith, KnownExample) {
  IntMatrix m{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}};
  auto f = snf(m);
  EXPECT_EQ(f.U * m * f.V, f.S);
  std::vector<Integer> d;
  for (auto x : f.diagonal()) d.push_back(abs(x));
  EXPECT_EQ(d, (std::vector<Integer>{2, 6, 12}));
}

TEST(Smith, ZeroAndEmptyMatrices) {
  EXPECT_EQ(snf(IntMatrix(3, 2)).rank, 0u);
  EXPECT_EQ(snf(IntMatrix(0, 4)).rank, 0u);
  EXPECT_EQ(snf(IntMatrix(4, 0)).rank, 0u);
}

TEST(Smith, AgreesWithGcdOracleAndDivisors) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> size(1, 6);
  for (int trial = 0; trial < 60; ++trial) {
    auto m = random_matrix(rng, size(rng), size(rng));
    auto f = snf(m);
    ASSERT_EQ(f.U * m * f.V, f.S);
    std::vector<oracle::i128> lib;
    for (auto d : f.diagonal())
      if (d != 0) lib.push_back(oracle::iabs(d.get_si()));
    EXPECT_EQ(lib, oracle::invariant_factors(oracle::from(m)));
    auto dk = oracle::determinantal_divisors(oracle::from(m));
    oracle::i128 p = 1;
    for (std::size_t k = 0; k < dk.size(); ++k) {
      p = k < lib.size() ? p * lib[k] : 0;
      EXPECT_TRUE(dk[k] == p) << "trial " << trial << " k " << k;
    }
  }
}

TEST(Smith, LowRankProducts) {
  // products of thin matrices have small rank and often nontrivial factors
  std::mt19937 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    auto m = random_matrix(rng, 6, 2) * random_matrix(rng, 2, 5);
    auto f = snf(m);
    EXPECT_LE(f.rank, 2u);
    EXPECT_EQ(f.rank, oracle::rank(oracle::from(m)));
  }
}

TEST(Kernel, SaturatedBasis) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    auto m = random_matrix(rng, 3, 6, -3, 3) * IntMatrix{{2, 0, 0, 0, 0, 0},
                                                         {0, 1, 0, 0, 0, 0},
                                                         {0, 0, 3, 0, 0, 0},
                                                         {0, 0, 0, 1, 0, 0},
                                                         {0, 0, 0, 0, 1, 0},
                                                         {0, 0, 0, 0, 0, 4}};
    auto k = kernel_lattice(m);
    EXPECT_TRUE((m * k).is_zero());
    EXPECT_EQ(k.cols(), 6 - oracle::rank(oracle::from(m)));
    // saturated: all invariant factors of the basis are 1
    for (auto d : oracle::invariant_factors(oracle::from(k))) EXPECT_TRUE(d == 1);
  }
}

TEST(Kernel, SolveInLattice) {
  IntMatrix k{{1, 0}, {0, 1}, {1, 1}};
  IntMatrix y{{2}, {3}, {5}};
  EXPECT_EQ(solve_in_lattice(k, y), (IntMatrix{{2}, {3}}));
  EXPECT_THROW(solve_in_lattice(k, IntMatrix{{1}, {1}, {1}}), std::domain_error);
}

TEST(Cohomology, TorsionOfTheImage) {
  // Z --2--> Z --0--> : H = Z/2
  auto h = cochain_cohomology(IntMatrix{{2}}, IntMatrix(0, 1));
  EXPECT_EQ(h.rank, 0u);
  EXPECT_EQ(h.torsion, std::vector<Integer>{2});
  EXPECT_EQ(h.str(), "Z/2");
}

TEST(Cohomology, RandomComplexesAgainstOracle) {
  // d_out random, d_in = (kernel of d_out) * random: torsion lives in d_in.
  std::mt19937 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    auto dout = random_matrix(rng, 2, 6, -2, 2);
    auto k = kernel_lattice(dout);
    auto din = k * random_matrix(rng, k.cols(), 4, -3, 3);
    auto h = cochain_cohomology(din, dout);
    auto ref = oracle::cohomology({oracle::from(din), oracle::from(dout)}, {4, 6, 2})[1];
    EXPECT_TRUE(oracle::same(ref, h)) << trial << ": " << h.str();
  }
}

TEST(Cohomology, RejectsBrokenComplex) {
  EXPECT_THROW(cochain_cohomology(IntMatrix{{1}}, IntMatrix{{1}}), InvariantViolation);
}

TEST(Abelian, CanonicalInvariants) {
  auto g = AbelianGroupInv::from_cyclic(1, {2, 3, 0, 1});
  EXPECT_EQ(g.rank, 2u);
  EXPECT_EQ(g.torsion, std::vector<Integer>{6});
  EXPECT_EQ((free_abelian(1) + AbelianGroupInv::from_cyclic(0, {4, 6})).str(), "Z ⊕ Z/2 ⊕ Z/12");
  EXPECT_EQ(AbelianGroupInv{}.str(), "0");
}
