#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace bredonk;

namespace {

std::shared_ptr<const GroupData> klein_four() {
  return std::make_shared<const GroupData>(direct_product(cyclic_group(2), cyclic_group(2)));
}

Cocycle klein_form() {
  auto c = Cocycle::trivial(4);
  c.modulus = 2;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) c.set(a, b, (a / 2) * (b % 2));
  return c;
}

WSet point(const GroupData& g) { return coset_space(g, g.whole()); }

}  // namespace

TEST(Crossed, PointWithCyclicGroupOfOrderTwo) {
  // C(pt) x C2 = C[C2]: two characters, two dual points
  auto g = std::make_shared<const GroupData>(cyclic_group(2));
  auto a = build_crossed_product(g, point(*g), Cocycle::trivial(2));
  EXPECT_EQ(a.dim(), 2u);
  EXPECT_EQ(orbit_dual(a).size(), 2u);
  EXPECT_EQ(center_dimension(a), 2u);
}

TEST(Crossed, FreeOrbitIsAMatrixAlgebra) {
  // C(W) x W = M_|W|: one dual point of dimension |W|
  auto g = std::make_shared<const GroupData>(cyclic_group(4));
  auto a = build_crossed_product(g, coset_space(*g, {0}), Cocycle::trivial(4));
  auto dual = orbit_dual(a);
  ASSERT_EQ(dual.size(), 1u);
  EXPECT_EQ(dual[0].dimension, 4u);
  EXPECT_EQ(center_dimension(a), 1u);
  EXPECT_EQ(corner_dimension(a, 0), 1u);
}

TEST(Crossed, KleinFourOverCosetsOfT) {
  auto g = klein_four();
  auto a = build_crossed_product(g, coset_space(*g, {0, 1}), Cocycle::trivial(4));
  EXPECT_EQ(orbit_dual(a).size(), 2u);
  EXPECT_EQ(center_dimension(a), 2u);
  for (int x = 0; x < 2; ++x) EXPECT_EQ(corner_dimension(a, x), 2u);
}

TEST(Crossed, TwistedKleinFourOnAPoint) {
  // the twisted group algebra is M_2: one dual point of degree 2
  auto g = klein_four();
  auto a = build_crossed_product(g, point(*g), klein_form());
  EXPECT_EQ(associativity_defect(a), "");
  EXPECT_EQ(involution_defect(a), "");
  auto dual = orbit_dual(a);
  ASSERT_EQ(dual.size(), 1u);
  EXPECT_EQ(dual[0].degree, 2);
  EXPECT_EQ(center_dimension(a), 1u);
}

TEST(Crossed, ProjectionOntoTheLyingOverIdeal) {
  // W = {±1, ±t} on a point, W' = {1, t}, iota trivial: P cuts out the two
  // characters trivial on t
  auto g = klein_four();
  auto a = build_crossed_product(g, point(*g), Cocycle::trivial(4));
  auto p = ideal_summand(a, {{0, 1}}, {PhaseCharacter{}});
  EXPECT_TRUE(p.idempotent);
  EXPECT_TRUE(p.self_adjoint);
  EXPECT_TRUE(p.central);
  EXPECT_EQ(p.k0_rank, 2u);
  EXPECT_EQ(p.center_rank, 2u);
  EXPECT_EQ(p.trace, Rational(2));
  EXPECT_EQ(p.block_dimension, 2);
}

TEST(Crossed, ProjectionRejectsABadCharacter) {
  auto g = klein_four();
  auto a = build_crossed_product(g, point(*g), Cocycle::trivial(4));
  EXPECT_THROW(ideal_summand(a, {{0, 1}}, {PhaseCharacter{{1, Rational(1, 3)}}}), InvariantViolation);
  // W' must be normal in the stabilizer
  auto d3 = std::make_shared<const GroupData>(dihedral_group(3));
  auto b = build_crossed_product(d3, point(*d3), Cocycle::trivial(6));
  int refl = 0;
  for (int w = 1; w < 6; ++w)
    if (d3->element_order(w) == 2) refl = w;
  EXPECT_THROW(ideal_summand(b, {d3->generate({refl})}, {PhaseCharacter{}}), InvariantViolation);
}

TEST(Crossed, RandomOrbitsSatisfyTheAlgebraLaws) {
  std::mt19937 rng(31);
  auto groups = oracle::small_groups();
  for (int trial = 0; trial < 10; ++trial) {
    const auto& s = groups[1 + rng() % (groups.size() - 1)];
    auto g = std::make_shared<const GroupData>(s.g);
    auto gamma = oracle::random_cocycle(*g, rng, s.factor > 0, s.factor);
    auto orbit = coset_space(*g, oracle::random_subgroup(*g, rng));
    auto a = build_crossed_product(g, orbit, gamma);
    SCOPED_TRACE(s.name);
    EXPECT_EQ(associativity_defect(a), "");
    EXPECT_EQ(involution_defect(a), "");
    std::size_t blocks = 0;
    auto dual = orbit_dual(a);
    for (const auto& d : dual) blocks += d.dimension * d.dimension;
    EXPECT_EQ(blocks, orbit.size() * g->order());
    EXPECT_EQ(dual.size(), center_dimension(a));
    for (std::size_t x = 0; x < orbit.size(); ++x)
      EXPECT_EQ(corner_dimension(a, static_cast<int>(x)), orbit.stabilizer(*g, static_cast<int>(x)).size());
    // W' trivial: P is the unit and its trace is the whole dimension
    std::vector<Subgroup> wp(orbit.size(), Subgroup{0});
    auto p = ideal_summand(a, wp, std::vector<PhaseCharacter>(orbit.size()));
    EXPECT_TRUE(p.idempotent && p.self_adjoint && p.central);
    EXPECT_EQ(p.trace, Rational(static_cast<long>(a.dim())));
    EXPECT_EQ(p.k0_rank, dual.size());
  }
}

TEST(Crossed, RejectsNonActions) {
  auto g = std::make_shared<const GroupData>(cyclic_group(3));
  WSet bad;
  bad.labels = {"p", "q"};
  bad.act = {{0, 1}, {1, 0}, {1, 0}};  // an order-2 swap cannot be a C3 action
  EXPECT_THROW(build_crossed_product(g, bad, Cocycle::trivial(3)), InvariantViolation);
  bad.act = {{0, 1}, {0, 2}, {0, 1}};
  EXPECT_THROW(build_crossed_product(g, bad, Cocycle::trivial(3)), SchemaError);
}
