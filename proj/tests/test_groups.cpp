#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace bredonk;

namespace {

void expect_group_axioms(const GroupData& g) {
  for (int a = 0; a < g.order(); ++a) {
    EXPECT_EQ(g.mul(0, a), a);
    EXPECT_EQ(g.mul(a, g.inv(a)), 0);
    for (int b = 0; b < g.order(); ++b)
      for (int c = 0; c < g.order(); ++c) ASSERT_EQ(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
  }
}

}  // namespace

TEST(Groups, SmallGroupsSatisfyAxioms) {
  for (const auto& s : oracle::medium_groups()) {
    SCOPED_TRACE(s.name);
    expect_group_axioms(s.g);
    std::size_t total = 0;
    for (const auto& c : s.g.classes()) total += c.size();
    EXPECT_EQ(total, static_cast<std::size_t>(s.g.order()));
    EXPECT_EQ(s.g.classes().size(), oracle::classes(s.g, s.g.whole()).size());
  }
}

TEST(Groups, FromTableRejectsGarbage) {
  EXPECT_THROW(GroupData::from_table({}), GroupClosureError);
  EXPECT_THROW(GroupData::from_table({{0, 1}, {1, 2}}), GroupClosureError);
  EXPECT_THROW(GroupData::from_table({{0, 1}, {0, 1}}), GroupClosureError);
}

TEST(Groups, SubgroupsAndNormality) {
  auto d4 = dihedral_group(4);
  auto z = d4.generate({d4.power(d4.generators()[0], 2)});
  for (const auto& s : {d4.whole(), z}) EXPECT_TRUE(d4.is_subgroup(s));
  EXPECT_TRUE(d4.is_subgroup(z));
  EXPECT_TRUE(d4.is_normal(d4.whole(), d4.whole()));
  int non_normal = 0;
  for (int a = 1; a < 8; ++a)
    if (!d4.is_normal(d4.generate({a}), d4.whole())) ++non_normal;
  EXPECT_EQ(non_normal, 4);  // the four reflections
}

TEST(Groups, AffineClosureOfTheSp4Group) {
  Lattice lat(IntMatrix{{2, 0}, {0, 2}});
  AffineTorusMap s{IntMatrix{{0, 1}, {1, 0}}, {0, 0}}, t{IntMatrix{{1, 0}, {0, -1}}, {0, 0}};
  auto g = close_affine_group(lat, {s, t}, {"s", "t"}, 64);
  EXPECT_EQ(g.order(), 8);
  expect_group_axioms(g);
  auto st = g.mul(*find_element(g, s), *find_element(g, t));
  EXPECT_EQ(g.element_order(st), 4);
  // -1 = (st)^2
  AffineTorusMap m{IntMatrix{{-1, 0}, {0, -1}}, {0, 0}};
  EXPECT_EQ(g.power(st, 2), *find_element(g, m));
}

TEST(Groups, ClosureModuloTheLattice) {
  // x -> x + 2 on R/6Z has order 3; x -> x + 1/100 exceeds a bound of 64
  Lattice lat(IntMatrix{{6}});
  EXPECT_EQ(close_affine_group(lat, {{IntMatrix{{1}}, {2}}}, {"a"}, 64).order(), 3);
  EXPECT_THROW(close_affine_group(lat, {{IntMatrix{{1}}, {Rational(1, 100)}}}, {"a"}, 64), GroupClosureError);
  EXPECT_THROW(close_affine_group(lat, {{IntMatrix{{2}}, {0}}}, {"a"}, 64), GroupClosureError);
}

TEST(Cocycle, RandomCoboundariesAreCocycles) {
  std::mt19937 rng(1);
  for (const auto& s : oracle::medium_groups()) {
    auto c = oracle::random_cocycle(s.g, rng, true, s.factor);
    EXPECT_EQ(c.defect(s.g), "") << s.name;
  }
}

TEST(Cocycle, DefectDetectsBrokenTables) {
  auto g = cyclic_group(3);
  auto c = Cocycle::trivial(3);
  c.modulus = 3;
  c.set(1, 1, 1);
  EXPECT_NE(c.defect(g), "");
  EXPECT_THROW(c.validate(g), InvariantViolation);
}

TEST(Cocycle, TwistedKleinFourExtensionIsDihedralOrQuaternion) {
  auto k4 = direct_product(cyclic_group(2), cyclic_group(2));
  auto c = Cocycle::trivial(4);
  c.modulus = 2;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) c.set(a, b, (a / 2) * (b % 2));
  EXPECT_EQ(c.defect(k4), "");
  auto e = central_extension(k4, c);
  EXPECT_EQ(e.order(), 8);
  expect_group_axioms(e);
  // nonabelian: the bilinear form is not symmetric
  bool abelian = true;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) abelian = abelian && e.mul(a, b) == e.mul(b, a);
  EXPECT_FALSE(abelian);
}

TEST(Groups, DirectProductEncoding) {
  auto g = direct_product(cyclic_group(2), cyclic_group(3));
  for (int x = 0; x < 6; ++x)
    for (int y = 0; y < 6; ++y) {
      int z = g.mul(x, y);
      EXPECT_EQ(z % 2, (x % 2 + y % 2) % 2);
      EXPECT_EQ(z / 2, (x / 2 + y / 2) % 3);
    }
}
