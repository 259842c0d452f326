#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace bredonk;

namespace {

Cocycle klein_form() {
  auto c = Cocycle::trivial(4);
  c.modulus = 2;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) c.set(a, b, (a / 2) * (b % 2));
  return c;
}

}  // namespace

TEST(Characters, UntwistedTablesOfSmallGroups) {
  for (const auto& s : oracle::medium_groups()) {
    SCOPED_TRACE(s.name);
    auto t = character_table(s.g);
    EXPECT_EQ(table_defect(t), "");
    EXPECT_EQ(t.size(), oracle::classes(s.g, s.g.whole()).size());
    // column orthogonality: sum_chi |chi(g)|^2 = |C(g)|
    for (int a = 0; a < s.g.order(); ++a) {
      Cyclotomic sum = Cyclotomic::rational(0);
      for (std::size_t i = 0; i < t.size(); ++i) sum += t.values[i][a] * t.values[i][a].conj();
      EXPECT_EQ(sum, Cyclotomic::rational(static_cast<long>(s.g.centralizer(a).size())));
    }
  }
}

TEST(Characters, CyclicGroupHasRootsOfUnity) {
  auto t = character_table(cyclic_group(6));
  ASSERT_EQ(t.size(), 6u);
  std::set<std::string> seen;
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(t.degrees[i], 1);
    // chi(1)^6 = 1
    Cyclotomic p = Cyclotomic::rational(1);
    for (int k = 0; k < 6; ++k) p *= t.values[i][1];
    EXPECT_EQ(p, Cyclotomic::rational(1));
  }
}

TEST(Characters, SymmetricGroupOnThreeLetters) {
  auto t = character_table(dihedral_group(3));
  std::vector<int> d = t.degrees;
  std::sort(d.begin(), d.end());
  EXPECT_EQ(d, (std::vector<int>{1, 1, 2}));
}

TEST(Characters, DihedralDegreeTwoRestrictsToTwiceTheSign) {
  auto d4 = dihedral_group(4);
  auto t = character_table(d4);
  int minus_one = d4.power(d4.generators()[0], 2);
  for (int r : d4.generators())
    if (d4.element_order(r) == 4) minus_one = d4.power(r, 2);
  auto center = d4.generate({minus_one});
  auto tc = subgroup_table(d4, center, Cocycle::trivial(8));
  auto res = restriction_matrix(t, tc);
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (t.degrees[j] != 2) continue;
    EXPECT_EQ(t.at(j, minus_one), Cyclotomic::rational(-2));
    // all of it lands on the sign character of the center
    int sign = tc.values[0][1] == Cyclotomic::rational(-1) ? 0 : 1;
    EXPECT_EQ(res(sign, j), 2);
    EXPECT_EQ(res(1 - sign, j), 0);
  }
}

TEST(Characters, TwistedKleinFourHasOneDegreeTwo) {
  auto k4 = direct_product(cyclic_group(2), cyclic_group(2));
  auto t = twisted_character_table(k4, klein_form());
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t.degrees[0], 2);
  EXPECT_EQ(table_defect(t), "");
  EXPECT_EQ(oracle::regular_classes(k4, k4.whole(), klein_form()), 1u);
}

TEST(Characters, RandomTwistedTablesCountRegularClasses) {
  std::mt19937 rng(99);
  for (const auto& s : oracle::medium_groups()) {
    if (s.g.order() > 12) continue;
    SCOPED_TRACE(s.name);
    auto gamma = oracle::random_cocycle(s.g, rng, true, s.factor);
    auto t = twisted_character_table(s.g, gamma);
    EXPECT_EQ(table_defect(t), "");
    EXPECT_EQ(t.size(), oracle::regular_classes(s.g, s.g.whole(), gamma));
  }
}

TEST(Characters, RestrictionIsTransitiveOnChains) {
  std::mt19937 rng(4);
  auto groups = oracle::medium_groups();
  for (int trial = 0; trial < 20; ++trial) {
    const auto& s = groups[rng() % groups.size()];
    auto h = oracle::random_subgroup(s.g, rng);
    auto k = s.g.generate({h[rng() % h.size()]});
    auto gamma = Cocycle::trivial(s.g.order());
    auto tg = subgroup_table(s.g, s.g.whole(), gamma), th = subgroup_table(s.g, h, gamma),
         tk = subgroup_table(s.g, k, gamma);
    EXPECT_EQ(restriction_matrix(th, tk) * restriction_matrix(tg, th), restriction_matrix(tg, tk)) << s.name;
  }
}

TEST(Characters, ConjugationPermutesIrreducibles) {
  auto d4 = dihedral_group(4);
  auto gamma = Cocycle::trivial(8);
  for (int a = 1; a < 8; ++a) {
    auto h = d4.generate({a});
    for (int w = 0; w < 8; ++w) {
      auto th = subgroup_table(d4, h, gamma), tk = subgroup_table(d4, d4.conjugate(w, h), gamma);
      auto m = conjugation_matrix(d4, w, th, tk, gamma);
      for (std::size_t j = 0; j < m.cols(); ++j) {
        Integer col = 0;
        for (std::size_t i = 0; i < m.rows(); ++i) col += m(i, j);
        EXPECT_EQ(col, 1);
      }
    }
  }
}

TEST(Characters, LyingOverBasisOnTheKleinFour) {
  // {±1, ±t} acting linearly; N = {1, t}, iota trivial: two of four characters
  Lattice lat(IntMatrix{{2, 0}, {0, 2}});
  AffineTorusMap m{IntMatrix{{-1, 0}, {0, -1}}, {0, 0}}, t{IntMatrix{{1, 0}, {0, -1}}, {0, 0}};
  auto g = close_affine_group(lat, {m, t}, {"-1", "t"}, 64);
  int ti = *find_element(g, t);
  auto n = g.generate({ti});
  auto gamma = Cocycle::trivial(4);
  auto tab = subgroup_table(g, g.whole(), gamma);
  EXPECT_EQ(lying_over_basis(g, tab, n, {}, gamma).size(), 2u);
  EXPECT_EQ(lying_over_basis(g, tab, n, {{ti, Rational(1, 2)}}, gamma).size(), 2u);
  EXPECT_THROW(lying_over_basis(g, tab, n, {{ti, Rational(1, 3)}}, gamma), InvariantViolation);
}

TEST(Characters, TableTooLargeIsAClosureError) {
  auto g = dihedral_group(8);
  EXPECT_THROW(character_table(g, 8), GroupClosureError);
}
