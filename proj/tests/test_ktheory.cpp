#include <gtest/gtest.h>

#include "bredonk/bredonk.hpp"

using namespace bredonk;

namespace {

AbelianGroupInv Z(std::size_t r, std::vector<long> t = {}) {
  std::vector<Integer> tt(t.begin(), t.end());
  return AbelianGroupInv::from_cyclic(r, tt);
}

}  // namespace

TEST(KTheory, E2PageOfASurface) {
  std::vector<AbelianGroupInv> h{Z(1), Z(2), Z(1)};
  auto page = e2_page(h);
  // n = 2: q = -3 only (q + n odd), p = 1..3 carries H^{3-p}
  ASSERT_EQ(page.size(), 3u);
  for (const auto& e : page) EXPECT_EQ(e.q, -3);
  EXPECT_EQ(e2_entry(page, 1, -3), Z(1));
  EXPECT_EQ(e2_entry(page, 2, -3), Z(2));
  EXPECT_EQ(e2_entry(page, 3, -3), Z(1));
  EXPECT_TRUE(e2_entry(page, 1, -2).trivial());
}

TEST(KTheory, E2PageOfACircle) {
  auto page = e2_page({Z(3), Z(0)});
  // n = 1: q = -2 only; H^1 = 0 drops out
  ASSERT_EQ(page.size(), 1u);
  EXPECT_EQ(page[0].p, 2);
  EXPECT_EQ(page[0].q, -2);
  EXPECT_EQ(page[0].group, Z(3));
}

TEST(KTheory, ExactInLowDimension) {
  auto k = k_groups({Z(1), Z(1), Z(0, {2})});
  ASSERT_TRUE(k.exact);
  EXPECT_EQ(*k.k0, Z(1, {2}));
  EXPECT_EQ(*k.k1, Z(1));
  EXPECT_EQ(k.rank0, 1u);
  EXPECT_EQ(k.rank1, 1u);

  auto c = k_groups({Z(2), Z(0)});
  EXPECT_EQ(*c.k0, Z(2));
  EXPECT_EQ(*c.k1, Z(0));
}

TEST(KTheory, RationalOnlyInDimensionThree) {
  auto k = k_groups({Z(1), Z(3), Z(3), Z(1, {2})});
  EXPECT_FALSE(k.exact);
  EXPECT_FALSE(k.k0);
  EXPECT_EQ(k.rank0, 4u);
  EXPECT_EQ(k.rank1, 4u);
  EXPECT_FALSE(k.caveat.empty());
}

TEST(KTheory, CrossCheckNamesTheDegree) {
  auto ok = cross_check({Z(1), Z(2)}, {Z(1), Z(2)});
  EXPECT_TRUE(ok.ok);
  auto bad = cross_check({Z(1), Z(2)}, {Z(1), Z(1, {2})});
  EXPECT_FALSE(bad.ok);
  EXPECT_NE(bad.detail.find("degree 1"), std::string::npos);
  EXPECT_FALSE(cross_check({Z(1)}, {Z(1), Z(0)}).ok);
}

TEST(KTheory, PresetValues) {
  auto k8 = run_scenario(preset("sp4-case8"), RunOptions{}).k;
  EXPECT_EQ(*k8.k0, Z(2));
  EXPECT_EQ(*k8.k1, Z(2));
  auto k3 = run_scenario(preset("sp4-case3"), RunOptions{}).k;
  EXPECT_EQ(k3.rank0, 1u);
  EXPECT_EQ(k3.rank1, 1u);
  auto ds = run_scenario(preset("discrete-series-1"), RunOptions{}).k;
  EXPECT_EQ(*ds.k0, Z(2));
  EXPECT_EQ(*ds.k1, Z(2));
}
