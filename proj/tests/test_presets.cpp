#include <gtest/gtest.h>

#include <chrono>

#include "oracles.hpp"

using namespace bredonk;

namespace {

AbelianGroupInv Z(std::size_t r, std::vector<long> t = {}) {
  std::vector<Integer> tt(t.begin(), t.end());
  return AbelianGroupInv::from_cyclic(r, tt);
}

}  // namespace

TEST(Presets, Catalog) {
  const auto& cat = preset_catalog();
  EXPECT_EQ(cat.size(), 17u);
  std::size_t sp4 = 0, dim1 = 0;
  for (const auto& p : cat) {
    if (p.name.rfind("sp4-case", 0) == 0) ++sp4;
    if (p.name.rfind("dim1-case-", 0) == 0) ++dim1;
    EXPECT_EQ(p.make().name, p.name);
  }
  EXPECT_EQ(sp4, 8u);
  EXPECT_EQ(dim1, 3u);
  EXPECT_THROW(preset("sp4-case9"), SchemaError);
}

TEST(Presets, GroupOrders) {
  const std::map<std::string, int> order = {
      {"sp4-case1", 8}, {"sp4-case2", 8}, {"sp4-case3", 2}, {"sp4-case4", 4}, {"sp4-case5", 4},
      {"sp4-case6", 2}, {"sp4-case7", 2}, {"sp4-case8", 1}, {"dim1-case-a", 6}, {"dim1-free", 3},
      {"klein-bottle", 2}, {"discrete-series-3", 3}, {"twisted-klein-four", 4}};
  for (const auto& [name, n] : order) EXPECT_EQ(scenario_group(preset(name), 64).order(), n) << name;
}

TEST(Presets, DimensionOneCases) {
  std::map<std::string, std::pair<AbelianGroupInv, AbelianGroupInv>> want = {
      {"dim1-case-a", {Z(3), Z(0)}}, {"dim1-case-b", {Z(2), Z(0)}}, {"dim1-case-c", {Z(1), Z(0)}},
      {"dim1-free", {Z(1), Z(1)}}};
  for (const auto& [name, k] : want) {
    auto r = run_scenario(preset(name), RunOptions{});
    EXPECT_TRUE(r.ok()) << name;
    EXPECT_EQ(*r.k.k0, k.first) << name;
    EXPECT_EQ(*r.k.k1, k.second) << name;
  }
}

TEST(Presets, RemainingPlaneCases) {
  std::map<std::string, std::vector<AbelianGroupInv>> want = {
      {"klein-bottle", {Z(1), Z(1), Z(0, {2})}},
      {"discrete-series-1", {Z(1), Z(2), Z(1)}},
      {"discrete-series-2", {Z(1), Z(2), Z(1)}},
      {"discrete-series-3", {Z(1), Z(2), Z(1)}},
      {"twisted-klein-four", {Z(1), Z(4), Z(0)}},
  };
  for (const auto& [name, h] : want) {
    auto r = run_scenario(preset(name), RunOptions{});
    EXPECT_TRUE(r.ok()) << name;
    EXPECT_EQ(r.blowup->cohomology, h) << name;
  }
}

TEST(Presets, TwistedKleinFourRationalRanksFromTheChernCharacter) {
  // Twisted Chern character: each g contributes the invariants of H*(X^g)
  // under Z(g) acting through h -> gamma(g,h)/gamma(h,g).
  //   g = 1:   H*(T^2)^W = (1, 0)
  //   g = -1:  four points, t acts by -1: nothing
  //   g = ±t:  two circles each, -1 acts by -1 on H^1 and by the twist -1: (0, 2)
  auto r = run_scenario(preset("twisted-klein-four"), RunOptions{});
  EXPECT_EQ(r.k.rank0, 1u);
  EXPECT_EQ(r.k.rank1, 4u);
}

TEST(Presets, RunsAreDeterministic) {
  for (const char* name : {"sp4-case1", "klein-bottle", "dim1-case-c"}) {
    auto a = render_json(run_scenario(preset(name), RunOptions{}));
    auto b = render_json(run_scenario(preset(name), RunOptions{}));
    EXPECT_EQ(a, b) << name;
  }
}

TEST(Presets, FullChecksPassAndStayFast) {
  for (const auto& p : preset_catalog()) {
    RunOptions o;
    o.full = true;
    auto t0 = std::chrono::steady_clock::now();
    auto r = run_scenario(p.make(), o);
    auto s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_LT(s, 10.0) << p.name;
    for (const auto& c : r.checks) EXPECT_TRUE(c.ok) << p.name << ": " << c.name << ": " << c.detail;
  }
}

TEST(Presets, SystemsOptionSelectsSides) {
  RunOptions o;
  o.x_side = false;
  auto r = run_scenario(preset("sp4-case3"), o);
  EXPECT_TRUE(r.blowup);
  EXPECT_FALSE(r.x_side);
  EXPECT_FALSE(r.cross);
  o.x_side = true;
  o.blowup = false;
  r = run_scenario(preset("sp4-case3"), o);
  EXPECT_FALSE(r.blowup);
  EXPECT_TRUE(r.x_side);
  EXPECT_EQ(r.x_side->cohomology, (std::vector<AbelianGroupInv>{Z(1), Z(1), Z(0)}));
}
