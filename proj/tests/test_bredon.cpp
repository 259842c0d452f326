#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace bredonk;

namespace {

// Rank of W-invariant cochains for a system whose value at a cell is the
// representation group of its stabilizer: every orbit with an
// orientation-preserving stabilizer contributes one copy of R(W_c).
std::vector<std::size_t> orbit_rank_oracle(const EquivariantComplex& x) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k <= x.dim; ++k) {
    std::size_t r = 0;
    auto lab = x.orbit_labels(k);
    std::set<std::size_t> done;
    for (std::size_t c = 0; c < x.count(k); ++c) {
      if (!done.insert(lab[c]).second) continue;
      bool preserved = true;
      for (int w : x.stabilizers[k][c]) preserved = preserved && x.action[k][w][c].sign == 1;
      if (preserved) r += oracle::classes(*x.group, x.stabilizers[k][c]).size();
    }
    out.push_back(r);
  }
  return out;
}

AbelianGroupInv Z(std::size_t r, std::vector<long> t = {}) {
  std::vector<Integer> tt(t.begin(), t.end());
  return AbelianGroupInv::from_cyclic(r, tt);
}

}  // namespace

TEST(Bredon, FullWeylGroupCaseInvariantRanks) {
  auto l = oracle::load(preset("sp4-case1"));
  auto b = build_blowup(l.x, l.spec, l.gamma);
  auto sys = build_system(SystemKind::twisted, b.Xt, l.gamma);
  auto ranks = invariant_cochain_complex(sys).ranks();
  EXPECT_EQ(ranks, orbit_rank_oracle(b.Xt));
  EXPECT_EQ(ranks, (std::vector<std::size_t>{5, 4, 1}));
  // Euler characteristic of the invariant complex equals that of H = (Z^2, 0, 0)
  EXPECT_EQ(static_cast<long>(ranks[0]) - static_cast<long>(ranks[1]) + static_cast<long>(ranks[2]), 2);
}

TEST(Bredon, InvariantRanksMatchOrbitCountsOnUntwistedPresets) {
  for (const auto& p : preset_catalog()) {
    auto l = oracle::load(p.make());
    if (!l.gamma.is_trivial()) continue;
    auto b = build_blowup(l.x, l.spec, l.gamma);
    auto sys = build_system(SystemKind::twisted, b.Xt, l.gamma);
    EXPECT_EQ(invariant_cochain_complex(sys).ranks(), orbit_rank_oracle(b.Xt)) << p.name;
  }
}

TEST(Bredon, StalkRanksInTheFullWeylGroupCase) {
  auto l = oracle::load(preset("sp4-case1"));
  auto b = build_blowup(l.x, l.spec, l.gamma);
  auto w = build_system(SystemKind::twisted, b.Xt, l.gamma);
  auto r = build_system(SystemKind::lying_over, b.X, l.gamma, &b);
  // a blow-up vertex fixed by exactly one reflection carries R({1,t}) = Z^2
  bool found = false;
  for (std::size_t c = 0; c < b.Xt.count(0); ++c)
    if (b.Xt.stabilizers[0][c].size() == 2) {
      EXPECT_EQ(w.rank(0, c), 2u);
      found = true;
    }
  EXPECT_TRUE(found);
  // at the origin W' is all of W_0, so only the trivial representation lies over 1
  std::size_t origin = 0;
  for (std::size_t c = 0; c < b.X.count(0); ++c)
    if (std::all_of(b.X.cells[0][c].vertices[0].begin(), b.X.cells[0][c].vertices[0].end(),
                    [](const Rational& q) { return q == 0; }))
      origin = c;
  EXPECT_EQ(b.X.stabilizers[0][origin].size(), 8u);
  EXPECT_EQ(r.rank(0, origin), 1u);
}

TEST(Bredon, TrivialGroupGivesCellularCohomology) {
  auto l = oracle::load(preset("sp4-case8"));
  auto h = bredon_cohomology(build_system(SystemKind::constant, l.x, l.gamma));
  auto ref = oracle::cellular_cohomology(l.x);
  ASSERT_EQ(h.size(), ref.size());
  for (std::size_t k = 0; k < h.size(); ++k) EXPECT_TRUE(oracle::same(ref[k], h[k]));
  EXPECT_EQ(h, (std::vector<AbelianGroupInv>{Z(1), Z(2), Z(1)}));
}

TEST(Bredon, FreeActionsGiveQuotientCohomology) {
  for (const char* name : {"klein-bottle", "discrete-series-2", "discrete-series-3", "dim1-free"}) {
    auto l = oracle::load(preset(name));
    auto h = bredon_cohomology(build_system(SystemKind::constant, l.x, l.gamma));
    auto q = oracle::quotient_cohomology(l.x);
    ASSERT_EQ(h.size(), q.size());
    for (std::size_t k = 0; k < h.size(); ++k) EXPECT_TRUE(oracle::same(q[k], h[k])) << name << " degree " << k;
  }
}

TEST(Bredon, KleinBottleHasTorsionInDegreeTwo) {
  auto l = oracle::load(preset("klein-bottle"));
  auto h = bredon_cohomology(build_system(SystemKind::constant, l.x, l.gamma));
  EXPECT_EQ(h, (std::vector<AbelianGroupInv>{Z(1), Z(1), Z(0, {2})}));
}

TEST(Bredon, SystemsAreFunctorial) {
  for (const char* name : {"sp4-case1", "sp4-case4", "dim1-case-c", "twisted-klein-four"}) {
    auto l = oracle::load(preset(name));
    auto b = build_blowup(l.x, l.spec, l.gamma);
    EXPECT_EQ(system_defect(build_system(SystemKind::constant, l.x, l.gamma)), "") << name;
    EXPECT_EQ(system_defect(build_system(SystemKind::twisted, b.Xt, l.gamma)), "") << name;
    EXPECT_EQ(system_defect(build_system(SystemKind::lying_over, b.X, l.gamma, &b)), "") << name;
  }
}

TEST(Bredon, InvariantDifferentialSquaresToZero) {
  auto l = oracle::load(preset("sp4-case2"));
  auto b = build_blowup(l.x, l.spec, l.gamma);
  auto c = invariant_cochain_complex(build_system(SystemKind::twisted, b.Xt, l.gamma));
  ASSERT_EQ(c.differential.size(), 3u);
  EXPECT_TRUE((c.differential[1] * c.differential[0]).is_zero());
  EXPECT_TRUE((c.full_coboundary[1] * c.full_coboundary[0]).is_zero());
}

TEST(Bredon, SubdivisionDoesNotChangeCohomology) {
  for (const char* name : {"sp4-case3", "dim1-case-b"}) {
    auto l = oracle::load(preset(name));
    auto b = build_blowup(l.x, l.spec, l.gamma);
    auto h = bredon_cohomology(build_system(SystemKind::twisted, b.Xt, l.gamma));
    auto bx = install_action(barycentric_subdivision(l.x), l.g);
    auto bb = build_blowup(bx, l.spec, l.gamma);
    EXPECT_EQ(bredon_cohomology(build_system(SystemKind::twisted, bb.Xt, l.gamma)), h) << name;
    EXPECT_EQ(bredon_cohomology(build_system(SystemKind::lying_over, bb.X, l.gamma, &bb)), h) << name;
  }
}

TEST(Bredon, LyingOverNeedsTheBlowup) {
  auto l = oracle::load(preset("sp4-case6"));
  EXPECT_ANY_THROW(build_system(SystemKind::lying_over, l.x, l.gamma, nullptr));
}
