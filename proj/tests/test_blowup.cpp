#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace bredonk;

namespace {

BlowupResult blowup_of(const std::string& name) {
  auto l = oracle::load(preset(name));
  return build_blowup(l.x, l.spec, l.gamma);
}

std::vector<std::size_t> counts(const EquivariantComplex& x) {
  std::vector<std::size_t> c;
  for (std::size_t k = 0; k <= x.dim; ++k) c.push_back(x.count(k));
  return c;
}

}  // namespace

TEST(Blowup, FullWeylGroupCaseCellCounts) {
  auto b = blowup_of("sp4-case1");
  EXPECT_EQ(counts(b.X), (std::vector<std::size_t>{4, 12, 8}));
  EXPECT_EQ(counts(b.Xt), (std::vector<std::size_t>{16, 20, 8}));
}

TEST(Blowup, CircleOddOrbitSliced) {
  // three sliced points each split in two, the other three stay
  auto b = blowup_of("dim1-case-b");
  EXPECT_EQ(counts(b.Xt), (std::vector<std::size_t>{9, 6}));
}

TEST(Blowup, NothingSlicedIsTheIdentity) {
  for (const char* name : {"sp4-case5", "sp4-case7", "klein-bottle", "dim1-case-a"}) {
    auto b = blowup_of(name);
    EXPECT_EQ(counts(b.X), counts(b.Xt)) << name;
    for (std::size_t k = 0; k <= b.X.dim; ++k)
      for (std::size_t c = 0; c < b.X.count(k); ++c) EXPECT_EQ(b.wprime[k][c].size(), 1u);
  }
}

TEST(Blowup, FiberSizeIsTheIndexOfWprime) {
  // over each X cell the blow-up has |W'_z| cells, permuted simply transitively
  for (const auto& p : preset_catalog()) {
    SCOPED_TRACE(p.name);
    auto l = oracle::load(p.make());
    auto b = build_blowup(l.x, l.spec, l.gamma);
    for (std::size_t k = 0; k <= b.X.dim; ++k) {
      std::vector<std::size_t> fiber(b.X.count(k), 0);
      for (std::size_t c = 0; c < b.Xt.count(k); ++c) ++fiber[b.projection[k][c]];
      for (std::size_t z = 0; z < b.X.count(k); ++z) EXPECT_EQ(fiber[z], b.wprime[k][z].size());
      // W'_z is normal in W_z
      for (std::size_t z = 0; z < b.X.count(k); ++z)
        EXPECT_TRUE(l.g->is_normal(b.wprime[k][z], b.X.stabilizers[k][z]));
    }
  }
}

TEST(Blowup, EveryPresetPassesStructuralChecks) {
  for (const auto& p : preset_catalog()) {
    auto b = blowup_of(p.name);
    for (const auto& c : validate_blowup(b)) EXPECT_TRUE(c.ok) << p.name << ": " << c.name << ": " << c.detail;
  }
}

TEST(Blowup, StabilizerSplitsAsWprimeTimesR) {
  // W_z = W'_z x| W_{z~} with trivial intersection, checked by counting
  for (const auto& p : preset_catalog()) {
    auto b = blowup_of(p.name);
    for (std::size_t k = 0; k <= b.X.dim; ++k)
      for (std::size_t c = 0; c < b.Xt.count(k); ++c) {
        std::size_t z = b.projection[k][c];
        const auto& wz = b.X.stabilizers[k][z];
        const auto& wt = b.Xt.stabilizers[k][c];
        const auto& wp = b.wprime[k][z];
        EXPECT_EQ(wz.size(), wt.size() * wp.size()) << p.name;
        std::vector<int> both;
        std::set_intersection(wt.begin(), wt.end(), wp.begin(), wp.end(), std::back_inserter(both));
        EXPECT_EQ(both, std::vector<int>{0}) << p.name;
      }
  }
}

TEST(Blowup, LocusMustBeFixedByItsReflection) {
  // in {±1, ±t}, hand the line y = 0 to -t, which moves it
  auto l = oracle::load(preset("sp4-case4"));
  auto spec = l.spec;
  spec.loci[0].reflection = *find_element(*l.g, {IntMatrix{{-1, 0}, {0, 1}}, {0, 0}});
  EXPECT_THROW(build_blowup(l.x, spec, l.gamma), InvariantViolation);
}

TEST(Blowup, IotaMustNameASlicedReflection) {
  auto l = oracle::load(preset("sp4-case6"));
  auto spec = l.spec;
  spec.iota = {{0, 0, Rational(1, 2)}};
  EXPECT_THROW(build_blowup(l.x, spec, l.gamma), SchemaError);
  spec.iota = {{spec.loci[0].reflection, 7, Rational(1, 2)}};
  EXPECT_THROW(build_blowup(l.x, spec, l.gamma), SchemaError);
}

TEST(Blowup, IotaOnSlicedComponents) {
  auto s = preset("sp4-case6");
  s.iota = {{{"t", std::nullopt}, 0, Rational(1, 2)}};
  auto l = oracle::load(s);
  auto b = build_blowup(l.x, l.spec, l.gamma);
  bool saw = false;
  for (std::size_t k = 0; k <= b.X.dim; ++k)
    for (std::size_t c = 0; c < b.X.count(k); ++c)
      for (const auto& [v, ph] : b.iota[k][c])
        if (v != 0) {
          saw = true;
          EXPECT_TRUE(ph == Rational(0) || ph == Rational(1, 2));
        }
  EXPECT_TRUE(saw);
  for (const auto& c : validate_blowup(b)) EXPECT_TRUE(c.ok) << c.name << ": " << c.detail;
}
