#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace bredonk;

namespace {

Lattice two_torus() { return Lattice(IntMatrix{{2, 0}, {0, 2}}); }

HyperplaneFamily line(const Lattice& lat, IntVec normal) {
  return HyperplaneFamily::make(lat, RatVec(normal.begin(), normal.end()), {Rational(0)}, Rational(2));
}

void expect_sound(const EquivariantComplex& x) {
  for (std::size_t k = 2; k <= x.dim; ++k) EXPECT_TRUE((x.boundary_matrix(k - 1) * x.boundary_matrix(k)).is_zero());
  EXPECT_EQ(x.euler_characteristic(), 0);
}

}  // namespace

TEST(Arrangement, FourLinesThroughTheOrigin) {
  // x=0, y=0, x=y, x=-y on R^2/2Z^2 meet at (0,0) and (1,1); the diagonals
  // are cut twice, the axes once.
  auto lat = two_torus();
  auto x = build_torus_complex(lat, {line(lat, {1, 0}), line(lat, {0, 1}), line(lat, {1, -1}), line(lat, {1, 1})});
  EXPECT_EQ(x.count(0), 2u);
  EXPECT_EQ(x.count(1), 6u);
  EXPECT_EQ(x.count(2), 4u);
  expect_sound(x);
}

TEST(Arrangement, CellularHomologyOfTheTorus) {
  auto lat = two_torus();
  auto x = build_torus_complex(lat, {line(lat, {1, -1}), line(lat, {1, 1})});
  auto h = oracle::cellular_cohomology(x);
  ASSERT_EQ(h.size(), 3u);
  EXPECT_EQ(h[0].rank, 1u);
  EXPECT_EQ(h[1].rank, 2u);
  EXPECT_EQ(h[2].rank, 1u);
  for (const auto& g : h) EXPECT_TRUE(g.torsion.empty());
}

TEST(Arrangement, CircleWithMarkedPoints) {
  Lattice lat(IntMatrix{{6}});
  auto f = HyperplaneFamily::make(lat, RatVec{Rational(1)}, {Rational(0), Rational(3)}, Rational(6));
  auto x = build_torus_complex(lat, {f});
  EXPECT_EQ(x.count(0), 2u);
  EXPECT_EQ(x.count(1), 2u);
  expect_sound(x);
}

TEST(Arrangement, EveryPresetComplexIsWcw) {
  for (const auto& p : preset_catalog()) {
    SCOPED_TRACE(p.name);
    auto l = oracle::load(p.make());
    EXPECT_EQ(w_cw_defect(l.x), "");
    EXPECT_EQ(equivariance_defect(l.x), "");
    expect_sound(l.x);
    // stabilizers recorded on cells match the action table
    for (std::size_t k = 0; k <= l.x.dim; ++k)
      for (std::size_t c = 0; c < l.x.count(k); ++c) {
        Subgroup st;
        for (int w = 0; w < l.g->order(); ++w)
          if (l.x.action[k][w][c].cell == c) st.push_back(w);
        EXPECT_EQ(st, l.x.stabilizers[k][c]);
      }
  }
}

TEST(Arrangement, OrbitCountsOfTheFullWeylGroupCase) {
  auto l = oracle::load(preset("sp4-case1"));
  EXPECT_EQ(l.x.orbit_count(0), 3u);
  EXPECT_EQ(l.x.orbit_count(1), 3u);
  EXPECT_EQ(l.x.orbit_count(2), 1u);
}

TEST(Arrangement, MirrorOfAReflection) {
  auto lat = two_torus();
  AffineTorusMap t{IntMatrix{{1, 0}, {0, -1}}, {0, 0}};
  auto f = mirror_family(t, lat);
  ASSERT_TRUE(f);
  EXPECT_EQ(f->offsets.size(), 2u);  // y = 0 and y = 1
  AffineTorusMap glide{IntMatrix{{1, 0}, {0, -1}}, {1, 0}};
  EXPECT_FALSE(mirror_family(glide, lat));
}

TEST(Arrangement, NonCellularActionIsRejected) {
  // a glide by half a cell does not map the grid cells to cells
  auto lat = two_torus();
  auto g = std::make_shared<const GroupData>(
      close_affine_group(lat, {{IntMatrix{{1, 0}, {0, -1}}, {1, 0}}}, {"g"}, 64));
  auto x = build_torus_complex(lat, {line(lat, {1, 0}), line(lat, {0, 1})});
  EXPECT_THROW(install_action(x, g), NonCellularError);
}

TEST(Arrangement, SubdivisionKeepsCohomology) {
  auto l = oracle::load(preset("klein-bottle"));
  auto b = install_action(barycentric_subdivision(l.x), l.g);
  EXPECT_EQ(w_cw_defect(b), "");
  auto h1 = oracle::cellular_cohomology(l.x), h2 = oracle::cellular_cohomology(b);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(h1[k].rank, h2[k].rank);
    EXPECT_TRUE(h1[k].torsion == h2[k].torsion);
  }
  EXPECT_EQ(oracle::str(oracle::quotient_cohomology(l.x)), oracle::str(oracle::quotient_cohomology(b)));
}
