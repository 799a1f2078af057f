#include <gtest/gtest.h>

#include <cmath>

#include "lpgeom/shadow.hpp"
#include "lpgeom/rng.hpp"
#include "test_util.hpp"

using namespace lpgeom;
using namespace lpgeom::test;

namespace {

const Direction kE2(make_vec({0, 1}));

}  // namespace

TEST(ParallelChord, ZeroAndUnitSpeed) {
  const auto k = random_polytope(2, 9, 3);
  const auto zero = make_parallel_chord(k, kE2, SpeedFunction::constant(0.0));
  EXPECT_EQ(zero.valid_lo, -2.0);
  EXPECT_EQ(zero.valid_hi, 2.0);
  EXPECT_LT(hausdorff_distance(body_at(zero, 1.3), k), 1e-12);
  const auto one = make_parallel_chord(k, kE2, SpeedFunction::constant(1.0));
  EXPECT_EQ(one.valid_hi, 2.0);
  EXPECT_LT(hausdorff_distance(body_at(one, 0.7), translate(k, make_vec({0, 0.7}))), 1e-12);
}

TEST(ParallelChord, SteinerValidOnUnitInterval) {
  const auto s = make_parallel_chord(unit_triangle(), kE2, steiner_speed(unit_triangle(), kE2));
  EXPECT_LE(s.valid_lo, 0.0);
  EXPECT_GE(s.valid_hi, 1.0);
}

TEST(ParallelChord, InvalidWindow) {
  EXPECT_THROW(make_parallel_chord(cube(2), kE2, SpeedFunction::constant(0.0), -1.0), GeometryError);
}

TEST(SteinerSpeed, Values) {
  const auto sym = make_parallel_chord(cube(2), kE2, steiner_speed(cube(2), kE2));
  for (double x : {-0.5, 0.0, 0.9}) EXPECT_NEAR(speed_at(sym, make_vec({x})), 0.0, 1e-12);
  const auto tri = make_parallel_chord(unit_triangle(), kE2, SpeedFunction::steiner());
  for (double x : {0.0, 0.3, 1.0}) EXPECT_NEAR(speed_at(tri, make_vec({x})), x - 1.0, 1e-12);
  const auto k = random_polytope(2, 10, 4);
  const auto s = make_parallel_chord(k, kE2, SpeedFunction::steiner());
  const auto pr = profiles(k, kE2);
  for (std::size_t i = 0; i < pr.nodes.size(); ++i)
    EXPECT_NEAR(speed_at(s, pr.nodes[i]), -(pr.lower[i] + pr.upper[i]), 1e-12);
}

TEST(BodyAt, SteinerIdentities) {
  for (int n : {2, 3}) {
    for (std::uint64_t seed : {5, 6, 7}) {
      const auto k = random_polytope(n, 5 * n, seed);
      Vec dir = Vec::Zero(n);
      dir[n - 1] = 1.0;
      dir[0] = 0.3;
      const Direction v(dir);
      const auto s = make_parallel_chord(k, v, SpeedFunction::steiner());
      EXPECT_TRUE(same_vertex_set(body_at(s, 0.0), k.poly().vertices, 0.0));
      EXPECT_LT(hausdorff_distance(body_at(s, 1.0), reflect(k, v)), 1e-9);
      EXPECT_LT(hausdorff_distance(body_at(s, 0.5), steiner_symmetrize(k, v)), 1e-9);
    }
  }
}

TEST(BodyAt, OutsideValidityThrows) {
  // a tent speed lifts the middle of the bottom edge, which makes it concave
  const auto s = make_parallel_chord(cube(2), kE2, SpeedFunction::piecewise_linear({{-1, 0}, {0, 1}, {1, 0}}));
  EXPECT_FALSE(convexity_scan(s, 1.5));
  try {
    body_at(s, 1.5);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_convex_at_t);
  }
}

TEST(ConvexityScan, ConstantAndSteiner) {
  const auto c = make_parallel_chord(random_polytope(2, 8, 9), kE2, SpeedFunction::constant(3.0));
  for (double t : {-2.0, 0.0, 1.7}) EXPECT_TRUE(convexity_scan(c, t));
  const auto k = random_polytope(3, 14, 10);
  const auto s = make_parallel_chord(k, Direction(make_vec({0.2, -0.1, 1})), SpeedFunction::steiner());
  for (double t = 0.0; t <= 1.0; t += 0.125) EXPECT_TRUE(convexity_scan(s, t));
}

TEST(ConvexityScan, TentOnSquareBreaksAtPositiveT) {
  const auto s = make_parallel_chord(cube(2), kE2, SpeedFunction::piecewise_linear({{-1, 0}, {0, 1}, {1, 0}}));
  // the lower edge g + t beta turns concave as soon as t > 0
  EXPECT_TRUE(convexity_scan(s, 0.0));
  EXPECT_FALSE(convexity_scan(s, 0.1));
  EXPECT_NEAR(s.valid_hi, 0.0, 1e-9);
}

TEST(VolumeAlong, Constant) {
  const auto k = random_polytope(2, 9, 27);
  const auto s = make_parallel_chord(k, kE2, SpeedFunction::steiner());
  const auto vols = volume_along(s, {0.0, 0.5, 1.0});
  for (double v : vols) EXPECT_NEAR(v, volume(k), 1e-9 * volume(k));
  const auto tr = volume_along(make_parallel_chord(k, kE2, SpeedFunction::constant(1.0)), {-1.0, 0.3, 2.0});
  for (double v : tr) EXPECT_NEAR(v, volume(k), 1e-9 * volume(k));
  const auto k3 = random_polytope(3, 12, 27);
  const auto r = make_parallel_chord(k3, Direction(make_vec({0, 0, 1})),
                                     SpeedFunction::scaled_steiner(0.6, make_vec({0.2, -0.1}), 0.05));
  for (double t : {0.0, 0.4, 0.9}) {
    if (!r.valid_at(t)) continue;
    EXPECT_NEAR(volume(body_at(r, t)), volume(k3), 1e-9 * volume(k3));
  }
}

TEST(ChordLengths, PreservedAlongMovement) {
  const auto k = random_polytope(2, 9, 33);
  const auto s = make_parallel_chord(k, kE2, SpeedFunction::scaled_steiner(0.5, make_vec({0.3}), 0.1));
  const auto pr0 = profiles(k, kE2);
  const auto kt = body_at(s, 0.8);
  const auto prt = profiles(kt, kE2);
  for (double x = -0.5; x <= 0.5; x += 0.1) {
    const Vec xp = make_vec({x});
    const auto [g0, f0] = pr0.chord(xp);
    const auto [gt, ft] = prt.chord(xp);
    EXPECT_NEAR(ft - gt, f0 - g0, 1e-9);
  }
}

TEST(GeneralAlpha, HullOfMovedVertices) {
  const auto k = unit_triangle();
  const auto s = make_shadow_system(k, kE2, SpeedFunction::general_alpha({0.0, 1.0, -1.0}));
  const auto kt = body_at(s, 0.5);
  EXPECT_GT(volume(kt), 0.0);
  for (const auto& x : kt.poly().vertices) EXPECT_TRUE(contains(kt, x));
  EXPECT_THROW(make_shadow_system(k, kE2, SpeedFunction::general_alpha({1.0})), GeometryError);
}
