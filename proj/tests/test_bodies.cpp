#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lpgeom/body.hpp"
#include "lpgeom/lp.hpp"
#include "lpgeom/quadrature.hpp"
#include "lpgeom/rng.hpp"
#include "test_util.hpp"

using namespace lpgeom;
using namespace lpgeom::test;

TEST(Hull, DropsInteriorPoint) {
  const auto k = poly({{1, 1}, {-1, 1}, {-1, -1}, {1, -1}, {0, 0}});
  EXPECT_TRUE(same_vertex_set(k, points({{1, 1}, {-1, 1}, {-1, -1}, {1, -1}})));
}

TEST(Hull, TriangleIsItsOwnHull) {
  EXPECT_TRUE(same_vertex_set(unit_triangle(), points({{0, 0}, {1, 0}, {0, 1}})));
}

TEST(Hull, CubeWithInteriorCloud) {
  auto pts = cube(3).poly().vertices;
  Rng rng(7);
  std::vector<Vec> extra;
  for (int i = 0; i < 100; ++i) {
    Vec x(3);
    for (int j = 0; j < 3; ++j) x[j] = rng.uniform(-0.99, 0.99);
    extra.push_back(x);
  }
  pts.insert(pts.end(), extra.begin(), extra.end());
  const auto k = ConvexBody::from_vertices(pts);
  EXPECT_EQ(k.poly().vertices.size(), 8u);
  for (const auto& x : extra) EXPECT_TRUE(contains(k, x));
}

TEST(Hull, DegenerateInputThrows) {
  try {
    poly({{0, 0}, {1, 1}, {2, 2}});
    FAIL() << "collinear points accepted";
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_input);
  }
}

TEST(Convert, SquareToHalfspaces) {
  const auto h = cube(2).hpoly();
  ASSERT_EQ(h.normals.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(h.offsets[i], 1.0, 1e-12);
    EXPECT_NEAR(h.normals[i].cwiseAbs().maxCoeff(), 1.0, 1e-12);
  }
}

TEST(Convert, SimplexFromHalfspaces) {
  const auto k = ConvexBody::from_halfspaces(points({{-1, 0}, {0, -1}, {1, 1}}), {0.0, 0.0, 1.0});
  EXPECT_TRUE(same_vertex_set(k, points({{0, 0}, {1, 0}, {0, 1}})));
}

TEST(Convert, RoundTripRandomPolygon) {
  const auto k = random_polytope(2, 12, 12);
  const auto h = convert(k, Representation::hpoly);
  EXPECT_EQ(h.representation(), Representation::hpoly);
  const auto hp = h.hpoly();
  const auto back = convert(ConvexBody::from_halfspaces(hp.normals, hp.offsets), Representation::vpoly);
  EXPECT_TRUE(same_vertex_set(back, k.poly().vertices, 1e-9));
}

TEST(Support, ClosedForms) {
  EXPECT_NEAR(support(cube(2), make_vec({1, 1})), 2.0, 1e-12);
  const auto y = make_vec({0.3, -1.2, 0.4});
  EXPECT_NEAR(support(ConvexBody::ball(Vec::Zero(3), 1.0), y), y.norm(), 1e-12);
}

TEST(Support, MatchesLinearProgram) {
  const auto k = random_polytope(2, 10, 3);
  const auto y = make_vec({0.3, -0.7});
  // max <y, x> s.t. H x <= b with x = x+ - x- split to keep x >= 0
  const auto h = k.hpoly();
  Mat A(h.normals.size(), 4);
  Vec b(h.normals.size());
  for (std::size_t i = 0; i < h.normals.size(); ++i) {
    A.row(i) << h.normals[i][0], h.normals[i][1], -h.normals[i][0], -h.normals[i][1];
    b[i] = h.offsets[i];
  }
  Vec c(4);
  c << y[0], y[1], -y[0], -y[1];
  const auto res = lp_maximize(A, b, c);
  ASSERT_EQ(res.status, LpResult::Status::optimal);
  EXPECT_NEAR(support(k, y), res.objective, 1e-9);
}

TEST(Gauge, ClosedForms) {
  EXPECT_NEAR(gauge(cube(2), make_vec({2, 0})), 2.0, 1e-12);
  EXPECT_EQ(gauge(cube(2), Vec::Zero(2)), 0.0);
}

TEST(Gauge, MatchesMembershipBisection) {
  const auto k = random_polytope(3, 14, 5);
  ASSERT_TRUE(origin_interior(k));
  Rng rng(55);
  for (int i = 0; i < 10; ++i) {
    const Vec x = rng.unit_vector(3) * rng.uniform(0.1, 3.0);
    double lo = 0.0, hi = 1e3;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (contains(k, x / mid, 0.0) ? hi : lo) = mid;
    }
    EXPECT_NEAR(gauge(k, x), hi, 1e-9 * std::max(1.0, hi));
  }
}

TEST(Volume, ClosedForms) {
  EXPECT_NEAR(volume(cube(3)), 8.0, 1e-12);
  EXPECT_NEAR(volume(ConvexBody::ball(Vec::Zero(2), 1.0)), std::numbers::pi, 1e-12);
}

TEST(Volume, MatchesMonteCarlo) {
  const auto k = random_polytope(2, 9, 11);
  const auto [lo, hi] = bounding_box(k);
  const auto mc = mc_integral([&](const Vec& x) { return contains(k, x); }, lo, hi,
                              [](const Vec&) { return 1.0; }, 400000, 11);
  EXPECT_LE(std::abs(volume(k) - mc.value), 3.0 * mc.error);
}

TEST(Barycenter, ClosedForms) {
  EXPECT_LT(barycenter(cube(3)).norm(), 1e-12);
  const Vec b = barycenter(unit_triangle());
  EXPECT_NEAR(b[0], 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(b[1], 1.0 / 3.0, 1e-12);
}

TEST(Barycenter, MatchesMonteCarlo) {
  const auto k = random_polytope(2, 9, 2);
  const auto [lo, hi] = bounding_box(k);
  const Vec b = barycenter(k);
  const double vol = volume(k);
  for (int j = 0; j < 2; ++j) {
    const auto m = mc_integral([&](const Vec& x) { return contains(k, x); }, lo, hi,
                               [j](const Vec& x) { return x[j]; }, 400000, 2, j);
    EXPECT_LE(std::abs(b[j] - m.value / vol), 3.0 * m.error / vol + 1e-12);
  }
}

TEST(Polar, SquareGivesCrossPolytope) {
  const auto k = polar(cube(2));
  EXPECT_TRUE(same_vertex_set(k, points({{1, 0}, {-1, 0}, {0, 1}, {0, -1}})));
  EXPECT_NEAR(volume(k), 2.0, 1e-12);
}

TEST(Polar, BallIsSelfPolar) {
  const auto k = polar(ConvexBody::ball(Vec::Zero(3), 1.0));
  ASSERT_TRUE(k.is_ball());
  EXPECT_NEAR(k.as_ball().radius, 1.0, 1e-12);
}

TEST(Polar, IntervalAboutOffCenterPoint) {
  // K - z = [-3/2, 1/2], whose polar is [-2/3, 2]; polar(K, z) sits at z
  const auto k = translate(polar(cube(1), make_vec({0.5})), make_vec({-0.5}));
  const auto [lo, hi] = bounding_box(k);
  EXPECT_NEAR(lo[0], -2.0 / 3.0, 1e-12);
  EXPECT_NEAR(hi[0], 2.0, 1e-12);
  EXPECT_NEAR(volume(k), 8.0 / 3.0, 1e-12);
}

TEST(Polar, CenterOutsideThrows) {
  try {
    polar(cube(2), make_vec({3, 0}));
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::center_not_interior);
  }
}

TEST(Minkowski, Intervals) {
  const auto s = minkowski_sum(cube(1), cube(1));
  EXPECT_NEAR(volume(s), 4.0, 1e-12);
  EXPECT_NEAR(support(s, make_vec({1})), 2.0, 1e-12);
  EXPECT_TRUE(same_vertex_set(minkowski_diff(cube(2), cube(2)), cube(2, 2.0).poly().vertices));
}

TEST(Minkowski, SupportAdditivity) {
  const auto k = random_polytope(2, 8, 4), l = random_polytope(2, 8, 9);
  const auto s = minkowski_sum(k, l);
  for (int i = 0; i < 64; ++i) {
    const double a = 2.0 * std::numbers::pi * i / 64;
    const auto u = make_vec({std::cos(a), std::sin(a)});
    EXPECT_NEAR(support(s, u), support(k, u) + support(l, u), 1e-9);
  }
}

TEST(IntersectUnion, IdentityOnEqualBodies) {
  const auto k = random_polytope(2, 8, 4);
  EXPECT_LT(hausdorff_distance(intersect(k, k), k), 1e-9);
  EXPECT_LT(hausdorff_distance(conv_union(k, k), k), 1e-9);
}

TEST(IntersectUnion, SquareAndRotatedSquareGiveOctagon) {
  const auto sq = cube(2);
  const auto rot = linear_image(sq, rotation2(std::numbers::pi / 4));
  const auto oct = intersect(sq, rot);
  ASSERT_EQ(oct.poly().vertices.size(), 8u);
  const double r = oct.poly().vertices.front().norm();
  for (const auto& v : oct.poly().vertices) EXPECT_NEAR(v.norm(), r, 1e-9);
  // regular octagon with inradius 1
  EXPECT_NEAR(volume(oct), 8.0 * std::tan(std::numbers::pi / 8), 1e-9);
}

TEST(IntersectUnion, CrossOfSegmentsThroughHull) {
  const auto a = ConvexBody::from_vertices(points({{-1, 0}, {1, 0}, {0, 0.5}}));
  const auto b = ConvexBody::from_vertices(points({{0, -1}, {0, 1}, {0.5, 0}}));
  // interior points are added to keep both inputs full-dimensional
  const auto u = conv_union(a, b);
  EXPECT_TRUE(same_vertex_set(u, points({{1, 0}, {-1, 0}, {0, 1}, {0, -1}})));
}

TEST(Reflect, Triangle) {
  const Direction v(make_vec({0, 1}));
  EXPECT_TRUE(same_vertex_set(reflect(unit_triangle(), v), points({{0, 0}, {1, 0}, {0, -1}})));
  EXPECT_LT(hausdorff_distance(reflect(cube(2), v), cube(2)), 1e-12);
  const auto k = random_polytope(2, 9, 31);
  EXPECT_TRUE(same_vertex_set(reflect(reflect(k, v), v), k.poly().vertices, 1e-12));
}

TEST(Profiles, SquareAndTriangle) {
  const Direction v(make_vec({0, 1}));
  const auto ps = profiles(cube(2), v);
  const auto pt = profiles(unit_triangle(), v);
  for (double x : {-0.9, 0.0, 0.4}) {
    const auto [g, f] = ps.chord(make_vec({x}));
    EXPECT_NEAR(g, -1.0, 1e-12);
    EXPECT_NEAR(f, 1.0, 1e-12);
  }
  for (double x : {0.1, 0.5, 0.8}) {
    const auto [g, f] = pt.chord(make_vec({x}));
    EXPECT_NEAR(g, 0.0, 1e-12);
    EXPECT_NEAR(f, 1.0 - x, 1e-12);
  }
}

TEST(Profiles, ReconstructRandomPolygon) {
  const auto k = random_polytope(2, 10, 41);
  const Direction v(make_vec({0.6, 0.8}));
  const auto pr = profiles(k, v);
  std::vector<Vec> pts;
  for (std::size_t i = 0; i < pr.nodes.size(); ++i) {
    pts.push_back(pr.basis * pr.nodes[i] + pr.lower[i] * v.unit());
    pts.push_back(pr.basis * pr.nodes[i] + pr.upper[i] * v.unit());
  }
  EXPECT_LT(hausdorff_distance(ConvexBody::from_vertices(pts), k), 1e-9);
}

TEST(Section, CubeAndBall) {
  const auto seg = section(cube(2), Direction(make_vec({0, 1})), 0.0);
  EXPECT_EQ(seg.dim(), 1);
  EXPECT_NEAR(volume(seg), 2.0, 1e-12);
  const auto disk = section(ConvexBody::ball(Vec::Zero(3), 1.0), Direction(make_vec({0, 0, 1})), 0.6);
  ASSERT_TRUE(disk.is_ball());
  EXPECT_NEAR(disk.as_ball().radius, 0.8, 1e-12);
}

TEST(Section, ThinSlabMonteCarlo) {
  const auto k = random_polytope(3, 12, 8);
  const Direction v(make_vec({0, 0, 1}));
  const double s = 0.2, w = 0.01;
  const double area = volume(section(k, v, s));
  const auto [lo, hi] = bounding_box(k);
  Vec lo2 = lo, hi2 = hi;
  lo2[2] = s - w / 2;
  hi2[2] = s + w / 2;
  const auto mc = mc_integral([&](const Vec& x) { return contains(k, x); }, lo2, hi2,
                              [](const Vec&) { return 1.0; }, 400000, 8);
  // slab volume / width tends to the section area; the curvature term is O(w^2)
  EXPECT_LE(std::abs(mc.value / w - area), 3.0 * mc.error / w + 1e-3 * area);
}

TEST(Steiner, TriangleAndInvariance) {
  const Direction v(make_vec({0, 1}));
  const auto s = steiner_symmetrize(unit_triangle(), v);
  EXPECT_NEAR(volume(s), 0.5, 1e-12);
  const auto pr = profiles(s, v);
  for (double x : {0.1, 0.5, 0.9}) {
    const auto [g, f] = pr.chord(make_vec({x}));
    EXPECT_NEAR(f, (1 - x) / 2, 1e-12);
    EXPECT_NEAR(g, -(1 - x) / 2, 1e-12);
  }
  EXPECT_LT(hausdorff_distance(steiner_symmetrize(cube(2), v), cube(2)), 1e-12);
  const auto k = random_polytope(3, 12, 17);
  EXPECT_NEAR(volume(steiner_symmetrize(k, Direction(make_vec({0.3, 0.4, 0.5})))), volume(k), 1e-9 * volume(k));
}
