#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lpgeom/quadrature.hpp"
#include "lpgeom/rng.hpp"
#include "test_util.hpp"

using namespace lpgeom;
using namespace lpgeom::test;

namespace {

Mat simplex_matrix(std::initializer_list<std::initializer_list<double>> cols) {
  const auto pts = points(cols);
  Mat s(pts.front().size(), pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) s.col(j) = pts[j];
  return s;
}

// tensor Gauss-Kronrod over the unit triangle: x in [0,1], y in [0,1-x]
double triangle_oracle(const Vec& w) {
  auto inner = [&](double x) {
    return integrate_gk([&](double y) { return std::exp(w[0] * x + w[1] * y); }, 0.0, 1.0 - x, 1e-15, 1e-14).value;
  };
  return integrate_gk(inner, 0.0, 1.0, 1e-15, 1e-14).value;
}

}  // namespace

TEST(Triangulate, TriangleAndSquare) {
  const auto tri = triangulate(unit_triangle());
  EXPECT_EQ(tri.simplices.size(), 1u);
  EXPECT_NEAR(tri.total_volume, 0.5, 1e-15);
  const auto sq = triangulate(cube(2));
  EXPECT_EQ(sq.simplices.size(), 4u);
  for (double v : sq.volumes) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(Triangulate, RandomPolygonVolume) {
  const auto k = random_polytope(2, 11, 6);
  EXPECT_NEAR(triangulate(k).total_volume, volume(k), 1e-12);
  const auto k3 = random_polytope(3, 14, 6);
  EXPECT_NEAR(triangulate(k3).total_volume, volume(k3), 1e-12);
}

TEST(ExpSimplex, ClosedForms) {
  const auto tri = simplex_matrix({{0, 0}, {1, 0}, {0, 1}});
  EXPECT_NEAR(integrate_exp_simplex(tri, Vec::Zero(2)), 0.5, 1e-15);
  const auto seg = simplex_matrix({{0}, {1}});
  EXPECT_NEAR(integrate_exp_simplex(seg, make_vec({1.0})), std::numbers::e - 1.0, 1e-14);
}

TEST(ExpSimplex, MatchesTensorQuadrature) {
  const auto tri = simplex_matrix({{0, 0}, {1, 0}, {0, 1}});
  for (auto w : {make_vec({1, 1}), make_vec({1, 1 + 1e-7}), make_vec({-3, 2.5}), make_vec({20, -20})}) {
    const double oracle = triangle_oracle(w);
    EXPECT_NEAR(integrate_exp_simplex(tri, w), oracle, 1e-10 * oracle);
  }
}

TEST(ExpSimplex, StableUnderVertexPerturbation) {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    Mat s(3, 4);
    for (int j = 0; j < 4; ++j) s.col(j) = rng.unit_vector(3);
    const Vec w = rng.unit_vector(3) * rng.uniform(0.0, 8.0);
    Mat t = s;
    t.col(0) += rng.unit_vector(3) * 1e-8;
    const double a = integrate_exp_simplex(s, w) / simplex_volume(s);
    const double b = integrate_exp_simplex(t, w) / simplex_volume(t);
    EXPECT_NEAR(a, b, 1e-6 * std::abs(a));
  }
}

TEST(ExpSimplex, ConfluentValuesMatchLimit) {
  // all vertex values equal: the integral is |S| e^{-shift}
  const auto s = simplex_matrix({{0, 0}, {1, 0}, {0, 1}});
  const Vec w = make_vec({0, 0});
  EXPECT_NEAR(integrate_exp_simplex(s, w, -2.0), 0.5 * std::exp(2.0), 1e-14);
}

TEST(ExpBody, ClosedForms) {
  const auto sq = cube(2);
  EXPECT_NEAR(integrate_exp_body(sq, Vec::Zero(2)).value, 4.0, 1e-12);
  const double want = 2.0 * (std::numbers::e - 1.0 / std::numbers::e);
  EXPECT_NEAR(integrate_exp_body(sq, make_vec({1, 0})).value, want, 1e-12 * want);
}

TEST(ExpBody, DeterministicMatchesMonteCarlo) {
  const auto k = random_polytope(2, 9, 13);
  const auto w = make_vec({0.5, 0.2});
  const auto det = integrate_exp_body(k, w);
  const auto mc = integrate_exp_body(k, w, Method::monte_carlo, 400000, 13);
  EXPECT_EQ(det.method, Method::deterministic);
  EXPECT_EQ(mc.method, Method::monte_carlo);
  EXPECT_LE(std::abs(det.value - mc.value), 3.0 * mc.error);
}

TEST(Radial, GammaIntegrals) {
  const auto a = integrate_radial([](double r) { return std::exp(-r); }, 1, 1e-12, 1.0);
  EXPECT_NEAR(a.value, 1.0, 1e-11);
  const auto b = integrate_radial([](double r) { return std::exp(-2 * r); }, 3, 1e-12, 2.0);
  EXPECT_NEAR(b.value, 0.25, 1e-11);
  // the gauge integrand of [-1,1] at p = inf, y = 1: h(ry) = r
  const auto c = integrate_radial([](double r) { return std::exp(-r); }, 1, 1e-12, 1.0);
  EXPECT_NEAR(1.0 / c.value, 1.0, 1e-11);
}

TEST(Radial, NoDecayBound) {
  try {
    integrate_radial([](double r) { return std::exp(-r); }, 1, 1e-10, 0.0);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::no_decay_bound);
  }
}

TEST(Radial, ReportedErrorIsHonest) {
  auto f = [](double r) { return r > 0 ? r / std::sinh(r) : 1.0; };
  double tol = 1e-4;
  auto prev = integrate_radial(f, 1, tol, 0.9);
  for (int i = 0; i < 6; ++i) {
    tol /= 2;
    const auto next = integrate_radial(f, 1, tol, 0.9);
    EXPECT_LE(std::abs(next.value - prev.value), prev.error + 1e-15);
    prev = next;
  }
}

TEST(SphereGrid, Circle) {
  const auto g = sphere_grid(2, 360);
  const auto one = integrate_sphere(g, [](const Vec&) { return 1.0; });
  EXPECT_NEAR(one.value, 2 * std::numbers::pi, 1e-12);
}

TEST(SphereGrid, SphereMoments) {
  const auto g = sphere_grid(3, 24);
  double sum = 0.0;
  for (double w : g.weights) sum += w;
  EXPECT_NEAR(sum, 4 * std::numbers::pi, 1e-6 * 4 * std::numbers::pi);
  EXPECT_NEAR(integrate_sphere(g, [](const Vec& u) { return u[2] * u[2]; }).value, 4 * std::numbers::pi / 3, 1e-6);
  EXPECT_NEAR(integrate_sphere(g, [](const Vec& u) { return u[0]; }).value, 0.0, 1e-10);
}

TEST(SphereGrid, SquareVolumeFromGauge) {
  const auto g = sphere_grid(2, 16384);  // kinks at the corners make this O(h^2)
  const auto sq = cube(2);
  const auto v = integrate_sphere(g, [&](const Vec& u) { return std::pow(gauge(sq, u), -2.0); });
  EXPECT_NEAR(v.value / 2, 4.0, 1e-6);
}

TEST(SphereGrid, UnsupportedDimension) {
  try {
    sphere_grid(5, 10);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unsupported_dimension);
  }
}

TEST(MonteCarlo, UnitSquareAndDisk) {
  const auto sq = mc_integral([](const Vec&) { return true; }, make_vec({0, 0}), make_vec({1, 1}),
                              [](const Vec&) { return 1.0; }, 1000, 3);
  EXPECT_NEAR(sq.value, 1.0, 1e-15);
  const auto disk = mc_integral([](const Vec& x) { return x.squaredNorm() <= 1.0; }, make_vec({-1, -1}),
                                make_vec({1, 1}), [](const Vec&) { return 1.0; }, 1000000, 4);
  EXPECT_LE(std::abs(disk.value - std::numbers::pi), 3.0 * disk.error);
  EXPECT_EQ(disk.samples_or_cells, 1000000u);
}

TEST(MonteCarlo, SeedReproducible) {
  auto run = [](std::uint64_t seed) {
    return mc_integral([](const Vec& x) { return x.norm() < 1.0; }, make_vec({-1, -1, -1}), make_vec({1, 1, 1}),
                       [](const Vec& x) { return std::exp(x[0]); }, 20000, seed);
  };
  const auto a = run(5), b = run(5), c = run(6);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.error, b.error);
  EXPECT_NE(a.value, c.value);
}

TEST(MonteCarlo, ZeroAcceptance) {
  try {
    mc_integral([](const Vec&) { return false; }, make_vec({0}), make_vec({1}), [](const Vec&) { return 1.0; }, 100, 1);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::zero_acceptance);
  }
}

TEST(Special, BallVolumeAndBeta) {
  EXPECT_NEAR(ball_volume(2), std::numbers::pi, 1e-14);
  EXPECT_NEAR(ball_volume(3), 4 * std::numbers::pi / 3, 1e-14);
  EXPECT_NEAR(euler_beta(1, 3), 1.0 / 3.0, 1e-14);
}
