#pragma once

#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "lpgeom/body.hpp"

namespace lpgeom::test {

inline std::vector<Vec> points(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<Vec> out;
  for (auto r : rows) out.push_back(make_vec(r));
  return out;
}

inline ConvexBody poly(std::initializer_list<std::initializer_list<double>> rows) {
  return ConvexBody::from_vertices(points(rows));
}

inline ConvexBody unit_triangle() { return poly({{0, 0}, {1, 0}, {0, 1}}); }

// every point of `want` has a vertex of k within tol, and the counts agree
inline bool same_vertex_set(const ConvexBody& k, const std::vector<Vec>& want, double tol = 1e-9) {
  const auto& vs = k.poly().vertices;
  if (vs.size() != want.size()) return false;
  for (const auto& w : want) {
    const bool found = std::any_of(vs.begin(), vs.end(), [&](const Vec& v) { return (v - w).norm() <= tol; });
    if (!found) return false;
  }
  return true;
}

inline Mat rotation2(double angle) {
  Mat r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

}  // namespace lpgeom::test
