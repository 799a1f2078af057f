// Convex hulls in dimensions 1, 2 and 3. The result carries both the extreme
// vertices and the facets, with each facet's vertices listed in order.
#pragma once

#include "lpgeom/core.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <unordered_set>
#include <vector>

namespace lpgeom {

struct HullFacet {
  Vec normal;     // unit outer normal
  double offset;  // facet plane is <normal, x> = offset
  // Indices into Hull::vertices. 3-D: counterclockwise seen from outside;
  // 2-D: the edge's two endpoints in counterclockwise order; 1-D: one index.
  std::vector<int> vertices;
};

struct Hull {
  int dim = 0;
  std::vector<Vec> vertices;  // extreme points only; 2-D lists them counterclockwise
  std::vector<HullFacet> facets;
};

namespace detail {

inline double coordinate_scale(const std::vector<Vec>& pts) {
  double s = 1.0;
  for (const auto& p : pts) s = std::max(s, p.cwiseAbs().maxCoeff());
  return s;
}

/// Counterclockwise indices of the extreme points of a planar point set.
/// Points within `eps` of a hull edge line are dropped. Returns fewer than 3
/// indices when the set is degenerate.
inline std::vector<int> hull2d_indices(const std::vector<Eigen::Vector2d>& pts, double eps) {
  const int n = static_cast<int>(pts.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (pts[a].x() != pts[b].x()) return pts[a].x() < pts[b].x();
    return pts[a].y() < pts[b].y();
  });
  // remove exact and near duplicates
  std::vector<int> uniq;
  for (int i : idx) {
    bool dup = false;
    for (auto it = uniq.rbegin(); it != uniq.rend(); ++it) {
      if (pts[i].x() - pts[*it].x() > eps) break;
      if ((pts[i] - pts[*it]).norm() <= eps) {
        dup = true;
        break;
      }
    }
    if (!dup) uniq.push_back(i);
  }
  if (uniq.size() < 3) return uniq;

  // Strict counterclockwise turn o -> a -> b, with a required to sit more
  // than eps away from the line through o and b.
  auto keeps = [&](int o, int a, int b) {
    const Eigen::Vector2d u = pts[a] - pts[o];
    const Eigen::Vector2d w = pts[b] - pts[o];
    const double cross = u.x() * w.y() - u.y() * w.x();
    const double base = w.norm();
    return cross > eps * std::max(base, 1e-300);
  };
  std::vector<int> h(2 * uniq.size());
  int k = 0;
  for (int i : uniq) {
    while (k >= 2 && !keeps(h[k - 2], h[k - 1], i)) --k;
    h[k++] = i;
  }
  for (int j = static_cast<int>(uniq.size()) - 2, t = k + 1; j >= 0; --j) {
    const int i = uniq[j];
    while (k >= t && !keeps(h[k - 2], h[k - 1], i)) --k;
    h[k++] = i;
  }
  h.resize(std::max(0, k - 1));
  return h;
}

inline Hull hull1d(const std::vector<Vec>& pts, double eps) {
  double lo = pts[0][0], hi = pts[0][0];
  for (const auto& p : pts) {
    lo = std::min(lo, p[0]);
    hi = std::max(hi, p[0]);
  }
  if (hi - lo <= eps) fail(ErrorKind::degenerate_input, "points span no interval");
  Hull h;
  h.dim = 1;
  h.vertices = {make_vec({lo}), make_vec({hi})};
  h.facets.push_back({make_vec({-1.0}), -lo, {0}});
  h.facets.push_back({make_vec({1.0}), hi, {1}});
  return h;
}

inline Hull hull2d(const std::vector<Vec>& pts, double eps) {
  std::vector<Eigen::Vector2d> p2(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) p2[i] = Eigen::Vector2d(pts[i][0], pts[i][1]);
  const auto ids = hull2d_indices(p2, eps);
  if (ids.size() < 3) fail(ErrorKind::degenerate_input, "planar points are not full-dimensional");
  Hull h;
  h.dim = 2;
  const int m = static_cast<int>(ids.size());
  for (int i : ids) h.vertices.push_back(pts[i]);
  for (int i = 0; i < m; ++i) {
    const Vec& a = h.vertices[i];
    const Vec& b = h.vertices[(i + 1) % m];
    Vec nrm = make_vec({b[1] - a[1], -(b[0] - a[0])});
    nrm /= nrm.norm();
    h.facets.push_back({nrm, nrm.dot(a), {i, (i + 1) % m}});
  }
  return h;
}

struct Face3 {
  int v[3];
  Eigen::Vector3d n;
  double d;
  bool alive;
};

inline Hull hull3d(const std::vector<Vec>& pts, double eps) {
  using V3 = Eigen::Vector3d;
  const int N = static_cast<int>(pts.size());
  std::vector<V3> P(N);
  for (int i = 0; i < N; ++i) P[i] = V3(pts[i][0], pts[i][1], pts[i][2]);

  int i0 = 0;
  for (int i = 1; i < N; ++i)
    if (std::lexicographical_compare(P[i].data(), P[i].data() + 3, P[i0].data(), P[i0].data() + 3)) i0 = i;
  int i1 = -1;
  double best = eps;
  for (int i = 0; i < N; ++i) {
    const double d = (P[i] - P[i0]).norm();
    if (d > best) best = d, i1 = i;
  }
  if (i1 < 0) fail(ErrorKind::degenerate_input, "points coincide");
  const V3 dir = (P[i1] - P[i0]).normalized();
  int i2 = -1;
  best = eps;
  for (int i = 0; i < N; ++i) {
    const V3 w = P[i] - P[i0];
    const double d = (w - w.dot(dir) * dir).norm();
    if (d > best) best = d, i2 = i;
  }
  if (i2 < 0) fail(ErrorKind::degenerate_input, "points are collinear");
  const V3 pn = (P[i1] - P[i0]).cross(P[i2] - P[i0]).normalized();
  int i3 = -1;
  best = eps;
  for (int i = 0; i < N; ++i) {
    const double d = std::abs(pn.dot(P[i] - P[i0]));
    if (d > best) best = d, i3 = i;
  }
  if (i3 < 0) fail(ErrorKind::degenerate_input, "points are coplanar");

  std::vector<Face3> faces;
  faces.reserve(4 * static_cast<std::size_t>(N) + 8);
  auto add_face = [&](int a, int b, int c) {
    Face3 f{{a, b, c}, V3::Zero(), 0.0, true};
    V3 n = (P[b] - P[a]).cross(P[c] - P[a]);
    const double len = n.norm();
    if (len > 0.0) n /= len;
    f.n = n;
    f.d = n.dot(P[a]);
    faces.push_back(f);
  };
  const int tet[4] = {i0, i1, i2, i3};
  const V3 c0 = (P[i0] + P[i1] + P[i2] + P[i3]) / 4.0;
  const int tri[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  for (const auto& t : tri) {
    int a = tet[t[0]], b = tet[t[1]], c = tet[t[2]];
    const V3 n = (P[b] - P[a]).cross(P[c] - P[a]);
    if (n.dot(c0 - P[a]) > 0) std::swap(b, c);
    add_face(a, b, c);
  }

  std::vector<int> order;
  order.reserve(N);
  for (int i = 0; i < N; ++i)
    if (i != i0 && i != i1 && i != i2 && i != i3) order.push_back(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return (P[a] - c0).squaredNorm() > (P[b] - c0).squaredNorm(); });

  std::unordered_set<std::uint64_t> edges;
  std::vector<int> visible;
  std::vector<std::pair<int, int>> horizon;
  int dead = 0;
  for (int pi : order) {
    visible.clear();
    for (int f = 0; f < static_cast<int>(faces.size()); ++f)
      if (faces[f].alive && faces[f].n.dot(P[pi]) - faces[f].d > eps) visible.push_back(f);
    if (visible.empty()) continue;
    edges.clear();
    auto key = [](int a, int b) { return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b); };
    for (int f : visible)
      for (int e = 0; e < 3; ++e) edges.insert(key(faces[f].v[e], faces[f].v[(e + 1) % 3]));
    horizon.clear();
    for (int f : visible)
      for (int e = 0; e < 3; ++e) {
        const int a = faces[f].v[e], b = faces[f].v[(e + 1) % 3];
        if (!edges.count(key(b, a))) horizon.emplace_back(a, b);
      }
    for (int f : visible) faces[f].alive = false;
    dead += static_cast<int>(visible.size());
    for (const auto& [a, b] : horizon) add_face(a, b, pi);
    if (dead > 256 && dead * 2 > static_cast<int>(faces.size())) {
      faces.erase(std::remove_if(faces.begin(), faces.end(), [](const Face3& f) { return !f.alive; }), faces.end());
      dead = 0;
    }
  }

  // Candidate points are those referenced by surviving faces.
  std::vector<int> used;
  {
    std::vector<char> mark(N, 0);
    for (const auto& f : faces)
      if (f.alive)
        for (int k : f.v) mark[k] = 1;
    for (int i = 0; i < N; ++i)
      if (mark[i]) used.push_back(i);
  }
  const double plane_tol = 10.0 * eps;
  struct Plane {
    V3 n;
    double d;
  };
  std::vector<Plane> planes;
  for (const auto& f : faces) {
    if (!f.alive || f.n.squaredNorm() < 0.5) continue;
    bool valid = true;
    for (int i : used)
      if (f.n.dot(P[i]) - f.d > plane_tol) {
        valid = false;
        break;
      }
    if (!valid) continue;
    bool merged = false;
    for (const auto& pl : planes)
      if (pl.n.dot(f.n) > 1.0 - 1e-9 && std::abs(pl.d - f.d) <= plane_tol) {
        merged = true;
        break;
      }
    if (!merged) planes.push_back({f.n, f.d});
  }

  Hull h;
  h.dim = 3;
  std::vector<int> remap(N, -1);
  for (const auto& pl : planes) {
    std::vector<int> on;
    for (int i : used)
      if (std::abs(pl.n.dot(P[i]) - pl.d) <= plane_tol) on.push_back(i);
    if (on.size() < 3) continue;
    V3 e1 = (std::abs(pl.n.x()) < 0.9 ? V3::UnitX() : V3::UnitY());
    e1 = (e1 - e1.dot(pl.n) * pl.n).normalized();
    const V3 e2 = pl.n.cross(e1);
    std::vector<Eigen::Vector2d> q(on.size());
    for (std::size_t k = 0; k < on.size(); ++k) q[k] = Eigen::Vector2d(P[on[k]].dot(e1), P[on[k]].dot(e2));
    const auto ring = hull2d_indices(q, eps);
    if (ring.size() < 3) continue;
    HullFacet facet{Vec(pl.n), pl.d, {}};
    for (int r : ring) {
      const int gi = on[r];
      if (remap[gi] < 0) {
        remap[gi] = static_cast<int>(h.vertices.size());
        h.vertices.push_back(pts[gi]);
      }
      facet.vertices.push_back(remap[gi]);
    }
    h.facets.push_back(std::move(facet));
  }
  if (h.facets.size() < 4) fail(ErrorKind::degenerate_input, "hull construction failed");
  return h;
}

}  // namespace detail

/// Convex hull of a finite point set in dimension 1, 2 or 3.
inline Hull convex_hull(const std::vector<Vec>& points) {
  if (points.empty()) fail(ErrorKind::degenerate_input, "no points");
  const int n = static_cast<int>(points.front().size());
  for (const auto& p : points) {
    if (p.size() != n) fail(ErrorKind::invalid_argument, "points have mixed dimensions");
    if (!p.allFinite()) fail(ErrorKind::invalid_argument, "non-finite coordinate");
  }
  if (static_cast<int>(points.size()) < n + 1) fail(ErrorKind::degenerate_input, "fewer than n+1 points");
  const double eps = kGeomEps * detail::coordinate_scale(points);
  switch (n) {
    case 1: return detail::hull1d(points, eps);
    case 2: return detail::hull2d(points, eps);
    case 3: return detail::hull3d(points, eps);
    default: fail(ErrorKind::unsupported_dimension, "exact hull supports n <= 3, got n = " + std::to_string(n));
  }
}

}  // namespace lpgeom
