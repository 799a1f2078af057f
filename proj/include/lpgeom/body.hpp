// Convex bodies (vertex polytopes, halfspace polytopes, Euclidean balls) and
// the classical operations on them: support and gauge functions, volume,
// polarity, Minkowski sums, intersections, sections, chord profiles and
// Steiner symmetrization.
//
// Exact geometry is limited to n <= 3. Cubes and simplices may be built in
// n = 4 for the Monte Carlo paths; they support support/gauge/containment.
#pragma once

#include "lpgeom/core.hpp"
#include "lpgeom/hull.hpp"
#include "lpgeom/lp.hpp"
#include "lpgeom/rng.hpp"

#include <algorithm>
#include <memory>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

namespace lpgeom {

enum class Representation { vpoly, hpoly, ball };

inline const char* to_string(Representation r) {
  switch (r) {
    case Representation::vpoly: return "vpoly";
    case Representation::hpoly: return "hpoly";
    case Representation::ball: return "ball";
  }
  return "?";
}

struct VPolytope {
  std::vector<Vec> vertices;
};

struct HPolytope {
  std::vector<Vec> normals;
  std::vector<double> offsets;
};

struct Ball {
  Vec center;
  double radius;
};

/// Both representations of a polytope, kept together so every operation can
/// use whichever it needs. Facet normals are unit vectors.
struct PolytopeData {
  int dim = 0;
  std::vector<Vec> vertices;
  std::vector<HullFacet> facets;
  Vec interior;  // average of the vertices
  double scale = 1.0;
};

class ConvexBody {
 public:
  /// Convex hull of the given points; non-extreme points are dropped.
  static ConvexBody from_vertices(const std::vector<Vec>& points) {
    return from_hull(convex_hull(points), Representation::vpoly);
  }

  /// Intersection of the halfspaces <normals[i], x> <= offsets[i]. Redundant
  /// halfspaces are removed.
  static ConvexBody from_halfspaces(const std::vector<Vec>& normals, const std::vector<double>& offsets);

  /// As above when a strictly interior point is already known.
  static ConvexBody from_halfspaces(const std::vector<Vec>& normals, const std::vector<double>& offsets,
                                    const Vec& interior_point);

  static ConvexBody ball(const Vec& center, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) fail(ErrorKind::degenerate_input, "ball radius must be positive");
    ConvexBody k;
    k.tag_ = Representation::ball;
    k.ball_ = Ball{center, radius};
    return k;
  }

  static ConvexBody from_hull(Hull h, Representation tag) {
    auto data = std::make_shared<PolytopeData>();
    data->dim = h.dim;
    data->vertices = std::move(h.vertices);
    data->facets = std::move(h.facets);
    data->interior = Vec::Zero(data->dim);
    for (const auto& v : data->vertices) data->interior += v;
    data->interior /= static_cast<double>(data->vertices.size());
    data->scale = detail::coordinate_scale(data->vertices);
    ConvexBody k;
    k.tag_ = tag;
    k.poly_ = std::move(data);
    return k;
  }

  /// For bodies whose both representations are known in closed form
  /// (cubes, simplices); used for n = 4 where no hull code exists.
  static ConvexBody from_trusted(std::vector<Vec> vertices, std::vector<HullFacet> facets, Representation tag) {
    Hull h;
    h.dim = static_cast<int>(vertices.front().size());
    h.vertices = std::move(vertices);
    h.facets = std::move(facets);
    return from_hull(std::move(h), tag);
  }

  int dim() const { return is_ball() ? static_cast<int>(ball_->center.size()) : poly_->dim; }
  Representation representation() const { return tag_; }
  bool is_ball() const { return tag_ == Representation::ball; }
  bool is_polytope() const { return !is_ball(); }

  const PolytopeData& poly() const {
    if (!poly_) fail(ErrorKind::unsupported_operation, "operation requires a polytope, got a ball");
    return *poly_;
  }
  std::shared_ptr<const PolytopeData> poly_ptr() const { return poly_; }

  const Ball& as_ball() const {
    if (!ball_) fail(ErrorKind::unsupported_operation, "body is not a ball");
    return *ball_;
  }

  VPolytope vpoly() const { return VPolytope{poly().vertices}; }
  HPolytope hpoly() const {
    HPolytope h;
    for (const auto& f : poly().facets) {
      h.normals.push_back(f.normal);
      h.offsets.push_back(f.offset);
    }
    return h;
  }

  ConvexBody with_tag(Representation tag) const {
    ConvexBody k = *this;
    k.tag_ = tag;
    return k;
  }

 private:
  ConvexBody() = default;
  Representation tag_ = Representation::vpoly;
  std::shared_ptr<const PolytopeData> poly_;
  std::optional<Ball> ball_;
};

inline ConvexBody ConvexBody::from_halfspaces(const std::vector<Vec>& normals, const std::vector<double>& offsets) {
  if (normals.size() != offsets.size() || normals.empty())
    fail(ErrorKind::invalid_argument, "normals and offsets must be nonempty and of equal length");
  const auto cheb = chebyshev_center(normals, offsets);
  if (!cheb) fail(ErrorKind::empty_interior, "halfspace system is empty or unbounded");
  double scale = 1.0;
  for (double b : offsets) scale = std::max(scale, std::abs(b));
  if (cheb->second <= kGeomEps * scale) fail(ErrorKind::empty_interior, "halfspace intersection has empty interior");
  return from_halfspaces(normals, offsets, cheb->first);
}

inline ConvexBody ConvexBody::from_halfspaces(const std::vector<Vec>& normals, const std::vector<double>& offsets,
                                              const Vec& c) {
  if (normals.size() != offsets.size() || normals.empty())
    fail(ErrorKind::invalid_argument, "normals and offsets must be nonempty and of equal length");
  const int n = static_cast<int>(c.size());
  std::vector<Vec> dual;
  dual.reserve(normals.size());
  for (std::size_t i = 0; i < normals.size(); ++i) {
    const double len = normals[i].norm();
    if (len == 0.0) {
      if (offsets[i] < 0.0) fail(ErrorKind::empty_interior, "infeasible zero-normal halfspace");
      continue;
    }
    const Vec a = normals[i] / len;
    const double slack = offsets[i] / len - a.dot(c);
    if (slack <= 0.0) fail(ErrorKind::empty_interior, "given point is not interior to the halfspaces");
    dual.push_back(a / slack);
  }
  if (static_cast<int>(dual.size()) < n + 1) fail(ErrorKind::degenerate_input, "too few halfspaces for a bounded body");
  Hull dh;
  try {
    dh = convex_hull(dual);
  } catch (const GeometryError&) {
    fail(ErrorKind::degenerate_input, "halfspace system is unbounded");
  }
  std::vector<Vec> verts;
  double dscale = detail::coordinate_scale(dual);
  for (const auto& f : dh.facets) {
    if (f.offset <= 1e-12 * dscale) fail(ErrorKind::degenerate_input, "halfspace system is unbounded");
    verts.push_back(c + f.normal / f.offset);
  }
  return from_hull(convex_hull(verts), Representation::hpoly);
}

// ---------------------------------------------------------------------------
// Elementary queries

inline double support(const ConvexBody& k, const Vec& y) {
  if (k.is_ball()) {
    const auto& b = k.as_ball();
    return b.center.dot(y) + b.radius * y.norm();
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : k.poly().vertices) best = std::max(best, v.dot(y));
  return best;
}

/// A vertex attaining the support value (the center direction point for balls).
inline Vec support_point(const ConvexBody& k, const Vec& y) {
  if (k.is_ball()) {
    const auto& b = k.as_ball();
    const double ny = y.norm();
    return ny > 0 ? Vec(b.center + b.radius * y / ny) : b.center;
  }
  const auto& vs = k.poly().vertices;
  std::size_t arg = 0;
  for (std::size_t i = 1; i < vs.size(); ++i)
    if (vs[i].dot(y) > vs[arg].dot(y)) arg = i;
  return vs[arg];
}

/// Largest violation max_i <a_i, x> - b_i (negative inside).
inline double facet_violation(const PolytopeData& p, const Vec& x) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& f : p.facets) worst = std::max(worst, f.normal.dot(x) - f.offset);
  return worst;
}

inline bool contains(const ConvexBody& k, const Vec& x, double tol = kGeomEps) {
  if (k.is_ball()) {
    const auto& b = k.as_ball();
    return (x - b.center).norm() <= b.radius + tol * std::max(1.0, b.radius);
  }
  return facet_violation(k.poly(), x) <= tol * k.poly().scale;
}

inline bool strictly_contains(const ConvexBody& k, const Vec& x, double margin = kGeomEps) {
  if (k.is_ball()) {
    const auto& b = k.as_ball();
    return (x - b.center).norm() < b.radius - margin * std::max(1.0, b.radius);
  }
  return facet_violation(k.poly(), x) < -margin * k.poly().scale;
}

inline bool origin_interior(const ConvexBody& k) { return strictly_contains(k, Vec::Zero(k.dim())); }

/// Minkowski functional inf{l > 0 : x in l K}; requires o in int K.
inline double gauge(const ConvexBody& k, const Vec& x) {
  if (!origin_interior(k)) fail(ErrorKind::origin_not_interior, "gauge requires the origin in the interior");
  if (k.is_ball()) {
    const auto& b = k.as_ball();
    const double a = b.radius * b.radius - b.center.squaredNorm();
    const double xc = x.dot(b.center);
    return (xc + std::sqrt(xc * xc + a * x.squaredNorm())) / a;
  }
  double g = 0.0;
  for (const auto& f : k.poly().facets) g = std::max(g, f.normal.dot(x) / f.offset);
  return g;
}

inline std::pair<Vec, Vec> bounding_box(const ConvexBody& k) {
  if (k.is_ball()) {
    const auto& b = k.as_ball();
    return {b.center.array() - b.radius, b.center.array() + b.radius};
  }
  const auto& vs = k.poly().vertices;
  Vec lo = vs.front(), hi = vs.front();
  for (const auto& v : vs) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// Simplicial decomposition, volume, barycenter

/// Volume of the simplex whose vertices are the columns of s (n x (n+1)).
inline double simplex_volume(const Mat& s) {
  const int n = static_cast<int>(s.rows());
  Mat e(n, n);
  for (int j = 0; j < n; ++j) e.col(j) = s.col(j + 1) - s.col(0);
  return std::abs(e.determinant()) / factorial(n);
}

/// Fan decomposition into simplices (columns are vertices). A simplex is
/// returned as itself; otherwise the fan apex is the vertex centroid.
inline std::vector<Mat> fan_simplices(const ConvexBody& k) {
  const auto& p = k.poly();
  const int n = p.dim;
  if (n > 3) fail(ErrorKind::unsupported_dimension, "triangulation supports n <= 3");
  std::vector<Mat> out;
  if (static_cast<int>(p.vertices.size()) == n + 1) {
    Mat s(n, n + 1);
    for (int j = 0; j <= n; ++j) s.col(j) = p.vertices[j];
    out.push_back(s);
    return out;
  }
  const Vec& c = p.interior;
  for (const auto& f : p.facets) {
    const auto& fv = f.vertices;
    if (n == 1) {
      Mat s(1, 2);
      s << c[0], p.vertices[fv[0]][0];
      out.push_back(s);
    } else if (n == 2) {
      Mat s(2, 3);
      s.col(0) = c;
      s.col(1) = p.vertices[fv[0]];
      s.col(2) = p.vertices[fv[1]];
      out.push_back(s);
    } else {
      for (std::size_t t = 1; t + 1 < fv.size(); ++t) {
        Mat s(3, 4);
        s.col(0) = c;
        s.col(1) = p.vertices[fv[0]];
        s.col(2) = p.vertices[fv[t]];
        s.col(3) = p.vertices[fv[t + 1]];
        out.push_back(s);
      }
    }
  }
  return out;
}

/// (n-1)-dimensional measure of a facet.
inline double facet_measure(const PolytopeData& p, const HullFacet& f) {
  if (p.dim == 1) return 1.0;
  if (p.dim == 2) return (p.vertices[f.vertices[0]] - p.vertices[f.vertices[1]]).norm();
  Eigen::Vector3d acc = Eigen::Vector3d::Zero();
  const auto& fv = f.vertices;
  for (std::size_t i = 0; i < fv.size(); ++i) {
    const Eigen::Vector3d a = p.vertices[fv[i]].head<3>();
    const Eigen::Vector3d b = p.vertices[fv[(i + 1) % fv.size()]].head<3>();
    acc += a.cross(b);
  }
  return 0.5 * std::abs(acc.dot(f.normal.head<3>()));
}

inline double volume(const ConvexBody& k) {
  const int n = k.dim();
  if (k.is_ball()) {
    const double r = k.as_ball().radius;
    return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0) * std::pow(r, n);
  }
  if (n > 3) fail(ErrorKind::unsupported_dimension, "exact volume supports n <= 3");
  const auto& p = k.poly();
  // (1/n) sum of facet measure times facet distance from an interior point
  double v = 0.0;
  for (const auto& f : p.facets) v += (f.offset - f.normal.dot(p.interior)) * facet_measure(p, f);
  return v / n;
}

inline Vec barycenter(const ConvexBody& k) {
  if (k.is_ball()) return k.as_ball().center;
  const int n = k.dim();
  Vec acc = Vec::Zero(n);
  double total = 0.0;
  for (const auto& s : fan_simplices(k)) {
    const double v = simplex_volume(s);
    acc += v * s.rowwise().mean();
    total += v;
  }
  if (!(total > 0.0)) fail(ErrorKind::degenerate_input, "zero volume");
  return acc / total;
}

// ---------------------------------------------------------------------------
// Affine images and polarity

inline ConvexBody affine_image(const ConvexBody& k, const Mat& T, const Vec& shift) {
  if (k.is_ball()) {
    const auto& b = k.as_ball();
    const Mat q = T.transpose() * T;
    const double s = std::sqrt(q(0, 0));
    if ((q - s * s * Mat::Identity(q.rows(), q.cols())).norm() > 1e-12 * s * s)
      fail(ErrorKind::unsupported_operation, "non-conformal image of a ball is not a ball");
    return ConvexBody::ball(T * b.center + shift, s * b.radius);
  }
  std::vector<Vec> pts;
  for (const auto& v : k.poly().vertices) pts.push_back(T * v + shift);
  return ConvexBody::from_vertices(pts).with_tag(k.representation());
}

inline ConvexBody translate(const ConvexBody& k, const Vec& t) {
  return affine_image(k, Mat::Identity(k.dim(), k.dim()), t);
}
inline ConvexBody scale(const ConvexBody& k, double s) {
  return affine_image(k, s * Mat::Identity(k.dim(), k.dim()), Vec::Zero(k.dim()));
}
inline ConvexBody negate(const ConvexBody& k) { return scale(k, -1.0); }
inline ConvexBody linear_image(const ConvexBody& k, const Mat& T) { return affine_image(k, T, Vec::Zero(k.dim())); }

/// Polar body with respect to an interior center z: (K - z)^o + z.
inline ConvexBody polar(const ConvexBody& k, const Vec& z) {
  if (!strictly_contains(k, z)) fail(ErrorKind::center_not_interior, "center of polarity must be interior");
  if (k.is_ball()) {
    const auto& b = k.as_ball();
    if ((b.center - z).norm() > kGeomEps * std::max(1.0, b.radius))
      fail(ErrorKind::unsupported_operation, "polar of a ball about a non-central point is an ellipsoid");
    return ConvexBody::ball(b.center, 1.0 / b.radius);
  }
  const auto& p = k.poly();
  std::vector<Vec> pts;
  pts.reserve(p.facets.size());
  for (const auto& f : p.facets) pts.push_back(z + f.normal / (f.offset - f.normal.dot(z)));
  const auto tag = k.representation() == Representation::vpoly ? Representation::hpoly : Representation::vpoly;
  return ConvexBody::from_vertices(pts).with_tag(tag);
}

inline ConvexBody polar(const ConvexBody& k) { return polar(k, Vec::Zero(k.dim())); }

/// Same body in another representation (data for both is always present).
inline ConvexBody convert(const ConvexBody& k, Representation target) {
  if (k.is_ball() != (target == Representation::ball))
    fail(ErrorKind::unsupported_operation, "cannot convert between balls and polytopes");
  if (k.dim() > 3) fail(ErrorKind::unsupported_dimension, "exact conversion supports n <= 3");
  return k.with_tag(target);
}

// ---------------------------------------------------------------------------
// Set operations on polytopes

inline ConvexBody minkowski_sum(const ConvexBody& k, const ConvexBody& l) {
  if (k.dim() != l.dim()) fail(ErrorKind::invalid_argument, "dimension mismatch");
  std::vector<Vec> pts;
  for (const auto& a : k.poly().vertices)
    for (const auto& b : l.poly().vertices) pts.push_back(a + b);
  return ConvexBody::from_vertices(pts);
}

/// K - L in the sense K + (-L).
inline ConvexBody minkowski_diff(const ConvexBody& k, const ConvexBody& l) { return minkowski_sum(k, negate(l)); }

inline ConvexBody intersect(const ConvexBody& k, const ConvexBody& l) {
  if (k.dim() != l.dim()) fail(ErrorKind::invalid_argument, "dimension mismatch");
  auto a = k.hpoly();
  const auto b = l.hpoly();
  a.normals.insert(a.normals.end(), b.normals.begin(), b.normals.end());
  a.offsets.insert(a.offsets.end(), b.offsets.begin(), b.offsets.end());
  return ConvexBody::from_halfspaces(a.normals, a.offsets);
}

inline ConvexBody conv_union(const ConvexBody& k, const ConvexBody& l) {
  if (k.dim() != l.dim()) fail(ErrorKind::invalid_argument, "dimension mismatch");
  auto pts = k.poly().vertices;
  pts.insert(pts.end(), l.poly().vertices.begin(), l.poly().vertices.end());
  return ConvexBody::from_vertices(pts);
}

/// Reflection in the hyperplane v-perp.
inline ConvexBody reflect(const ConvexBody& k, const Direction& v) {
  const Vec& u = v.unit();
  const Mat h = Mat::Identity(u.size(), u.size()) - 2.0 * u * u.transpose();
  return affine_image(k, h, Vec::Zero(u.size()));
}

// ---------------------------------------------------------------------------
// Sections, profiles, symmetrization

/// Orthonormal basis of v-perp as the columns of an n x (n-1) matrix:
/// Gram-Schmidt over e_1, ..., e_n after v, skipping near-dependent axes.
inline Mat orthonormal_complement(const Direction& v) {
  const int n = v.dim();
  std::vector<Vec> acc{v.unit()};
  Mat basis(n, n - 1);
  int col = 0;
  for (int i = 0; i < n && col < n - 1; ++i) {
    Vec e = unit_axis(n, i);
    for (const auto& q : acc) e -= e.dot(q) * q;
    if (e.norm() < 1e-6) continue;
    e.normalize();
    acc.push_back(e);
    basis.col(col++) = e;
  }
  return basis;
}

/// K(s) = {x' : x' + s v in K}, in the coordinates of orthonormal_complement(v).
inline ConvexBody section(const ConvexBody& k, const Direction& v, double s) {
  const int n = k.dim();
  if (n < 2) fail(ErrorKind::unsupported_dimension, "sections need n >= 2");
  const Mat basis = orthonormal_complement(v);
  if (k.is_ball()) {
    const auto& b = k.as_ball();
    const double h = s - b.center.dot(v.unit());
    const double r2 = b.radius * b.radius - h * h;
    if (r2 <= 0.0) fail(ErrorKind::empty_section, "slice misses the ball interior");
    return ConvexBody::ball(basis.transpose() * b.center, std::sqrt(r2));
  }
  const auto& p = k.poly();
  std::vector<Vec> normals;
  std::vector<double> offsets;
  for (const auto& f : p.facets) {
    const Vec a = basis.transpose() * f.normal;
    const double rhs = f.offset - s * f.normal.dot(v.unit());
    if (a.norm() <= 1e-12) {
      if (rhs < -kGeomEps * p.scale) fail(ErrorKind::empty_section, "slice misses the body");
      continue;
    }
    normals.push_back(a);
    offsets.push_back(rhs);
  }
  try {
    return ConvexBody::from_halfspaces(normals, offsets);
  } catch (const GeometryError& e) {
    fail(ErrorKind::empty_section, std::string("slice has empty relative interior (") + e.what() + ")");
  }
}

/// Lower and upper chord profiles g_v <= f_v of a polytope over its
/// projection onto v-perp: K = {B x' + s v : g(x') <= s <= f(x')}.
struct Profiles {
  Vec direction;
  Mat basis;                 // n x (n-1), columns span v-perp
  std::vector<Vec> nodes;    // projected vertices and (n = 3) crossings of projected edges
  std::vector<double> lower; // g at nodes
  std::vector<double> upper; // f at nodes
  std::vector<std::pair<Vec, Vec>> projected_edges;  // n = 3 only
  std::shared_ptr<const PolytopeData> body;

  int dim() const { return static_cast<int>(direction.size()); }

  /// (g(x'), f(x')) at any point of the projection, from the facet system.
  std::pair<double, double> chord(const Vec& xp) const {
    const Vec x = basis * xp;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    const double tol = 1e-9 * body->scale;
    for (const auto& f : body->facets) {
      const double av = f.normal.dot(direction);
      const double rhs = f.offset - f.normal.dot(x);
      if (av > 1e-12) {
        hi = std::min(hi, rhs / av);
      } else if (av < -1e-12) {
        lo = std::max(lo, rhs / av);
      } else if (rhs < -tol) {
        fail(ErrorKind::empty_section, "point lies outside the projection");
      }
    }
    if (lo > hi + tol) fail(ErrorKind::empty_section, "point lies outside the projection");
    if (lo > hi) lo = hi = 0.5 * (lo + hi);
    return {lo, hi};
  }

  /// Projection K|v-perp in basis coordinates.
  ConvexBody domain() const {
    std::vector<Vec> pts;
    for (const auto& v : body->vertices) pts.push_back(basis.transpose() * v);
    return ConvexBody::from_vertices(pts);
  }
};

namespace detail {

inline void push_unique(std::vector<Vec>& pts, const Vec& q, double tol) {
  for (const auto& p : pts)
    if ((p - q).norm() <= tol) return;
  pts.push_back(q);
}

// Proper or touching intersection point of segments [a,b] and [c,d] in R^2.
inline std::optional<Vec> segment_crossing(const Vec& a, const Vec& b, const Vec& c, const Vec& d) {
  const Vec r = b - a, s = d - c;
  const double den = r[0] * s[1] - r[1] * s[0];
  if (std::abs(den) < 1e-14 * std::max(1.0, r.norm() * s.norm())) return std::nullopt;
  const Vec q = c - a;
  const double t = (q[0] * s[1] - q[1] * s[0]) / den;
  const double u = (q[0] * r[1] - q[1] * r[0]) / den;
  if (t < -1e-12 || t > 1 + 1e-12 || u < -1e-12 || u > 1 + 1e-12) return std::nullopt;
  return Vec(a + t * r);
}

}  // namespace detail

inline Profiles profiles(const ConvexBody& k, const Direction& v) {
  const int n = k.dim();
  if (n < 2 || n > 3) fail(ErrorKind::unsupported_dimension, "profiles need n in {2, 3}");
  if (v.dim() != n) fail(ErrorKind::invalid_argument, "direction dimension mismatch");
  Profiles pr;
  pr.direction = v.unit();
  pr.basis = orthonormal_complement(v);
  pr.body = k.poly_ptr();
  if (!pr.body) fail(ErrorKind::unsupported_operation, "profiles require a polytope");
  const auto& p = *pr.body;
  const double tol = 1e-12 * p.scale;
  for (const auto& vert : p.vertices) detail::push_unique(pr.nodes, pr.basis.transpose() * vert, tol);
  if (n == 3) {
    std::vector<std::pair<int, int>> edges;
    for (const auto& f : p.facets)
      for (std::size_t i = 0; i < f.vertices.size(); ++i) {
        int a = f.vertices[i], b = f.vertices[(i + 1) % f.vertices.size()];
        if (a > b) std::swap(a, b);
        if (std::find(edges.begin(), edges.end(), std::make_pair(a, b)) == edges.end()) edges.emplace_back(a, b);
      }
    for (const auto& [a, b] : edges) {
      Vec pa = pr.basis.transpose() * p.vertices[a];
      Vec pb = pr.basis.transpose() * p.vertices[b];
      if ((pa - pb).norm() > tol) pr.projected_edges.emplace_back(pa, pb);
    }
    for (std::size_t i = 0; i < pr.projected_edges.size(); ++i)
      for (std::size_t j = i + 1; j < pr.projected_edges.size(); ++j) {
        const auto& [a, b] = pr.projected_edges[i];
        const auto& [c, d] = pr.projected_edges[j];
        if (auto x = detail::segment_crossing(a, b, c, d)) detail::push_unique(pr.nodes, *x, 1e-10 * p.scale);
      }
  } else {
    std::sort(pr.nodes.begin(), pr.nodes.end(), [](const Vec& a, const Vec& b) { return a[0] < b[0]; });
  }
  for (const auto& x : pr.nodes) {
    const auto [g, f] = pr.chord(x);
    pr.lower.push_back(g);
    pr.upper.push_back(f);
  }
  return pr;
}

/// Steiner symmetral: every chord parallel to v recentered on v-perp.
inline ConvexBody steiner_symmetrize(const ConvexBody& k, const Direction& v) {
  if (k.dim() == 1) {
    const auto [lo, hi] = bounding_box(k);
    const double half = 0.5 * (hi[0] - lo[0]);
    return ConvexBody::from_vertices({make_vec({-half}), make_vec({half})});
  }
  const auto pr = profiles(k, v);
  std::vector<Vec> pts;
  for (std::size_t i = 0; i < pr.nodes.size(); ++i) {
    const double half = 0.5 * (pr.upper[i] - pr.lower[i]);
    const Vec base = pr.basis * pr.nodes[i];
    pts.push_back(base + half * pr.direction);
    pts.push_back(base - half * pr.direction);
  }
  return ConvexBody::from_vertices(pts);
}

// ---------------------------------------------------------------------------
// Distances

namespace detail {

inline double segment_distance(const Vec& x, const Vec& a, const Vec& b) {
  const Vec ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0 ? (x - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (x - (a + t * ab)).norm();
}

inline double point_polytope_distance(const PolytopeData& p, const Vec& x) {
  if (facet_violation(p, x) <= 0.0) return 0.0;
  const auto& vs = p.vertices;
  if (p.dim == 1) {
    const double lo = std::min(vs[0][0], vs[1][0]), hi = std::max(vs[0][0], vs[1][0]);
    return x[0] < lo ? lo - x[0] : x[0] - hi;
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : p.facets) {
    const auto& fv = f.vertices;
    if (p.dim == 2) {
      best = std::min(best, segment_distance(x, vs[fv[0]], vs[fv[1]]));
      continue;
    }
    const Eigen::Vector3d nrm = f.normal.head<3>();
    const Eigen::Vector3d xx = x.head<3>();
    const double h = nrm.dot(xx) - f.offset;
    const Eigen::Vector3d q = xx - h * nrm;
    bool inside = true;
    for (std::size_t i = 0; i < fv.size() && inside; ++i) {
      const Eigen::Vector3d a = vs[fv[i]].head<3>();
      const Eigen::Vector3d b = vs[fv[(i + 1) % fv.size()]].head<3>();
      if ((b - a).cross(q - a).dot(nrm) < -1e-14 * p.scale * p.scale) inside = false;
    }
    if (inside) {
      best = std::min(best, std::abs(h));
    } else {
      for (std::size_t i = 0; i < fv.size(); ++i)
        best = std::min(best, segment_distance(x, vs[fv[i]], vs[fv[(i + 1) % fv.size()]]));
    }
  }
  return best;
}

}  // namespace detail

/// Hausdorff distance. Exact for polytopes (attained at vertices); for balls
/// the supremum of |h_K - h_L| over a fine direction set.
inline double hausdorff_distance(const ConvexBody& k, const ConvexBody& l) {
  if (k.dim() != l.dim()) fail(ErrorKind::invalid_argument, "dimension mismatch");
  const int n = k.dim();
  if (k.is_polytope() && l.is_polytope() && n <= 3) {
    double d = 0.0;
    for (const auto& v : k.poly().vertices) d = std::max(d, detail::point_polytope_distance(l.poly(), v));
    for (const auto& v : l.poly().vertices) d = std::max(d, detail::point_polytope_distance(k.poly(), v));
    return d;
  }
  double d = 0.0;
  Rng rng(0x5eedULL, 0);
  for (int i = 0; i < 20000; ++i) {
    const Vec u = rng.unit_vector(n);
    d = std::max(d, std::abs(support(k, u) - support(l, u)));
  }
  return d;
}

// ---------------------------------------------------------------------------
// Generators

inline ConvexBody cube(int n, double half = 1.0) {
  if (n < 1 || n > 4) fail(ErrorKind::unsupported_dimension, "cube supports 1 <= n <= 4");
  if (!(half > 0)) fail(ErrorKind::degenerate_input, "cube half-width must be positive");
  std::vector<Vec> verts;
  for (int mask = 0; mask < (1 << n); ++mask) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = (mask >> i & 1) ? half : -half;
    verts.push_back(v);
  }
  if (n <= 3) return ConvexBody::from_vertices(verts);
  std::vector<HullFacet> facets;
  for (int i = 0; i < n; ++i)
    for (double sgn : {-1.0, 1.0}) facets.push_back({sgn * unit_axis(n, i), half, {}});
  return ConvexBody::from_trusted(std::move(verts), std::move(facets), Representation::vpoly);
}

/// Standard simplex conv{o, e_1, ..., e_n}.
inline ConvexBody simplex(int n) {
  if (n < 1 || n > 4) fail(ErrorKind::unsupported_dimension, "simplex supports 1 <= n <= 4");
  std::vector<Vec> verts{Vec::Zero(n)};
  for (int i = 0; i < n; ++i) verts.push_back(unit_axis(n, i));
  if (n <= 3) return ConvexBody::from_vertices(verts);
  std::vector<HullFacet> facets;
  for (int i = 0; i < n; ++i) facets.push_back({-unit_axis(n, i), 0.0, {}});
  facets.push_back({Vec::Ones(n) / std::sqrt(double(n)), 1.0 / std::sqrt(double(n)), {}});
  return ConvexBody::from_trusted(std::move(verts), std::move(facets), Representation::vpoly);
}

/// Random polytope from `count` points with radii in [0.5, 1.5] around the
/// origin; with `symmetric` the point set is closed under x -> -x. The origin
/// is always interior (resampled otherwise).
inline ConvexBody random_polytope(int n, int count, std::uint64_t seed, bool symmetric = false) {
  if (n < 1 || n > 3) fail(ErrorKind::unsupported_dimension, "random polytopes support n <= 3");
  if (count < n + 1) fail(ErrorKind::invalid_argument, "need at least n+1 points");
  Rng rng(seed, 0x9011);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Vec> pts;
    const int base = symmetric ? (count + 1) / 2 : count;
    for (int i = 0; i < base; ++i) {
      const Vec q = rng.unit_vector(n) * rng.uniform(0.5, 1.5);
      pts.push_back(q);
      if (symmetric) pts.push_back(-q);
    }
    try {
      auto k = ConvexBody::from_vertices(pts);
      if (strictly_contains(k, Vec::Zero(n), 0.05)) return k;
    } catch (const GeometryError&) {
    }
  }
  fail(ErrorKind::degenerate_input, "could not generate a random polytope");
}

}  // namespace lpgeom
