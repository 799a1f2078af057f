// Shadow systems along a direction v: parallel chord movements with
// piecewise-linear speeds, and the hull form driven by per-vertex speeds.
#pragma once

#include "lpgeom/body.hpp"

#include <algorithm>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace lpgeom {

/// Speed of a shadow system.
///
/// Chordwise speeds are functions of x' in v-perp coordinates, of the form
/// beta = wf * f_v + wg * g_v + <coeffs, x'> + offset (+ an optional
/// piecewise-linear table when n = 2). The Steiner speed is wf = wg = -1.
/// general_alpha carries one speed per vertex of the base body.
struct SpeedFunction {
  enum class Kind { steiner, constant, affine, piecewise_linear, scaled_steiner, general_alpha };

  Kind kind = Kind::constant;
  double offset = 0.0;
  double lambda = 0.0;
  Vec coeffs;                                    // empty means zero
  std::vector<std::pair<double, double>> table;  // (x', beta), n = 2
  std::vector<double> alpha;                     // per base vertex

  static SpeedFunction steiner() {
    SpeedFunction s;
    s.kind = Kind::steiner;
    s.lambda = 1.0;
    return s;
  }
  static SpeedFunction constant(double c) {
    SpeedFunction s;
    s.offset = c;
    return s;
  }
  static SpeedFunction affine(const Vec& coeffs, double offset) {
    SpeedFunction s;
    s.kind = Kind::affine;
    s.coeffs = coeffs;
    s.offset = offset;
    return s;
  }
  static SpeedFunction piecewise_linear(std::vector<std::pair<double, double>> points) {
    SpeedFunction s;
    s.kind = Kind::piecewise_linear;
    std::sort(points.begin(), points.end());
    s.table = std::move(points);
    return s;
  }
  /// lambda times the Steiner speed plus an affine term.
  static SpeedFunction scaled_steiner(double lambda, const Vec& coeffs, double offset) {
    SpeedFunction s;
    s.kind = Kind::scaled_steiner;
    s.lambda = lambda;
    s.coeffs = coeffs;
    s.offset = offset;
    return s;
  }
  static SpeedFunction general_alpha(std::vector<double> values) {
    SpeedFunction s;
    s.kind = Kind::general_alpha;
    s.alpha = std::move(values);
    return s;
  }

  bool chordwise() const { return kind != Kind::general_alpha; }
  /// Weight of f_v and of g_v in beta.
  double profile_weight() const { return (kind == Kind::steiner || kind == Kind::scaled_steiner) ? -lambda : 0.0; }

  std::string describe() const {
    switch (kind) {
      case Kind::steiner: return "steiner";
      case Kind::constant: return "const(" + std::to_string(offset) + ")";
      case Kind::affine: return "affine";
      case Kind::piecewise_linear: return "pl(" + std::to_string(table.size()) + ")";
      case Kind::scaled_steiner: return "scaled_steiner(" + std::to_string(lambda) + ")";
      case Kind::general_alpha: return "general_alpha";
    }
    return "?";
  }
};

/// An affine function x' -> <grad, x'> + c on v-perp coordinates.
struct AffinePiece {
  Vec grad;
  double c = 0.0;
  double operator()(const Vec& x) const { return grad.dot(x) + c; }
};

/// A cell of the profile complex: a convex region of K|v-perp on which f_v,
/// g_v and beta are all affine.
struct ProfileCell {
  std::vector<int> corners;  // indices into ProfileComplex::nodes
  AffinePiece upper, lower, speed;
};

/// The common refinement of the upper and lower facet projections (and the
/// breakpoints of a tabulated speed), with profile and speed values at every
/// node.
struct ProfileComplex {
  Profiles profiles;
  std::vector<Vec> nodes;
  std::vector<double> lower, upper, speed;
  std::vector<ProfileCell> cells;
};

namespace detail {

inline double table_speed(const std::vector<std::pair<double, double>>& table, double x) {
  if (x <= table.front().first) return table.front().second;
  if (x >= table.back().first) return table.back().second;
  auto it = std::upper_bound(table.begin(), table.end(), std::make_pair(x, -std::numeric_limits<double>::infinity()));
  const auto& [x1, y1] = *it;
  const auto& [x0, y0] = *(it - 1);
  if (x1 == x0) return y1;
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

// Speed at x' given the profile values there.
inline double speed_value(const SpeedFunction& s, const Vec& x, double g, double f) {
  const double w = s.profile_weight();
  double b = w * (f + g) + s.offset;
  if (s.coeffs.size()) b += s.coeffs.dot(x);
  if (s.kind == SpeedFunction::Kind::piecewise_linear) b += table_speed(s.table, x[0]);
  return b;
}

// Clip a convex polygon (any orientation) by the convex polygon `by`.
inline std::vector<Vec> clip_convex(std::vector<Vec> poly, const std::vector<Vec>& by) {
  const int m = static_cast<int>(by.size());
  double orient = 0.0;
  for (int i = 0; i < m; ++i) {
    const Vec& a = by[i];
    const Vec& b = by[(i + 1) % m];
    orient += a[0] * b[1] - a[1] * b[0];
  }
  const double sgn = orient >= 0 ? 1.0 : -1.0;
  for (int i = 0; i < m && !poly.empty(); ++i) {
    const Vec& a = by[i];
    const Vec& b = by[(i + 1) % m];
    auto side = [&](const Vec& p) { return sgn * ((b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])); };
    std::vector<Vec> out;
    for (std::size_t j = 0; j < poly.size(); ++j) {
      const Vec& p = poly[j];
      const Vec& q = poly[(j + 1) % poly.size()];
      const double sp = side(p), sq = side(q);
      if (sp >= 0) out.push_back(p);
      if ((sp >= 0) != (sq >= 0)) out.push_back(p + (q - p) * (sp / (sp - sq)));
    }
    poly = std::move(out);
  }
  return poly;
}

inline double polygon_area(const std::vector<Vec>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec& p = poly[i];
    const Vec& q = poly[(i + 1) % poly.size()];
    a += p[0] * q[1] - p[1] * q[0];
  }
  return 0.5 * std::abs(a);
}

inline int node_index(std::vector<Vec>& nodes, const Vec& x, double tol) {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if ((nodes[i] - x).norm() <= tol) return static_cast<int>(i);
  nodes.push_back(x);
  return static_cast<int>(nodes.size()) - 1;
}

inline AffinePiece facet_piece(const HullFacet& f, const Mat& basis, const Vec& v) {
  const double av = f.normal.dot(v);
  return {Vec(-(basis.transpose() * f.normal) / av), f.offset / av};
}

}  // namespace detail

inline ProfileComplex profile_complex(const ConvexBody& k, const Direction& v, const SpeedFunction& speed) {
  const int n = k.dim();
  if (!k.is_polytope()) fail(ErrorKind::unsupported_operation, "shadow systems need a polytope");
  if (n < 2 || n > 3) fail(ErrorKind::unsupported_dimension, "shadow systems need n in {2, 3}");
  if (!speed.chordwise()) fail(ErrorKind::invalid_speed, "profile complex needs a chordwise speed");
  if (speed.coeffs.size() && speed.coeffs.size() != n - 1)
    fail(ErrorKind::invalid_speed, "affine speed coefficients must have n-1 entries");
  if (!std::isfinite(speed.offset) || !std::isfinite(speed.lambda) || (speed.coeffs.size() && !speed.coeffs.allFinite()))
    fail(ErrorKind::invalid_speed, "speed must be finite");

  ProfileComplex cx;
  cx.profiles = profiles(k, v);
  const auto& pr = cx.profiles;
  const auto& body = *pr.body;
  const double tol = 1e-9 * body.scale;

  if (n == 2) {
    std::vector<double> xs;
    for (const auto& x : pr.nodes) xs.push_back(x[0]);
    const double lo = xs.front(), hi = xs.back();
    if (speed.kind == SpeedFunction::Kind::piecewise_linear) {
      if (speed.table.size() < 2) fail(ErrorKind::invalid_speed, "tabulated speed needs at least two points");
      for (const auto& [x, b] : speed.table)
        if (!std::isfinite(x) || !std::isfinite(b)) fail(ErrorKind::invalid_speed, "tabulated speed must be finite");
      if (speed.table.front().first > lo + tol || speed.table.back().first < hi - tol)
        fail(ErrorKind::invalid_speed, "tabulated speed does not cover the projection of the body");
      for (const auto& [x, b] : speed.table)
        if (x > lo + tol && x < hi - tol) xs.push_back(x);
    }
    std::sort(xs.begin(), xs.end());
    std::vector<double> merged;
    for (double x : xs)
      if (merged.empty() || x - merged.back() > tol) merged.push_back(x);
    for (double x : merged) {
      const Vec xp = make_vec({x});
      const auto [g, f] = pr.chord(xp);
      cx.nodes.push_back(xp);
      cx.lower.push_back(g);
      cx.upper.push_back(f);
      cx.speed.push_back(detail::speed_value(speed, xp, g, f));
    }
    auto interp = [&](const std::vector<double>& val, int i) {
      const double slope = (val[i + 1] - val[i]) / (merged[i + 1] - merged[i]);
      return AffinePiece{make_vec({slope}), val[i] - slope * merged[i]};
    };
    for (int i = 0; i + 1 < static_cast<int>(merged.size()); ++i)
      cx.cells.push_back({{i, i + 1}, interp(cx.upper, i), interp(cx.lower, i), interp(cx.speed, i)});
    return cx;
  }

  if (speed.kind == SpeedFunction::Kind::piecewise_linear)
    fail(ErrorKind::invalid_speed, "tabulated speeds are supported for n = 2 only");
  const Vec& dir = pr.direction;
  auto project = [&](const HullFacet& f) {
    std::vector<Vec> poly;
    for (int vi : f.vertices) poly.push_back(pr.basis.transpose() * body.vertices[vi]);
    return poly;
  };
  const double w = speed.profile_weight();
  const double area_tol = 1e-12 * body.scale * body.scale;
  for (const auto& fu : body.facets) {
    if (fu.normal.dot(dir) <= 1e-12) continue;
    const auto pu = project(fu);
    const auto upper = detail::facet_piece(fu, pr.basis, dir);
    for (const auto& fl : body.facets) {
      if (fl.normal.dot(dir) >= -1e-12) continue;
      const auto cell = detail::clip_convex(pu, project(fl));
      if (cell.size() < 3 || detail::polygon_area(cell) <= area_tol) continue;
      ProfileCell c;
      c.upper = upper;
      c.lower = detail::facet_piece(fl, pr.basis, dir);
      c.speed.grad = w * (c.upper.grad + c.lower.grad);
      c.speed.c = w * (c.upper.c + c.lower.c) + speed.offset;
      if (speed.coeffs.size()) c.speed.grad += speed.coeffs;
      for (const auto& x : cell) {
        const int idx = detail::node_index(cx.nodes, x, tol);
        if (std::find(c.corners.begin(), c.corners.end(), idx) == c.corners.end()) c.corners.push_back(idx);
      }
      cx.cells.push_back(std::move(c));
    }
  }
  for (const auto& x : cx.nodes) {
    const auto [g, f] = pr.chord(x);
    cx.lower.push_back(g);
    cx.upper.push_back(f);
    cx.speed.push_back(detail::speed_value(speed, x, g, f));
  }
  return cx;
}

/// One hinge condition a + t b >= 0 (up to tolerance) for convexity of K_t.
struct HingeCondition {
  double a, b;
};

/// K_t is convex iff f + t beta is concave and g + t beta convex. For a
/// piecewise-affine function that is equivalent to every cell's affine piece
/// lying above (resp. below) the function at every node; each such
/// condition is affine in t.
inline std::vector<HingeCondition> hinge_conditions(const ProfileComplex& cx) {
  std::vector<HingeCondition> out;
  for (const auto& c : cx.cells)
    for (std::size_t k = 0; k < cx.nodes.size(); ++k) {
      const Vec& x = cx.nodes[k];
      const double ds = c.speed(x) - cx.speed[k];
      out.push_back({c.upper(x) - cx.upper[k], ds});
      out.push_back({cx.lower[k] - c.lower(x), -ds});
    }
  return out;
}

struct ShadowSystem {
  ConvexBody base;
  Direction direction;
  SpeedFunction speed;
  double valid_lo = -std::numeric_limits<double>::infinity();
  double valid_hi = std::numeric_limits<double>::infinity();
  double window = 2.0;
  std::shared_ptr<const ProfileComplex> complex;  // chordwise only
  double hinge_tol = 1e-9;

  bool valid_at(double t) const { return t >= valid_lo - 1e-12 && t <= valid_hi + 1e-12; }
};

inline bool convexity_scan(const ShadowSystem& s, double t) {
  if (!s.complex) return true;  // hull form is convex by construction
  for (const auto& h : hinge_conditions(*s.complex))
    if (h.a + t * h.b < -s.hinge_tol * (1.0 + std::abs(t))) return false;
  return true;
}

/// Parallel chord movement of K along v with speed beta. The validity
/// interval is the exact set of t in [-window, window] passing every hinge
/// condition (the conditions are affine in t, so it is an interval).
inline ShadowSystem make_parallel_chord(const ConvexBody& k, const Direction& v, const SpeedFunction& beta,
                                        double window = 2.0) {
  if (!(window > 0.0)) fail(ErrorKind::invalid_argument, "scan window must be positive");
  auto cx = std::make_shared<const ProfileComplex>(profile_complex(k, v, beta));
  ShadowSystem s{k, v, beta, -window, window, window, cx, 1e-9 * cx->profiles.body->scale};
  for (const auto& h : hinge_conditions(*cx)) {
    // a + t b >= -tol (1 + |t|); solve on each sign of t separately
    for (double sg : {-1.0, 1.0}) {
      const double bb = h.b + sg * s.hinge_tol;  // (a + tol) + t (b + sg tol) >= 0
      const double aa = h.a + s.hinge_tol;
      if (sg > 0) {
        if (bb < 0) s.valid_hi = std::min(s.valid_hi, std::max(0.0, -aa / bb));
      } else {
        if (bb > 0) s.valid_lo = std::max(s.valid_lo, std::min(0.0, -aa / bb));
      }
    }
  }
  if (s.valid_lo > 0.0 || s.valid_hi < 0.0) fail(ErrorKind::degenerate_input, "base body fails its own convexity test");
  return s;
}

/// Hull form: K_t = conv{x + t alpha(x) v} with alpha given at the
/// vertices of K.
inline ShadowSystem make_shadow_system(const ConvexBody& k, const Direction& v, const SpeedFunction& alpha) {
  if (alpha.kind != SpeedFunction::Kind::general_alpha) return make_parallel_chord(k, v, alpha);
  if (!k.is_polytope()) fail(ErrorKind::unsupported_operation, "shadow systems need a polytope");
  if (alpha.alpha.size() != k.poly().vertices.size())
    fail(ErrorKind::invalid_speed, "alpha needs one value per vertex of the base body");
  for (double a : alpha.alpha)
    if (!std::isfinite(a)) fail(ErrorKind::invalid_speed, "alpha must be finite");
  return ShadowSystem{k, v, alpha, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                      std::numeric_limits<double>::infinity(), nullptr, 0.0};
}

inline SpeedFunction steiner_speed(const ConvexBody& k, const Direction& v) {
  (void)profiles(k, v);  // validates the body
  return SpeedFunction::steiner();
}

/// beta at a point x' of K|v-perp (basis coordinates).
inline double speed_at(const ShadowSystem& s, const Vec& xp) {
  if (!s.complex) fail(ErrorKind::invalid_speed, "general alpha speeds live on vertices, not on v-perp");
  const auto [g, f] = s.complex->profiles.chord(xp);
  return detail::speed_value(s.speed, xp, g, f);
}

inline ConvexBody body_at(const ShadowSystem& s, double t) {
  const Vec& v = s.direction.unit();
  std::vector<Vec> pts;
  if (!s.complex) {
    const auto& verts = s.base.poly().vertices;
    for (std::size_t i = 0; i < verts.size(); ++i) pts.push_back(verts[i] + t * s.speed.alpha[i] * v);
    return ConvexBody::from_vertices(pts);
  }
  if (!s.valid_at(t) || !convexity_scan(s, t))
    fail(ErrorKind::not_convex_at_t, "K_t is not convex at t = " + std::to_string(t));
  if (t == 0.0) return s.base;
  const auto& cx = *s.complex;
  for (std::size_t i = 0; i < cx.nodes.size(); ++i) {
    const Vec base = cx.profiles.basis * cx.nodes[i];
    const double shift = t * cx.speed[i];
    pts.push_back(base + (cx.lower[i] + shift) * v);
    if (cx.upper[i] - cx.lower[i] > 1e-12 * cx.profiles.body->scale) pts.push_back(base + (cx.upper[i] + shift) * v);
  }
  return ConvexBody::from_vertices(pts);
}

inline std::vector<double> volume_along(const ShadowSystem& s, const std::vector<double>& ts) {
  std::vector<double> out;
  out.reserve(ts.size());
  for (double t : ts) out.push_back(volume(body_at(s, t)));
  return out;
}

}  // namespace lpgeom
