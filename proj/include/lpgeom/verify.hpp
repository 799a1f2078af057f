// Executable checks of the inequalities and identities about L_p polars,
// each with an explicit error budget, and a seeded suite runner.
#pragma once

#include "lpgeom/lp_core.hpp"
#include "lpgeom/shadow.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lpgeom {

struct CheckRecord {
  std::string check_id;
  int index = 0;             // instance index within the check
  std::string instance;      // human-readable instance description
  Estimate lhs, rhs;
  double margin = 0.0;       // pass iff margin >= -slack
  double slack = 0.0;        // base_tol + 3 sigma
  bool pass = false;
  bool diagnostic = false;   // evaluated and reported, never counted as a failure
  bool indeterminate = false;
  double runtime_ms = 0.0;
  std::string note;

  bool counts_as_failure() const { return !pass && !diagnostic && !indeterminate; }
};

struct SuiteConfig {
  std::vector<int> dimensions{1, 2, 3};
  std::vector<PParam> p_values{PParam(0.5), PParam(1.0), PParam(2.0), PParam::infinity()};
  int instances_per_check = 0;  // 0: each check's own default count
  std::uint64_t master_seed = 20240917;
  double base_tol = 1e-6;
  std::uint64_t mc_samples = 200000;
  std::vector<std::string> checks;  // empty: all
  int resolution = 0;               // sphere resolution; 0: 256 (n=2), 24 (n=3)
  double tol = 1e-10;               // quadrature tolerance for gauges and volumes

  static SuiteConfig empty() {
    SuiteConfig c;
    c.dimensions.clear();
    c.p_values.clear();
    return c;
  }
};

// ---------------------------------------------------------------------------
// Record helpers

inline CheckRecord make_record(std::string id, std::string instance, Estimate lhs, Estimate rhs, double margin,
                               double base_tol) {
  CheckRecord r;
  r.check_id = std::move(id);
  r.instance = std::move(instance);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = margin;
  // Monte Carlo errors are 95% radii; the slack is three standard deviations
  auto sigma = [](const Estimate& e) { return e.method == Method::monte_carlo ? e.error / 1.96 : e.error; };
  r.slack = base_tol + 3.0 * (sigma(lhs) + sigma(rhs));
  r.pass = std::isfinite(margin) && margin >= -r.slack;
  return r;
}

/// Midpoint of [a, b] with half the width as the error.
inline Estimate bracket(double a, double b) {
  return Estimate::det(0.5 * (a + b), 0.5 * std::abs(b - a));
}

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline std::string fmt(const Vec& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s + ")";
}

/// FNV-1a, for stable instance hashes in reports.
inline std::uint64_t stable_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Polar brackets

/// Inner and outer polytopes around K^{o,p}; both equal K^o when p = inf.
struct PolarBracket {
  ConvexBody inner, outer;
  bool exact = false;

  PolarBracket negated() const { return {negate(inner), negate(outer), exact}; }
};

inline int default_resolution(int n, int resolution) {
  if (resolution > 0) return resolution;
  return n == 2 ? 256 : 24;
}

inline PolarBracket polar_bracket(const ConvexBody& k, PParam p, int resolution = 0, double tol = 1e-8) {
  if (p.is_infinite()) {
    auto kp = polar(k);
    return {kp, kp, true};
  }
  LpEvaluator e(k, p, tol, default_resolution(k.dim(), resolution));
  auto a = lp_polar_approx(e);
  return {a.inner, a.outer, false};
}

namespace detail {

// Chord of a 1-D body as [lo, hi].
inline std::pair<double, double> interval_of(const ConvexBody& k) {
  const auto [lo, hi] = bounding_box(k);
  return {lo[0], hi[0]};
}

// Support of the section at s in direction w (v-perp coordinates); NaN if empty.
struct SectionPair {
  std::optional<ConvexBody> inner, outer;
};

inline SectionPair sections(const PolarBracket& b, const Direction& v, double s) {
  SectionPair out;
  try {
    out.outer = section(b.outer, v, s);
  } catch (const GeometryError& e) {
    if (e.kind() != ErrorKind::empty_section) throw;
    fail(ErrorKind::empty_section, "slice misses the L_p polar body");
  }
  try {
    out.inner = section(b.inner, v, s);
  } catch (const GeometryError& e) {
    if (e.kind() != ErrorKind::empty_section) throw;
    fail(ErrorKind::empty_section, "slice misses the inner approximation");
  }
  return out;
}

inline std::vector<Vec> section_directions(int m) {
  if (m == 1) return {make_vec({1.0}), make_vec({-1.0})};
  return scan_directions(m, 64);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Shadow system checks

namespace detail {

inline Vec probe_point(const ShadowSystem& s, const Vec& xp, double height) {
  return s.complex->profiles.basis * xp + height * s.direction.unit();
}

inline Estimate lp_support_at(const ConvexBody& k, PParam p, const Vec& y, double tol) {
  LpEvaluator e(k, p, tol);
  return lp_support(e, y);
}

}  // namespace detail

/// Midpoint convexity of t -> h_{p,K_t}(x' + s v).
inline CheckRecord check_support_convexity(const ShadowSystem& sys, PParam p, const Vec& xp, double s, double t1,
                                           double t2, double base_tol = 1e-6, double tol = 1e-10) {
  const double tm = 0.5 * (t1 + t2);
  const Vec y = detail::probe_point(sys, xp, s);
  const auto h1 = detail::lp_support_at(body_at(sys, t1), p, y, tol);
  const auto h2 = detail::lp_support_at(body_at(sys, t2), p, y, tol);
  const auto hm = detail::lp_support_at(body_at(sys, tm), p, y, tol);
  const Estimate lhs = 0.5 * h1 + 0.5 * h2;
  return make_record("support_convexity", "", lhs, hm, lhs.value - hm.value, base_tol);
}

/// The three-point inequality with 2/a = 1/b + 1/c.
inline CheckRecord check_three_point_inequality(const ShadowSystem& sys, PParam p, const Vec& xp, const Vec& yp,
                                                double s, double t1, double t2, double b, double c,
                                                double base_tol = 1e-6, double tol = 1e-10) {
  if (!(b > 0.0) || !(c > 0.0)) fail(ErrorKind::invalid_argument, "b and c must be positive");
  const double a = 2.0 * b * c / (b + c);
  const double tm = 0.5 * (t1 + t2);
  const auto h1 = detail::lp_support_at(body_at(sys, t1), p, b * detail::probe_point(sys, xp, s), tol);
  const auto h2 = detail::lp_support_at(body_at(sys, t2), p, c * detail::probe_point(sys, yp, s), tol);
  const auto hm = detail::lp_support_at(body_at(sys, tm), p, a * detail::probe_point(sys, 0.5 * (xp + yp), s), tol);
  const Estimate lhs = (c / (b + c)) * h1 + (b / (b + c)) * h2;
  return make_record("three_point", "", lhs, hm, lhs.value - hm.value, base_tol);
}

/// 1/2 K_{t1}^{o,p}(s) + 1/2 K_{t2}^{o,p}(s) inside K_{tm}^{o,p}(s), by support
/// functions of the sections: h_mid - (h_1 + h_2)/2 >= 0 in every direction.
/// Inner sections are compared; the inner/outer gaps are the error budget.
inline CheckRecord check_section_inclusion(const PolarBracket& b1, const PolarBracket& b2, const PolarBracket& bm,
                                           const Direction& v, double s, double base_tol = 1e-6) {
  const auto s1 = detail::sections(b1, v, s), s2 = detail::sections(b2, v, s), sm = detail::sections(bm, v, s);
  const int m = v.dim() - 1;
  double worst = std::numeric_limits<double>::infinity();
  double lhs_v = 0, rhs_v = 0, lhs_err = 0, rhs_err = 0;
  for (const auto& w : detail::section_directions(m)) {
    const double h1 = support(*s1.inner, w), h2 = support(*s2.inner, w), hm = support(*sm.inner, w);
    const double g1 = support(*s1.outer, w) - h1, g2 = support(*s2.outer, w) - h2, gm = support(*sm.outer, w) - hm;
    lhs_err = std::max(lhs_err, 0.5 * (g1 + g2));
    rhs_err = std::max(rhs_err, gm);
    const double margin = hm - 0.5 * (h1 + h2);
    if (margin < worst) {
      worst = margin;
      lhs_v = 0.5 * (h1 + h2);
      rhs_v = hm;
    }
  }
  return make_record("section_inclusion", "", Estimate::det(lhs_v, lhs_err), Estimate::det(rhs_v, rhs_err), worst,
                     base_tol);
}

/// (n-1)-volume of the section of K^{o,p} at s as a bracket estimate.
inline Estimate section_volume(const PolarBracket& b, const Direction& v, double s) {
  const double vo = section_volume_or_zero(b.outer, v, s);
  if (vo == 0.0) fail(ErrorKind::empty_section, "slice misses the L_p polar body");
  const double vi = section_volume_or_zero(b.inner, v, s);
  return bracket(vi, vo);
}

/// |K_{tm}^{o,p}(s)|^{1/(n-1)} >= (|K_{t1}^{o,p}(s)|^{1/(n-1)} + |K_{t2}^{o,p}(s)|^{1/(n-1)}) / 2.
inline CheckRecord check_slice_concavity(const PolarBracket& b1, const PolarBracket& b2, const PolarBracket& bm,
                                         const Direction& v, double s, double base_tol = 1e-6) {
  const int n = v.dim();
  if (n < 2) fail(ErrorKind::unsupported_dimension, "slice concavity needs n >= 2");
  const double e = 1.0 / (n - 1);
  const auto v1 = pow(section_volume(b1, v, s), e), v2 = pow(section_volume(b2, v, s), e);
  const auto vm = pow(section_volume(bm, v, s), e);
  const Estimate rhs = 0.5 * v1 + 0.5 * v2;
  return make_record("slice_concavity", "", vm, rhs, vm.value - rhs.value, base_tol);
}

namespace detail {

// Hausdorff distance between two section brackets, with the larger of the
// two inner/outer gaps as its error.
inline Estimate section_distance(const SectionPair& a, const SectionPair& b, bool negate_b) {
  const auto bi = negate_b ? negate(*b.inner) : *b.inner;
  const double d = hausdorff_distance(*a.inner, bi);
  const double ga = hausdorff_distance(*a.inner, *a.outer), gb = hausdorff_distance(*b.inner, *b.outer);
  return Estimate::det(d, ga + gb);
}

}  // namespace detail

/// Symmetric K: the sections at s and -s are congruent, K^{o,p}(-s) = -K^{o,p}(s).
inline CheckRecord check_section_symmetry(const PolarBracket& b, const Direction& v, double s,
                                          double base_tol = 1e-6) {
  const auto plus = detail::sections(b, v, s), minus = detail::sections(b, v, -s);
  const auto d = detail::section_distance(minus, plus, true);
  return make_record("section_symmetry", "", d, Estimate::exact(0.0), -d.value, base_tol);
}

/// K_1 of the Steiner movement: K^{o,p}(-s) = K_1^{o,p}(s). With
/// `statement_form`, compares K^{o,p}(s) with K_1^{o,p}(s) instead, which
/// only holds for bodies symmetric in v-perp; reported as a diagnostic.
inline CheckRecord check_reflection_sections(const PolarBracket& b, const PolarBracket& b1, const Direction& v,
                                             double s, bool statement_form = false, double base_tol = 1e-6) {
  const auto k1 = detail::sections(b1, v, s);
  const auto k = detail::sections(b, v, statement_form ? s : -s);
  const auto d = detail::section_distance(k, k1, false);
  auto r = make_record(statement_form ? "reflection_sections_statement" : "reflection_sections", "", d,
                       Estimate::exact(0.0), -d.value, base_tol);
  r.diagnostic = statement_form;
  return r;
}

// ---------------------------------------------------------------------------
// Volume inequalities

inline bool is_symmetric(const ConvexBody& k) {
  if (k.is_ball()) return k.as_ball().center.norm() <= 1e-12 * k.as_ball().radius;
  return hausdorff_distance(k, negate(k)) <= 1e-9 * k.poly().scale;
}

/// |(S_v K)^{o,p}| >= |K^{o,p}| for symmetric K.
inline CheckRecord check_steiner_monotone(const ConvexBody& k, const Direction& v, PParam p, double base_tol = 1e-6,
                                          double tol = 1e-10, int resolution = 0) {
  if (!is_symmetric(k)) fail(ErrorKind::invalid_argument, "Steiner monotonicity needs a symmetric body");
  const auto sk = steiner_symmetrize(k, v);
  const auto vs = lp_polar_volume(LpEvaluator(sk, p, tol, resolution));
  const auto vk = lp_polar_volume(LpEvaluator(k, p, tol, resolution));
  return make_record("steiner_monotone", "", vs, vk, vs.value - vk.value, base_tol);
}

/// M_p(K) <= M_p(B_2^n) for symmetric K.
inline CheckRecord check_santalo_p(const ConvexBody& k, PParam p, double base_tol = 1e-6, double tol = 1e-10,
                                   int resolution = 0) {
  if (!is_symmetric(k)) fail(ErrorKind::invalid_argument, "the L_p Santalo inequality needs a symmetric body");
  const auto mb = mahler_p_ball(k.dim(), p);
  const auto mk = mahler_p(LpEvaluator(k, p, tol, resolution));
  return make_record("santalo_p", "", mb, mk, mb.value - mk.value, base_tol);
}

inline void require_centered(const ConvexBody& k) {
  const double scale = k.is_ball() ? k.as_ball().radius : k.poly().scale;
  if (barycenter(k).norm() > 1e-9 * scale) fail(ErrorKind::barycenter_not_origin, "body must have its barycenter at o");
}

/// M_p(K) <= n! c_p^n |B_2^n|^2 for K with barycenter o. The note records the
/// margin against the sharper c_p^n |B_2^n|^2, which the same argument gives.
inline CheckRecord check_prop_bound(const ConvexBody& k, PParam p, double base_tol = 1e-6, double tol = 1e-10,
                                    int resolution = 0) {
  require_centered(k);
  const int n = k.dim();
  const double vb = ball_volume(n);
  const double sharp = std::pow(p.c_p(), n) * vb * vb;
  const auto mk = mahler_p(LpEvaluator(k, p, tol, resolution));
  auto r = make_record("prop_bound", "", Estimate::exact(factorial(n) * sharp), mk,
                       factorial(n) * sharp - mk.value, base_tol);
  r.note = "sharp_margin=" + fmt(sharp - mk.value);
  return r;
}

/// K^o in K^{o,p} in c_p K^o along a direction grid, for K with barycenter o.
inline CheckRecord check_sandwich(const ConvexBody& k, PParam p, int directions = 64, double base_tol = 1e-6,
                                  double tol = 1e-10) {
  const auto r = sandwich_margins(LpEvaluator(k, p, tol), directions);
  const double cp = p.c_p();
  const double margin = std::min(r.min_ratio - 1.0, cp - r.max_ratio);
  const bool low = r.min_ratio - 1.0 <= cp - r.max_ratio;
  auto rec = make_record("sandwich", "", Estimate::det(low ? r.min_ratio : r.max_ratio, r.error),
                         Estimate::exact(low ? 1.0 : cp), margin, base_tol);
  rec.note = "min_ratio=" + fmt(r.min_ratio) + " max_ratio=" + fmt(r.max_ratio) + " c_p=" + fmt(cp);
  return rec;
}

/// |(K - z)^o| = int_{K^o} (1 - <z,x>)^{-(n+1)} dx.
inline CheckRecord check_translate_polar(const ConvexBody& k, const Vec& z, double base_tol = 1e-6) {
  const auto sides = translate_polar_volume_sides(k, z);
  const double diff = std::abs(sides.direct.value - sides.integral.value);
  auto r = make_record("translate_polar", "", sides.direct, sides.integral, -diff, base_tol);
  r.note = "relative_difference=" + fmt(diff / sides.direct.value);
  return r;
}

// ---------------------------------------------------------------------------
// One-dimensional radial lemma

/// A nonnegative function on (0, inf) with a decay promise: f(r) <= f(R)
/// e^{-c (r - R)} for r >= R >= r0.
struct RadialFunction {
  std::function<double(double)> f;
  double decay = 1.0;
  double r0 = 1.0;
};

/// If H(r) >= F(t)^{s/(t+s)} G(s)^{t/(t+s)} whenever 2/r = 1/s + 1/t, then
/// 2 (int r^{q-1} H)^{-1/q} <= (int t^{q-1} F)^{-1/q} + (int s^{q-1} G)^{-1/q}.
/// The premise is verified on a geometric (t, s) grid first.
inline CheckRecord check_ball_lemma(const RadialFunction& F, const RadialFunction& G, const RadialFunction& H, int q,
                                    double base_tol = 1e-6, double tol = 1e-11) {
  if (q < 1) fail(ErrorKind::invalid_argument, "q must be at least 1");
  constexpr int kGrid = 48;
  double worst_premise = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGrid; ++i)
    for (int j = 0; j < kGrid; ++j) {
      const double t = 0.02 * std::pow(1000.0, i / (kGrid - 1.0));
      const double s = 0.02 * std::pow(1000.0, j / (kGrid - 1.0));
      const double r = 2.0 * s * t / (s + t);
      const double ft = F.f(t), gs = G.f(s), hr = H.f(r);
      const double rhs = std::pow(ft, s / (t + s)) * std::pow(gs, t / (t + s));
      if (rhs <= 0.0) continue;
      worst_premise = std::min(worst_premise, hr / rhs - 1.0);
    }
  if (worst_premise < -1e-9) fail(ErrorKind::hypothesis_failed, "premise fails on the grid by " + fmt(-worst_premise));
  auto moment = [&](const RadialFunction& fn) {
    const auto I = integrate_radial(fn.f, q, tol, fn.decay, fn.r0);
    return pow(I, -1.0 / q);
  };
  const auto mf = moment(F), mg = moment(G), mh = moment(H);
  const Estimate lhs = 0.5 * mf + 0.5 * mg;
  auto r = make_record("ball_lemma", "", lhs, mh, lhs.value - mh.value, base_tol);
  r.note = "premise_slack=" + fmt(worst_premise);
  return r;
}

// ---------------------------------------------------------------------------
// Origin criterion

/// o in int K iff o in int K^{o,p}. Interior origin: the polar gauge is
/// finite and positive on a direction grid. Exterior origin: along a
/// direction y with h_K(y) < 0 the radial integrand grows, so the gauge
/// integral diverges, and the gauge routine refuses the body. An origin on
/// the boundary is reported as indeterminate.
inline CheckRecord check_origin_iff(const ConvexBody& k, PParam p, double base_tol = 1e-6, double tol = 1e-8) {
  const int n = k.dim();
  const double scale = k.is_ball() ? k.as_ball().radius : k.poly().scale;
  const Vec o = Vec::Zero(n);
  LpEvaluator e(k, p, tol, n == 2 ? 32 : 8);
  if (strictly_contains(k, o, 1e-6 * scale)) {
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    for (const auto& u : scan_directions(n, n == 3 ? 26 : 32)) {
      const auto g = lp_gauge(e, u);
      rmin = std::min(rmin, 1.0 / g.value);
      rmax = std::max(rmax, 1.0 / g.value);
    }
    const bool finite = std::isfinite(rmax) && rmin > 0.0;
    auto r = make_record("origin_iff", "", Estimate::exact(rmin), Estimate::exact(0.0), finite ? rmin : -1.0, base_tol);
    r.note = "interior: polar radii in [" + fmt(rmin) + ", " + fmt(rmax) + "]";
    return r;
  }
  if (contains(k, o, 1e-6 * scale)) {
    auto r = make_record("origin_iff", "", Estimate::exact(0.0), Estimate::exact(0.0), 0.0, base_tol);
    r.indeterminate = true;
    r.note = "origin on the boundary";
    return r;
  }
  // most separating grid direction
  Vec y;
  double hy = std::numeric_limits<double>::infinity();
  for (const auto& u : scan_directions(n, n == 3 ? 200 : 64)) {
    const double h = support(k, u);
    if (h < hy) {
      hy = h;
      y = u;
    }
  }
  double growth = std::numeric_limits<double>::infinity();
  double prev = -std::numeric_limits<double>::infinity();
  for (double r = 1.0; r <= 64.0; r *= 2.0) {
    const double log_integrand = (n - 1) * std::log(r) - e.h(r * y);
    growth = std::min(growth, log_integrand - prev);
    prev = log_integrand;
  }
  bool refused = false;
  try {
    (void)lp_gauge(e, y);
  } catch (const GeometryError& err) {
    refused = err.kind() == ErrorKind::origin_not_interior;
  }
  auto r = make_record("origin_iff", "", Estimate::exact(growth), Estimate::exact(0.0), refused ? growth : -1.0,
                       base_tol);
  r.note = "exterior: h_K(y)=" + fmt(hy) + (refused ? " gauge refused" : " gauge NOT refused");
  return r;
}

// ---------------------------------------------------------------------------
// Polar identities

/// (K^o cap L^o)^o = conv(K cup L).
inline CheckRecord check_conv_polar_identity(const ConvexBody& k, const ConvexBody& l, double base_tol = 1e-9) {
  const auto lhs = polar(intersect(polar(k), polar(l)));
  const auto rhs = conv_union(k, l);
  const double d = hausdorff_distance(lhs, rhs);
  return make_record("conv_polar_identity", "", Estimate::exact(d), Estimate::exact(0.0), -d, base_tol);
}

/// inf_{x+y=z} ||x||_A + ||y||_B = ||z||_{conv(A cup B)} on seeded probes.
inline CheckRecord check_infconv_identity(const ConvexBody& a, const ConvexBody& b, std::uint64_t seed,
                                          int probes = 32, double base_tol = 1e-6) {
  const auto hull = conv_union(a, b);
  Rng rng(seed, 0x1c);
  double worst = 0.0;
  for (int i = 0; i < probes; ++i) {
    const Vec z = rng.unit_vector(a.dim()) * rng.uniform(0.0, 3.0);
    worst = std::max(worst, std::abs(inf_conv_gauge(a, b, z) - gauge(hull, z)));
  }
  return make_record("infconv_identity", "", Estimate::exact(worst), Estimate::exact(0.0), -worst, base_tol);
}

/// int_M phi <= |M| phi(bar_phi) for phi = exp(<w, x> + c) on a polytope M,
/// with exact exponential integrals and moments on a mesh of M.
inline CheckRecord check_logconcave_projection(const ConvexBody& m, const Vec& w, double c = 0.0,
                                               double base_tol = 1e-6) {
  const auto mesh = triangulate(m);
  double total = 0.0;
  Vec moment = Vec::Zero(m.dim());
  for (const auto& s : mesh.simplices) {
    total += integrate_exp_simplex(s, w);
    moment += integrate_exp_simplex_moment(s, w);
  }
  const Vec bar = moment / total;
  const double lhs = std::exp(c) * total;
  const double rhs = mesh.total_volume * std::exp(w.dot(bar) + c);
  const double err = 1e-12 * (std::abs(lhs) + std::abs(rhs)) * mesh.simplices.size();
  return make_record("logconcave_projection", "", Estimate::det(lhs, err), Estimate::det(rhs, err), rhs - lhs,
                     base_tol);
}

/// Same inequality for a log-concave phi on an interval, by adaptive quadrature.
inline CheckRecord check_logconcave_projection(double a, double b, const std::function<double(double)>& phi,
                                               double base_tol = 1e-6) {
  if (!(b > a)) fail(ErrorKind::invalid_argument, "empty interval");
  const auto I = integrate_gk(phi, a, b, 0.0, 1e-13);
  const auto M = integrate_gk([&](double x) { return x * phi(x); }, a, b, 1e-15, 1e-13);
  const double bar = M.value / I.value;
  const double rhs = (b - a) * phi(bar);
  const double rel = (M.error + std::abs(bar) * I.error) / I.value;  // error of bar
  const double dphi = std::abs(phi(std::min(b, bar + 1e-6)) - phi(std::max(a, bar - 1e-6))) / 2e-6;
  return make_record("logconcave_projection", "", I, Estimate::det(rhs, (b - a) * dphi * rel), rhs - I.value,
                     base_tol);
}

// ---------------------------------------------------------------------------
// Reverse Rogers-Shephard for L_p polars

namespace detail {

struct PairBrackets {
  PolarBracket a, b;
};

// K^{o,p} and L^{o,p}; for L = -K the second is the exact negation of the
// first, so their barycenters are opposite by construction.
inline PairBrackets pair_brackets(const ConvexBody& k, const ConvexBody& l, PParam p, int resolution,
                                  double tol) {
  auto a = polar_bracket(k, p, resolution, tol);
  const double scale = k.is_ball() ? k.as_ball().radius : k.poly().scale;
  if (hausdorff_distance(l, negate(k)) <= 1e-12 * scale) return {a, a.negated()};
  auto b = polar_bracket(l, p, resolution, tol);
  const Vec ba = barycenter(a.inner), bb = barycenter(b.inner);
  const double gap = hausdorff_distance(a.inner, a.outer) + hausdorff_distance(b.inner, b.outer);
  if ((ba + bb).norm() > 1e-9 + gap)
    fail(ErrorKind::barycenters_not_opposite, "K^{o,p} and L^{o,p} must have opposite barycenters");
  return {a, b};
}

inline double diff_polar_volume(const ConvexBody& a, const ConvexBody& b) {
  return volume(polar(minkowski_diff(polar(a), polar(b))));
}

struct RsVolumes {
  Estimate conv, diff_polar, ka, lb;
};

// Each volume bracketed by its value on the inner and on the outer polytopes;
// all four are monotone under inclusion.
inline RsVolumes rs_volumes(const PairBrackets& pb) {
  RsVolumes v;
  v.conv = bracket(volume(conv_union(pb.a.inner, pb.b.inner)), volume(conv_union(pb.a.outer, pb.b.outer)));
  v.diff_polar = bracket(diff_polar_volume(pb.a.inner, pb.b.inner), diff_polar_volume(pb.a.outer, pb.b.outer));
  v.ka = bracket(volume(pb.a.inner), volume(pb.a.outer));
  v.lb = bracket(volume(pb.b.inner), volume(pb.b.outer));
  return v;
}

}  // namespace detail

/// C(2n,n) |conv(K^{o,p} cup L^{o,p})| |((K^{o,p})^o - (L^{o,p})^o)^o| >= |K^{o,p}| |L^{o,p}|.
inline CheckRecord check_reverse_rs(const ConvexBody& k, const ConvexBody& l, PParam p, double base_tol = 1e-6,
                                    int resolution = 0, double tol = 1e-8) {
  const int n = k.dim();
  const auto v = detail::rs_volumes(detail::pair_brackets(k, l, p, resolution, tol));
  const Estimate lhs = binomial(2 * n, n) * (v.conv * v.diff_polar);
  const Estimate rhs = v.ka * v.lb;
  return make_record("reverse_rs", "", lhs, rhs, lhs.value - rhs.value, base_tol);
}

/// |conv(K^{o,p} cup L^{o,p})| |((K^{o,p})^o - (L^{o,p})^o)^o| <= |K^{o,p}| |L^{o,p}|.
inline CheckRecord check_rs_forward(const ConvexBody& k, const ConvexBody& l, PParam p, double base_tol = 1e-6,
                                    int resolution = 0, double tol = 1e-8) {
  const auto v = detail::rs_volumes(detail::pair_brackets(k, l, p, resolution, tol));
  const Estimate lhs = v.conv * v.diff_polar;
  const Estimate rhs = v.ka * v.lb;
  return make_record("rs_forward", "", lhs, rhs, rhs.value - lhs.value, base_tol);
}

/// |(K cap L)^o| |(K - L)^o| <= |K^o| |L^o|, and, when K^o and L^o have
/// opposite barycenters, |(K cap L)^o| |(K - L)^o| >= (n!)^2/(2n)! |K^o| |L^o|.
inline std::vector<CheckRecord> check_classical_rs_polar(const ConvexBody& k, const ConvexBody& l,
                                                         double base_tol = 1e-6) {
  const int n = k.dim();
  const auto ko = polar(k), lo = polar(l);
  const double prod = volume(ko) * volume(lo);
  const double mixed = volume(polar(intersect(k, l))) * volume(polar(minkowski_diff(k, l)));
  const double err = 1e-12 * (prod + mixed);
  std::vector<CheckRecord> out;
  out.push_back(make_record("classical_rs_polar", "", Estimate::det(mixed, err), Estimate::det(prod, err),
                            prod - mixed, base_tol));
  const double scale = k.poly().scale + l.poly().scale;
  if ((barycenter(ko) + barycenter(lo)).norm() <= 1e-9 * scale) {
    const double c = factorial(n) * factorial(n) / factorial(2 * n);
    out.push_back(make_record("classical_rs_polar_reverse", "", Estimate::det(mixed, err),
                              Estimate::det(c * prod, err), mixed - c * prod, base_tol));
  }
  return out;
}

// ---------------------------------------------------------------------------
// The C_t construction behind the reverse Rogers-Shephard inequality

namespace detail {

// Importance sampling of int_{R^N} e^{-G} where G >= ||.||_Q for the box Q
// = [-q, q] (G's unit ball inside Q): z = T U with T ~ Gamma(N+1) and U
// uniform in Q has density e^{-||z||_Q} / (N! |Q|), and the weight
// N! |Q| e^{-G(z) + ||z||_Q} lies in [0, N! |Q|].
inline Estimate exp_gauge_integral_mc(const std::function<double(const Vec&)>& G, const Vec& q,
                                      std::uint64_t samples, std::uint64_t seed, std::uint64_t stream) {
  const int N = static_cast<int>(q.size());
  Rng rng(seed, stream);
  const double scale = factorial(N) * (2.0 * q).prod();
  double sum = 0.0, sum2 = 0.0;
  Vec u(N);
  for (std::uint64_t i = 0; i < samples; ++i) {
    for (int d = 0; d < N; ++d) u[d] = rng.uniform(-q[d], q[d]);
    const double t = rng.gamma_int(N + 1);
    const Vec z = t * u;
    double box_norm = 0.0;
    for (int d = 0; d < N; ++d) box_norm = std::max(box_norm, std::abs(z[d]) / q[d]);
    const double w = std::exp(-G(z) + box_norm);
    sum += w;
    sum2 += w * w;
  }
  const double S = static_cast<double>(samples);
  const double mean = sum / S;
  const double var = std::max(0.0, sum2 / S - mean * mean) * S / std::max(1.0, S - 1.0);
  return {scale * mean, 1.96 * scale * std::sqrt(var / S), Method::monte_carlo, samples};  // 95% radius
}

inline Vec abs_box(const ConvexBody& k) {
  const auto [lo, hi] = bounding_box(k);
  return lo.cwiseAbs().cwiseMax(hi.cwiseAbs());
}

}  // namespace detail

/// Sub-checks (a)-(d) on the t-grid for bodies A, B standing in for
/// K^{o,p} and L^{o,p} (o interior to both, opposite barycenters):
///   (a) |C~_t| <= |M_t| |C~_t cap H^perp|
///   (b) |C~_t| >= (n!)^2/(2n)! |M_t| |C~_t cap H^perp|
///   (c) int_R^{2n} f(x) g(-y) = (n!)^2 |A| |B|
///   (d) int_R^{2n} e^{-max(||v||_conv, ||u||_D)} = (2n)! |conv(A cup B)| |D|, D = (A^o - B^o)^o
/// |C~_t| is sampled in the (x, y) box (the rotation to (u, v) preserves
/// volume); M_t = (T/sqrt2) conv(A cup B) and C~_t cap H^perp = sqrt2 T D
/// are exact polytopes, T = -log t.
inline std::vector<CheckRecord> check_ct_machinery(const ConvexBody& A, const ConvexBody& B,
                                                   const std::vector<double>& t_grid, std::uint64_t samples,
                                                   std::uint64_t seed, double base_tol = 1e-6) {
  const int n = A.dim();
  const double scale = A.poly().scale + B.poly().scale;
  if ((barycenter(A) + barycenter(B)).norm() > 1e-9 * scale)
    fail(ErrorKind::barycenters_not_opposite, "A and B must have opposite barycenters");
  const auto hull = conv_union(A, B);
  const auto D = polar(minkowski_diff(polar(A), polar(B)));
  const double vA = volume(A), vB = volume(B), vconv = volume(hull), vD = volume(D);
  const double rs = factorial(n) * factorial(n) / factorial(2 * n);
  const Vec qa = detail::abs_box(A), qb = detail::abs_box(B);
  std::vector<CheckRecord> out;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    if (!(t > 0.0 && t < 1.0)) fail(ErrorKind::invalid_argument, "t must lie in (0, 1)");
    const double T = -std::log(t);
    Vec lo(2 * n), hi(2 * n);
    lo << -T * qa, -T * qb;
    hi << T * qa, T * qb;
    const auto ct = mc_integral(
        [&](const Vec& z) { return gauge(A, z.head(n)) + gauge(B, -z.tail(n)) <= T; }, lo, hi,
        [](const Vec&) { return 1.0; }, samples, seed, 0xC7000 + i);
    const double mt = std::pow(T / std::sqrt(2.0), n) * vconv;
    const double ht = std::pow(std::sqrt(2.0) * T, n) * vD;
    const auto rhs = Estimate::det(mt * ht, 1e-12 * mt * ht);
    auto ra = make_record("ct_machinery", "", ct, rhs, rhs.value - ct.value, base_tol);
    ra.note = "(a) t=" + fmt(t) + " closed_form_Ct=" + fmt(std::pow(T, 2 * n) * vA * vB * rs);
    out.push_back(ra);
    auto rb = make_record("ct_machinery", "", ct, rs * rhs, ct.value - rs * rhs.value, base_tol);
    rb.note = "(b) t=" + fmt(t);
    out.push_back(rb);
  }
  // (c): G(x, y) = ||x||_A + ||y||_{-B}; its unit ball lies in A x (-B)
  Vec qc(2 * n);
  qc << qa, qb;
  const auto ic = detail::exp_gauge_integral_mc(
      [&](const Vec& z) { return gauge(A, z.head(n)) + gauge(B, -z.tail(n)); }, qc, samples, seed, 0xC7C);
  auto rc = make_record("ct_machinery", "", ic, Estimate::exact(factorial(n) * factorial(n) * vA * vB),
                        -std::abs(ic.value - factorial(n) * factorial(n) * vA * vB), base_tol);
  rc.note = "(c)";
  out.push_back(rc);
  // (d): the product gauge of conv(A cup B) x D
  Vec qd(2 * n);
  qd << detail::abs_box(hull), detail::abs_box(D);
  const auto id = detail::exp_gauge_integral_mc(
      [&](const Vec& z) { return product_gauge(hull, D, z.head(n), z.tail(n)); }, qd, samples, seed, 0xC7D);
  const double exact_d = factorial(2 * n) * vconv * vD;
  auto rd = make_record("ct_machinery", "", id, Estimate::exact(exact_d), -std::abs(id.value - exact_d), base_tol);
  rd.note = "(d)";
  out.push_back(rd);
  return out;
}

/// phi_t(v) = |C~_t cap ((o, v) + H^perp)| for n = 1, as a function on M_t.
/// The slice is {u : ||(u+v)/sqrt2||_A + ||(v-u)/sqrt2||_B <= T}, an interval
/// whose ends are found by bisection (the left side is convex in u).
inline std::function<double(double)> ct_slice_field(const ConvexBody& A, const ConvexBody& B, double T) {
  return [A, B, T](double v) {
    const double r2 = std::sqrt(2.0);
    auto G = [&](double u) {
      return gauge(A, make_vec({(u + v) / r2})) + gauge(B, make_vec({(v - u) / r2}));
    };
    // minimizer of the convex piecewise-linear G over a bracket
    double lo = -1e3, hi = 1e3;
    for (int i = 0; i < 200; ++i) {
      const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
      if (G(m1) <= G(m2)) hi = m2; else lo = m1;
    }
    const double um = 0.5 * (lo + hi);
    if (G(um) > T) return 0.0;
    auto edge = [&](double dir) {
      double a = um, b = um + dir;
      while (G(b) <= T) b = um + 2.0 * (b - um);
      for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        (G(m) <= T ? a : b) = m;
      }
      return 0.5 * (a + b);
    };
    return edge(1.0) - edge(-1.0);
  };
}

// ---------------------------------------------------------------------------
// Eq-level identities used as anchors and for bookkeeping

/// Spherical and full-space polar volume routes agree.
inline CheckRecord check_polar_routes(const ConvexBody& k, PParam p, double base_tol = 1e-6, double tol = 1e-10,
                                      int resolution = 0) {
  const auto r = lp_polar_volume_routes(LpEvaluator(k, p, tol, resolution));
  const double diff = std::abs(r.spherical.value - r.full_space.value);
  auto rec = make_record("polar_routes", "", r.spherical, r.full_space, -diff, base_tol);
  rec.note = "budget_ratio=" + fmt(diff / std::max(1e-300, r.spherical.error + r.full_space.error));
  return rec;
}

/// Bipolar identity about a center z: (K^z)^z = K.
inline CheckRecord check_bipolar(const ConvexBody& k, const Vec& z, double base_tol = 1e-9) {
  const double d = hausdorff_distance(polar(polar(k, z), z), k);
  return make_record("bipolar", "", Estimate::exact(d), Estimate::exact(0.0), -d, base_tol);
}

/// Steiner movement identities: K_0 = K, K_1 = reflection, K_{1/2} = symmetral,
/// constant volume, and [0, 1] inside the validity interval.
inline CheckRecord check_shadow_identities(const ConvexBody& k, const Direction& v, double base_tol = 1e-9) {
  const auto sys = make_parallel_chord(k, v, steiner_speed(k, v));
  const double scale = k.poly().scale;
  double d = 0.0;
  d = std::max(d, hausdorff_distance(body_at(sys, 0.0), k));
  d = std::max(d, hausdorff_distance(body_at(sys, 1.0), reflect(k, v)));
  d = std::max(d, hausdorff_distance(body_at(sys, 0.5), steiner_symmetrize(k, v)));
  const double vk = volume(k);
  for (double vt : volume_along(sys, {0.0, 0.25, 0.5, 0.75, 1.0})) d = std::max(d, std::abs(vt - vk) / vk);
  const double range = std::min(sys.valid_hi - 1.0, -sys.valid_lo);
  auto r = make_record("shadow_identities", "", Estimate::exact(d / scale), Estimate::exact(0.0),
                       std::min(-d / scale, range + 1e-12), base_tol);
  r.note = "validity=[" + fmt(sys.valid_lo) + ", " + fmt(sys.valid_hi) + "]";
  return r;
}

// ---------------------------------------------------------------------------
// Suite

/// The statements covered by the suite, each with the check ids exercising it.
struct CoverageEntry {
  std::string statement;
  std::vector<std::string> checks;
};

inline const std::vector<CoverageEntry>& coverage_manifest() {
  static const std::vector<CoverageEntry> manifest = {
      {"polar body about a center and the bipolar identity", {"bipolar"}},
      {"L_p support function, L_p polar gauge and L_p polar body", {"closed_form_anchors", "origin_iff"}},
      {"polar volume as a sphere integral and as a full-space integral", {"polar_routes"}},
      {"L_p Mahler volume", {"closed_form_anchors", "santalo_p"}},
      {"L_p Blaschke-Santalo inequality for symmetric bodies", {"santalo_p"}},
      {"shadow systems, parallel chord movements, chord profiles and the Steiner speed", {"shadow_identities"}},
      {"convexity in t of the L_p support function along a parallel movement", {"support_convexity"}},
      {"1/(n-1)-concavity in t of L_p polar section volumes", {"slice_concavity"}},
      {"sections of L_p polars of symmetric bodies at s and -s", {"section_symmetry"}},
      {"sections of L_p polars of K and of K_1 under the Steiner movement", {"reflection_sections"}},
      {"three-point inequality for L_p support functions", {"three_point"}},
      {"radial harmonic-mean integral lemma", {"ball_lemma"}},
      {"Minkowski midpoint inclusion of L_p polar sections", {"section_inclusion"}},
      {"Steiner symmetrization increases L_p polar volume", {"steiner_monotone"}},
      {"translated polar volume as an integral over K^o", {"translate_polar"}},
      {"sandwich K^o in K^{o,p} in c_p K^o", {"sandwich"}},
      {"upper bound n! c_p^n |B|^2 for centered bodies", {"prop_bound"}},
      {"origin interior to K iff interior to K^{o,p}", {"origin_iff"}},
      {"polar of an intersection of polars is the convex hull of the union", {"conv_polar_identity"}},
      {"infimal convolution of gauges is the gauge of the convex hull", {"infconv_identity"}},
      {"log-concave projection bound via the barycenter", {"logconcave_projection"}},
      {"product gauge of conv(A cup B) x D and its exponential integral", {"ct_machinery"}},
      {"C_t construction: projection bound, reverse bound and both integral identities", {"ct_machinery"}},
      {"reverse Rogers-Shephard inequality for L_p polars", {"reverse_rs"}},
      {"forward Rogers-Shephard inequality for L_p polars", {"rs_forward"}},
      {"classical Rogers-Shephard inequalities for polars and their reverse",
       {"classical_rs_polar", "classical_rs_polar_reverse"}},
  };
  return manifest;
}

/// Every check id the suite can emit, with its default instance count.
inline const std::vector<std::pair<std::string, int>>& check_catalog() {
  static const std::vector<std::pair<std::string, int>> catalog = {
      {"closed_form_anchors", 7},   {"polar_routes", 20},          {"bipolar", 20},
      {"shadow_identities", 20},    {"support_convexity", 200},    {"three_point", 100},
      {"section_inclusion", 50},    {"slice_concavity", 100},      {"section_symmetry", 30},
      {"reflection_sections", 30},  {"steiner_monotone", 50},      {"santalo_p", 40},
      {"prop_bound", 40},           {"sandwich", 30},              {"translate_polar", 30},
      {"ball_lemma", 8},            {"origin_iff", 12},            {"conv_polar_identity", 30},
      {"infconv_identity", 30},     {"logconcave_projection", 12}, {"ct_machinery", 4},
      {"reverse_rs", 30},           {"rs_forward", 30},            {"classical_rs_polar", 30},
  };
  return catalog;
}

struct CheckSummary {
  std::string check_id;
  int instances = 0;
  int failures = 0;
  int diagnostics = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  double runtime_ms = 0.0;
};

inline std::vector<CheckSummary> summarize(const std::vector<CheckRecord>& records) {
  std::map<std::string, CheckSummary> by_id;
  for (const auto& r : records) {
    auto& s = by_id[r.check_id];
    s.check_id = r.check_id;
    ++s.instances;
    if (r.counts_as_failure()) ++s.failures;
    if (r.diagnostic || r.indeterminate) ++s.diagnostics;
    if (!r.diagnostic && !r.indeterminate) s.worst_margin = std::min(s.worst_margin, r.margin);
    s.runtime_ms += r.runtime_ms;
  }
  std::vector<CheckSummary> out;
  for (auto& [id, s] : by_id) out.push_back(s);
  return out;
}

inline int count_failures(const std::vector<CheckRecord>& records) {
  int f = 0;
  for (const auto& r : records) f += r.counts_as_failure() ? 1 : 0;
  return f;
}

namespace detail {

class SuiteRunner {
 public:
  explicit SuiteRunner(const SuiteConfig& cfg) : cfg_(cfg) {}

  std::vector<CheckRecord> run() {
    std::vector<CheckRecord> out;
    if (cfg_.dimensions.empty() || cfg_.p_values.empty()) return out;
    for (const auto& [id, count] : check_catalog()) {
      if (!cfg_.checks.empty() && std::find(cfg_.checks.begin(), cfg_.checks.end(), id) == cfg_.checks.end())
        continue;
      const int m = cfg_.instances_per_check > 0 ? cfg_.instances_per_check : count;
      for (int i = 0; i < m; ++i) run_instance(id, i, out);
    }
    std::stable_sort(out.begin(), out.end(), [](const CheckRecord& a, const CheckRecord& b) {
      return a.check_id != b.check_id ? a.check_id < b.check_id : a.index < b.index;
    });
    return out;
  }

 private:
  const SuiteConfig& cfg_;

  using Emit = std::function<void(CheckRecord)>;

  std::uint64_t seed_for(const std::string& id, int i) const {
    return derive_seed(derive_seed(cfg_.master_seed, stable_hash(id)), static_cast<std::uint64_t>(i));
  }

  // Dimension for instance i, cycling through the allowed ones present in the config.
  std::optional<int> dim_for(std::initializer_list<int> allowed, int i) const {
    std::vector<int> dims;
    for (int d : allowed)
      if (std::find(cfg_.dimensions.begin(), cfg_.dimensions.end(), d) != cfg_.dimensions.end()) dims.push_back(d);
    if (dims.empty()) return std::nullopt;
    return dims[static_cast<std::size_t>(i) % dims.size()];
  }

  PParam p_for(int i) const { return cfg_.p_values[static_cast<std::size_t>(i) % cfg_.p_values.size()]; }

  std::optional<PParam> p_among(std::initializer_list<double> wanted, int i) const {
    std::vector<PParam> ps;
    for (const auto& p : cfg_.p_values)
      for (double w : wanted)
        if ((std::isinf(w) && p.is_infinite()) || (!p.is_infinite() && p.value() == w)) ps.push_back(p);
    if (ps.empty()) return std::nullopt;
    return ps[static_cast<std::size_t>(i) % ps.size()];
  }

  int res(int n) const { return default_resolution(n, cfg_.resolution); }

  static ConvexBody random_body(int n, Rng& rng, bool symmetric) {
    const int lo = n == 1 ? 2 : (n == 2 ? 5 : 8), hi = n == 1 ? 2 : (n == 2 ? 12 : 14);
    const int count = lo + static_cast<int>(rng.below(hi - lo + 1));
    return random_polytope(n, count, rng.next_u64(), symmetric);
  }

  static ConvexBody centered(const ConvexBody& k) { return translate(k, -barycenter(k)); }

  static std::string body_desc(const ConvexBody& k) {
    if (k.is_ball()) return "ball(n=" + std::to_string(k.dim()) + ",r=" + fmt(k.as_ball().radius) + ")";
    return std::string(to_string(k.representation())) + "(n=" + std::to_string(k.dim()) +
           ",vertices=" + std::to_string(k.poly().vertices.size()) + ",volume=" + fmt(volume(k)) + ")";
  }

  void run_instance(const std::string& id, int i, std::vector<CheckRecord>& out) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<CheckRecord> recs;
    std::string desc;
    Emit emit = [&](CheckRecord r) { recs.push_back(std::move(r)); };
    bool skipped = false;
    try {
      skipped = !dispatch(id, i, desc, emit);
    } catch (const GeometryError& e) {
      CheckRecord r;
      r.check_id = id;
      r.pass = false;
      r.margin = -std::numeric_limits<double>::infinity();
      r.note = e.what();
      recs.push_back(std::move(r));
    }
    if (skipped) return;
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count() /
        std::max<std::size_t>(1, recs.size());
    for (auto& r : recs) {
      if (r.check_id.empty()) r.check_id = id;
      r.index = i;
      r.instance = desc + (r.instance.empty() ? "" : " " + r.instance);
      r.runtime_ms = ms;
      out.push_back(std::move(r));
    }
  }

  // Builds instance i of check `id`; false when the config excludes it.
  bool dispatch(const std::string& id, int i, std::string& desc, const Emit& emit) {
    Rng rng(seed_for(id, i), 0);
    const double bt = cfg_.base_tol;
    const double tol = cfg_.tol;

    if (id == "closed_form_anchors") return anchors(i, desc, emit);

    if (id == "polar_routes") {
      auto n = dim_for({2, 3}, i);
      if (!n) return false;
      const PParam p = p_for(i);
      const auto k = i % 5 == 4 ? ConvexBody::ball(Vec::Zero(*n), rng.uniform(0.5, 1.5))
                                : centered(random_body(*n, rng, i % 2 == 0));
      desc = body_desc(k) + " p=" + p.to_string();
      emit(check_polar_routes(k, p, bt, tol, res(*n)));
      return true;
    }
    if (id == "bipolar") {
      auto n = dim_for({1, 2, 3}, i);
      if (!n) return false;
      const auto k = random_body(*n, rng, false);
      const Vec z = 0.3 * rng.uniform() * rng.unit_vector(*n) * 0.5;
      desc = body_desc(k) + " z=" + fmt(z);
      emit(check_bipolar(k, z));
      return true;
    }
    if (id == "shadow_identities") {
      auto n = dim_for({2, 3}, i);
      if (!n) return false;
      const auto k = random_body(*n, rng, false);
      const Direction v(rng.unit_vector(*n));
      desc = body_desc(k) + " v=" + fmt(v.unit());
      emit(check_shadow_identities(k, v));
      return true;
    }
    if (id == "support_convexity" || id == "three_point") {
      auto n = dim_for({2}, i);
      if (!n) return false;
      const PParam p = p_for(i);
      const auto k = random_body(*n, rng, false);
      const Direction v(rng.unit_vector(*n));
      const bool translation = i % 10 == 0;
      const auto speed = translation ? SpeedFunction::constant(rng.uniform(-1, 1)) : random_speed(*n, rng);
      const auto sys = make_parallel_chord(k, v, speed);
      const double tlo = std::max(sys.valid_lo, -0.5), thi = std::min(sys.valid_hi, 1.5);
      double t1 = rng.uniform(tlo, thi), t2 = rng.uniform(tlo, thi);
      const double s = rng.uniform(-1.0, 1.0);
      const Vec xp = rng.unit_vector(*n - 1) * rng.uniform(0.0, 1.0);
      desc = body_desc(k) + " v=" + fmt(v.unit()) + " speed=" + speed.describe() + " p=" + p.to_string();
      if (id == "support_convexity") {
        desc += " x'=" + fmt(xp) + " s=" + fmt(s) + " t1=" + fmt(t1) + " t2=" + fmt(t2);
        emit(check_support_convexity(sys, p, xp, s, t1, t2, bt, tol));
      } else {
        static constexpr double kScales[] = {0.5, 1.0, 2.0};
        double b = kScales[rng.below(3)], c = kScales[rng.below(3)];
        Vec yp = rng.unit_vector(*n - 1) * rng.uniform(0.0, 1.0);
        if (i % 10 == 0) {  // coincident arguments: equality
          b = c;
          yp = xp;
          t2 = t1;
        }
        desc += " x'=" + fmt(xp) + " y'=" + fmt(yp) + " s=" + fmt(s) + " t1=" + fmt(t1) + " t2=" + fmt(t2) +
                " b=" + fmt(b) + " c=" + fmt(c);
        emit(check_three_point_inequality(sys, p, xp, yp, s, t1, t2, b, c, bt, tol));
      }
      return true;
    }
    if (id == "section_inclusion" || id == "slice_concavity") {
      auto n = dim_for({2}, i);
      if (!n) return false;
      const PParam p = p_for(i);
      const auto k = random_body(*n, rng, false);
      const Direction v(rng.unit_vector(*n));
      const auto speed = i % 3 == 0 ? SpeedFunction::steiner() : random_speed(*n, rng);
      const auto sys = make_parallel_chord(k, v, speed);
      const double thi = std::min(sys.valid_hi, 1.0);
      double t1 = rng.uniform(0.0, thi), t2 = rng.uniform(0.0, thi);
      if (i % 10 == 0) t2 = t1;  // equality witness
      if (speed.kind == SpeedFunction::Kind::steiner && i % 10 == 3) {
        t1 = 0.0;
        t2 = 1.0;
      }
      const double tm = 0.5 * (t1 + t2);
      const auto k1 = body_at(sys, t1), k2 = body_at(sys, t2), km = body_at(sys, tm);
      if (!origin_interior(k1) || !origin_interior(k2) || !origin_interior(km))
        fail(ErrorKind::origin_not_interior, "instance generator produced a body without o inside");
      const auto b1 = polar_bracket(k1, p, res(*n)), b2 = t2 == t1 ? b1 : polar_bracket(k2, p, res(*n));
      const auto bm = tm == t1 ? b1 : polar_bracket(km, p, res(*n));
      const double reach = std::min({reach_along(b1.inner, v), reach_along(b2.inner, v), reach_along(bm.inner, v)});
      const double s = rng.uniform(-0.8, 0.8) * reach;
      desc = body_desc(k) + " v=" + fmt(v.unit()) + " speed=" + speed.describe() + " p=" + p.to_string() +
             " s=" + fmt(s) + " t1=" + fmt(t1) + " t2=" + fmt(t2);
      if (id == "section_inclusion")
        emit(check_section_inclusion(b1, b2, bm, v, s, bt));
      else
        emit(check_slice_concavity(b1, b2, bm, v, s, bt));
      return true;
    }
    if (id == "section_symmetry") {
      auto n = dim_for({2}, i);
      if (!n) return false;
      const PParam p = p_for(i);
      const auto k = i == 0 ? cube(*n) : random_body(*n, rng, true);
      const Direction v(rng.unit_vector(*n));
      const auto b = polar_bracket(k, p, res(*n));
      const double s = (i % 10 == 1 ? 0.0 : rng.uniform(-0.8, 0.8)) * reach_along(b.inner, v);
      desc = body_desc(k) + " v=" + fmt(v.unit()) + " p=" + p.to_string() + " s=" + fmt(s);
      emit(check_section_symmetry(b, v, s, bt));
      return true;
    }
    if (id == "reflection_sections") {
      auto n = dim_for({2}, i);
      if (!n) return false;
      const PParam p = p_for(i);
      const auto k = random_body(*n, rng, false);
      const Direction v(rng.unit_vector(*n));
      const auto sys = make_parallel_chord(k, v, steiner_speed(k, v));
      const auto k1 = body_at(sys, 1.0);
      const auto b = polar_bracket(k, p, res(*n)), b1 = polar_bracket(k1, p, res(*n));
      const double s = rng.uniform(-0.8, 0.8) * std::min(reach_along(b.inner, v), reach_along(b1.inner, v));
      desc = body_desc(k) + " v=" + fmt(v.unit()) + " p=" + p.to_string() + " s=" + fmt(s);
      emit(check_reflection_sections(b, b1, v, s, false, bt));
      emit(check_reflection_sections(b, b1, v, s, true, bt));
      return true;
    }
    if (id == "steiner_monotone") {
      auto n = dim_for({2, 3}, i);
      auto p = p_among({1.0, 2.0, INFINITY}, i);
      if (!n || !p) return false;
      ConvexBody k = random_body(*n, rng, true);
      Direction v(rng.unit_vector(*n));
      if (i == 0 && *n == 2) {  // a rotated square and a coordinate direction
        const double th = std::numbers::pi / 6;
        Mat R(2, 2);
        R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
        k = linear_image(cube(2), R);
        v = Direction(make_vec({0.0, 1.0}));
      }
      desc = body_desc(k) + " v=" + fmt(v.unit()) + " p=" + p->to_string();
      emit(check_steiner_monotone(k, v, *p, bt, tol, res(*n)));
      return true;
    }
    if (id == "santalo_p") {
      auto n = dim_for({2, 1, 3}, i);
      if (!n) return false;
      const PParam p = p_for(i);
      const auto k = i % 10 == 0 ? ConvexBody::ball(Vec::Zero(*n), rng.uniform(0.5, 2.0)) : random_body(*n, rng, true);
      desc = body_desc(k) + " p=" + p.to_string();
      emit(check_santalo_p(k, p, bt, tol, res(*n)));
      return true;
    }
    if (id == "prop_bound") {
      auto n = dim_for({2, 1, 3}, i);
      if (!n) return false;
      const PParam p = p_for(i);
      const auto k = centered(random_body(*n, rng, false));
      desc = body_desc(k) + " p=" + p.to_string();
      emit(check_prop_bound(k, p, bt, tol, res(*n)));
      return true;
    }
    if (id == "sandwich") {
      auto n = dim_for({2, 1, 3}, i);
      if (!n) return false;
      const PParam p = p_for(i);
      const auto k = centered(random_body(*n, rng, false));
      desc = body_desc(k) + " p=" + p.to_string() + " directions=64";
      emit(check_sandwich(k, p, 64, bt, tol));
      return true;
    }
    if (id == "translate_polar") {
      if (i == 0) {
        if (!dim_for({1}, 0)) return false;
        desc = "[-1,1] z=(0.5) closed form 8/3";
        auto r = check_translate_polar(cube(1), make_vec({0.5}), 1e-10);
        const double exact = 8.0 / 3.0;
        r.note += " closed_form_error=" + fmt(std::abs(r.lhs.value - exact));
        r.margin = std::min(r.margin, -std::abs(r.lhs.value - exact));
        r.pass = r.margin >= -r.slack;
        emit(r);
        return true;
      }
      auto n = dim_for({2}, i);
      if (!n) return false;
      const auto k = random_body(*n, rng, false);
      // a point well inside, on the segment from o to a boundary point
      const Vec z = rng.uniform(0.1, 0.7) * support_point(k, rng.unit_vector(*n));
      desc = body_desc(k) + " z=" + fmt(z);
      emit(check_translate_polar(k, z, bt));
      return true;
    }
    if (id == "ball_lemma") return ball_lemma(i, rng, desc, emit);
    if (id == "origin_iff") {
      auto n = dim_for({1, 2, 3}, i);
      if (!n) return false;
      const PParam p = p_for(i);
      const auto base = random_body(*n, rng, false);
      const int mode = (i / 3) % 3;  // 0 interior, 1 exterior, 2 boundary
      ConvexBody k = base;
      if (mode == 1) {
        const Vec u = rng.unit_vector(*n);
        k = translate(base, (support(base, -u) + rng.uniform(0.2, 1.0)) * u);
      } else if (mode == 2) {
        const Vec x = base.poly().vertices.front();
        k = translate(base, -x);
      }
      desc = body_desc(k) + " p=" + p.to_string() + (mode == 0 ? " origin inside" : mode == 1 ? " origin outside" : " origin at a vertex");
      emit(check_origin_iff(k, p, bt));
      return true;
    }
    if (id == "conv_polar_identity") {
      auto n = dim_for({2, 3}, i);
      if (!n) return false;
      ConvexBody k = random_body(*n, rng, false), l = random_body(*n, rng, false);
      if (i == 0 && *n == 2) {
        k = cube(2);
        const double c = std::sqrt(0.5);
        Mat R(2, 2);
        R << c, -c, c, c;
        l = linear_image(cube(2), R);
      }
      desc = body_desc(k) + " " + body_desc(l);
      emit(check_conv_polar_identity(k, l, std::min(bt, 1e-9)));
      return true;
    }
    if (id == "infconv_identity") {
      auto n = dim_for({2, 3}, i);
      if (!n) return false;
      const auto a = centered(random_body(*n, rng, false));
      const auto b = i % 10 == 0 ? a : centered(random_body(*n, rng, false));
      desc = body_desc(a) + " " + body_desc(b) + " probes=32";
      emit(check_infconv_identity(a, b, rng.next_u64(), 32, bt));
      return true;
    }
    if (id == "logconcave_projection") return logconcave(i, rng, desc, emit);
    if (id == "ct_machinery") return ct_machinery(i, rng, desc, emit);
    if (id == "reverse_rs" || id == "rs_forward") {
      auto n = dim_for({1, 2}, i);
      auto p = p_among({1.0, INFINITY}, i / 2);
      if (!n) return false;
      const bool anchor = i == 0 && *n == 1 && p_among({INFINITY}, 0);  // equality case
      if (anchor) p = PParam::infinity();
      if (!n || !p) return false;
      ConvexBody k = anchor ? cube(1) : random_body(*n, rng, i % 4 == 3);
      const bool same = i % 4 == 3;  // K = L symmetric
      const ConvexBody l = same ? k : negate(k);
      if (anchor) {
        desc = "[-1,1] L=" + std::string(same ? "K" : "-K") + " p=" + p->to_string();
      } else {
        desc = body_desc(k) + (same ? " L=K" : " L=-K") + " p=" + p->to_string();
      }
      if (id == "reverse_rs")
        emit(check_reverse_rs(k, l, *p, bt, res(*n)));
      else
        emit(check_rs_forward(k, l, *p, bt, res(*n)));
      return true;
    }
    if (id == "classical_rs_polar") {
      auto n = dim_for({2, 3}, i);
      if (!n) return false;
      const auto k = random_body(*n, rng, false);
      const auto l = i % 2 == 0 ? negate(k) : random_body(*n, rng, false);
      desc = body_desc(k) + (i % 2 == 0 ? " L=-K" : " " + body_desc(l));
      for (auto& r : check_classical_rs_polar(k, l, bt)) emit(std::move(r));
      return true;
    }
    fail(ErrorKind::invalid_argument, "unknown check id " + id);
  }

  static double reach_along(const ConvexBody& k, const Direction& v) {
    return std::min(support(k, v.unit()), support(k, -v.unit()));
  }

  // beta = -lambda (g + f) + small affine term; valid at least on [0, 1].
  static SpeedFunction random_speed(int n, Rng& rng) {
    const double lambda = rng.uniform(0.0, 1.0);
    Vec coeffs(n - 1);
    for (int d = 0; d < n - 1; ++d) coeffs[d] = rng.uniform(-0.3, 0.3);
    return SpeedFunction::scaled_steiner(lambda, coeffs, rng.uniform(-0.2, 0.2));
  }

  bool anchors(int i, std::string& desc, const Emit& emit) {
    auto rec = [&](const std::string& what, const Estimate& got, double exact, double tol) {
      desc = what;
      auto r = make_record("closed_form_anchors", "", got, Estimate::exact(exact), -std::abs(got.value - exact), tol);
      emit(r);
      return true;
    };
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    switch (i) {
      case 0:
        if (!dim_for({1}, 0)) return false;
        return rec("h_{1,[-1,1]}(1) = log sinh 1", lp_support(LpEvaluator(cube(1), PParam(1.0)), make_vec({1.0})),
                   std::log(std::sinh(1.0)), 1e-8);
      case 1:
        if (!dim_for({1}, 0)) return false;
        return rec("|[-1,1]^{o,1}| = pi^2/2", lp_polar_volume(LpEvaluator(cube(1), PParam(1.0))), pi2 / 2,
                   1e-6 * pi2 / 2);
      case 2:
        if (!dim_for({2}, 0)) return false;
        return rec("M_inf([-1,1]^2) = 8", mahler_p(LpEvaluator(cube(2), PParam::infinity())), 8.0, 1e-9);
      case 3:
        if (!dim_for({2}, 0)) return false;
        return rec("M_inf(B_2^2) = pi^2", mahler_p_ball(2, PParam::infinity()), pi2, 1e-9);
      case 4:
        if (!dim_for({1}, 0)) return false;
        return rec("M_1(B_2^1) = pi^2", mahler_p_ball(1, PParam(1.0)), pi2, 1e-8);
      case 5:
        if (!dim_for({1}, 0)) return false;
        return rec("||1||_{[-1,1]^{o,1}} = 4/pi^2", lp_gauge(LpEvaluator(cube(1), PParam(1.0)), make_vec({1.0})),
                   4.0 / pi2, 1e-8);
      case 6:
        if (!dim_for({2}, 0)) return false;
        return rec("|(B_2^2)^{o,inf}| = pi", lp_polar_volume(LpEvaluator(ConvexBody::ball(Vec::Zero(2), 1.0),
                                                                          PParam::infinity())),
                   std::numbers::pi, 1e-9);
      default:
        return false;
    }
  }

  bool ball_lemma(int i, Rng& rng, std::string& desc, const Emit& emit) {
    const double bt = cfg_.base_tol;
    auto expo = [](double lam) { return RadialFunction{[lam](double x) { return std::exp(-lam * x); }, lam, 0.0}; };
    auto gauss = RadialFunction{[](double x) { return std::exp(-x * x); }, 1.0, 0.5};
    switch (i) {
      case 0:
        desc = "F=G=H=e^{-x} q=2 (equality)";
        emit(check_ball_lemma(expo(1), expo(1), expo(1), 2, bt));
        return true;
      case 1:
        desc = "F=G=H=e^{-x^2} q=3";
        emit(check_ball_lemma(gauss, gauss, gauss, 3, bt));
        return true;
      case 2:
        desc = "F=e^{-x} G=e^{-2x} H=e^{-1.5x} q=2 (equality)";
        emit(check_ball_lemma(expo(1), expo(2), expo(1.5), 2, bt));
        return true;
      case 3:
        desc = "F=e^{-x} G=e^{-2x} H=e^{-x} q=1";
        emit(check_ball_lemma(expo(1), expo(2), expo(1), 1, bt));
        return true;
      default: {
        // radial profiles of L_p polar gauges along a parallel chord movement
        auto n = dim_for({2}, i);
        if (!n) return false;
        const PParam p = p_among({0.5, 1.0, 2.0}, i).value_or(PParam(1.0));
        const auto k = random_body(*n, rng, false);
        const Direction v(rng.unit_vector(*n));
        const auto sys = make_parallel_chord(k, v, i % 2 ? steiner_speed(k, v) : random_speed(*n, rng));
        const double t1 = rng.uniform(0.0, 1.0), t2 = rng.uniform(0.0, 1.0);
        const double s = rng.uniform(-0.5, 0.5);
        const Vec xp = rng.unit_vector(*n - 1) * rng.uniform(0.0, 1.0);
        const Vec yp = rng.unit_vector(*n - 1) * rng.uniform(0.0, 1.0);
        auto e1 = std::make_shared<LpEvaluator>(body_at(sys, t1), p);
        auto e2 = std::make_shared<LpEvaluator>(body_at(sys, t2), p);
        auto em = std::make_shared<LpEvaluator>(body_at(sys, 0.5 * (t1 + t2)), p);
        const Vec w1 = detail::probe_point(sys, xp, s), w2 = detail::probe_point(sys, yp, s);
        const Vec wm = detail::probe_point(sys, 0.5 * (xp + yp), s);
        auto radial = [](std::shared_ptr<LpEvaluator> e, Vec w) {
          const double c = 0.5 * support(e->body(), w);
          const double r0 = detail::decay_start(*e, w, c);
          return RadialFunction{[e, w](double r) { return std::exp(-e->h(r * w)); }, c, r0};
        };
        desc = body_desc(k) + " v=" + fmt(v.unit()) + " p=" + p.to_string() + " t1=" + fmt(t1) + " t2=" + fmt(t2) +
               " s=" + fmt(s) + " x'=" + fmt(xp) + " y'=" + fmt(yp) + " q=n";
        emit(check_ball_lemma(radial(e1, w1), radial(e2, w2), radial(em, wm), *n, bt));
        return true;
      }
    }
  }

  bool logconcave(int i, Rng& rng, std::string& desc, const Emit& emit) {
    const double bt = cfg_.base_tol;
    if (i == 0) {
      desc = "phi=2 on [-1,1] (equality)";
      emit(check_logconcave_projection(-1.0, 1.0, [](double) { return 2.0; }, bt));
      return true;
    }
    if (i == 1) {
      desc = "phi=e^{-x^2} on [-1,1]";
      emit(check_logconcave_projection(-1.0, 1.0, [](double x) { return std::exp(-x * x); }, bt));
      return true;
    }
    if (i < 6) {
      // slice fields phi_t of the C_t construction, n = 1
      if (!dim_for({1}, 0)) return false;
      const auto a = random_body(1, rng, false);
      const auto b = negate(a);
      const double t = 0.2 * (i - 1);
      const double T = -std::log(t);
      const auto hull = conv_union(a, b);
      const auto [lo, hi] = detail::interval_of(hull);
      const double m_lo = T / std::sqrt(2.0) * lo, m_hi = T / std::sqrt(2.0) * hi;
      desc = "phi_t on M_t for A=" + body_desc(a) + " B=-A t=" + fmt(t);
      emit(check_logconcave_projection(m_lo, m_hi, ct_slice_field(a, b, T), bt));
      return true;
    }
    auto n = dim_for({2, 3, 1}, i);
    if (!n) return false;
    const auto m = random_body(*n, rng, false);
    const Vec w = rng.unit_vector(*n) * rng.uniform(0.0, 3.0);
    desc = "phi=exp(<w,x>) on " + body_desc(m) + " w=" + fmt(w);
    emit(check_logconcave_projection(m, w, 0.0, bt));
    return true;
  }

  bool ct_machinery(int i, Rng& rng, std::string& desc, const Emit& emit) {
    const std::vector<double> grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    const int n = i < 2 ? 1 : 2;
    if (!dim_for({n}, 0)) return false;
    const bool inf = i % 2 == 0;
    auto p = inf ? p_among({INFINITY}, 0) : p_among({1.0}, 0);
    if (!p) p = cfg_.p_values.front();
    const auto k = (n == 1 && inf) ? cube(1) : random_body(n, rng, i == 2);
    const auto a = polar_bracket(k, *p, res(n)).inner;
    const auto b = negate(a);
    desc = "K=" + body_desc(k) + " L=-K p=" + p->to_string() + " A=inner(K^{o,p}) B=-A";
    for (auto& r : check_ct_machinery(a, b, grid, cfg_.mc_samples, rng.next_u64(), cfg_.base_tol)) {
      r.instance = r.note;
      emit(std::move(r));
    }
    return true;
  }
};

}  // namespace detail

/// Deterministic run of every configured check; failures are recorded, not
/// thrown. Records are sorted by check id, then instance index.
inline std::vector<CheckRecord> run_suite(const SuiteConfig& cfg) { return detail::SuiteRunner(cfg).run(); }

}  // namespace lpgeom
