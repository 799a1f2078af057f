// L_p support functions, L_p polar gauges and bodies, L_p Mahler volumes
// and the auxiliary functionals built from them.
//
//   h_{p,K}(y)   = (1/p) log( (1/|K|) int_K e^{p<x,y>} dx )
//   ||y||_{p,K}  = ( (1/(n-1)!) int_0^inf r^{n-1} e^{-h_{p,K}(r y)} dr )^{-1/n}
//   |K^{o,p}|    = (1/n) int_{S^{n-1}} ||u||^{-n} du = (1/n!) int_{R^n} e^{-h_{p,K}}
//   M_p(K)       = |K| |K^{o,p}|
#pragma once

#include "lpgeom/body.hpp"
#include "lpgeom/core.hpp"
#include "lpgeom/lp.hpp"
#include "lpgeom/quadrature.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

namespace lpgeom {

namespace detail {

// log E[e^{a t}] with t the first coordinate of a uniform point of B_2^n.
inline double log_ball_mgf(int n, double a) {
  a = std::abs(a);
  if (n == 1) {
    if (a < 1e-3) return a * a / 6.0 - a * a * a * a / 180.0;
    return a + std::log1p(-std::exp(-2.0 * a)) - std::log(2.0 * a);
  }
  if (n == 2) {
    // 2 I_1(a) / a = sum_k (a/2)^{2k} / (k! (k+1)!)
    if (a <= 40.0) {
      const double q = 0.25 * a * a;
      double term = 1.0, sum = 1.0;
      for (int k = 1; k < 400; ++k) {
        term *= q / (k * (k + 1.0));
        sum += term;
        if (term < 1e-17 * sum) break;
      }
      return std::log(sum);
    }
    // large-argument expansion of I_1
    const double mu = 4.0;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 12; ++k) {
      const double odd = 2.0 * k - 1.0;
      term *= -(mu - odd * odd) / (k * 8.0 * a);
      sum += term;
    }
    return std::log(2.0) - std::log(a) + a - 0.5 * std::log(2.0 * std::numbers::pi * a) + std::log(sum);
  }
  if (n == 3) {
    // 3 (a cosh a - sinh a) / a^3 = 3 sum_{k>=1} 2k a^{2k-2} / (2k+1)!
    if (a < 2.0) {
      double sum = 0.0, pw = 1.0, fact = 6.0;  // (2k+1)! at k = 1
      for (int k = 1; k < 40; ++k) {
        sum += 3.0 * 2.0 * k * pw / fact;
        pw *= a * a;
        fact *= (2.0 * k + 2.0) * (2.0 * k + 3.0);
      }
      return std::log(sum);
    }
    return std::log(1.5) + a + std::log((a - 1.0) + (a + 1.0) * std::exp(-2.0 * a)) - 3.0 * std::log(a);
  }
  fail(ErrorKind::unsupported_dimension, "ball L_p support supports n <= 3");
}

}  // namespace detail

/// Evaluates h_{p,K} and its gradient for one body and exponent. Immutable.
class LpEvaluator {
 public:
  /// `resolution` sets the sphere grids used for polar volumes and approximations.
  LpEvaluator(ConvexBody body, PParam p, double tol = 1e-10, int resolution = 0)
      : body_(std::move(body)), p_(p), tol_(tol), n_(body_.dim()) {
    resolution_ = resolution > 0 ? resolution : (n_ == 2 ? 128 : 24);
    if (body_.is_ball()) {
      volume_ = volume(body_);
      return;
    }
    if (n_ <= 3) {
      const auto mesh = triangulate(body_);
      for (std::size_t i = 0; i < mesh.simplices.size(); ++i) {
        simplices_.push_back(mesh.simplices[i]);
        weights_.push_back(factorial(n_) * mesh.volumes[i]);
      }
      volume_ = mesh.total_volume;
    }
  }

  const ConvexBody& body() const { return body_; }
  PParam p() const { return p_; }
  int dim() const { return n_; }
  double tol() const { return tol_; }
  int resolution() const { return resolution_; }
  double body_volume() const { return volume_; }
  bool deterministic() const { return body_.is_ball() || n_ <= 3; }

  /// h_{p,K}(y) as a plain number (deterministic paths only).
  double h(const Vec& y) const {
    if (p_.is_infinite()) return support(body_, y);
    if (body_.is_ball()) {
      const auto& b = body_.as_ball();
      const double p = p_.value();
      return b.center.dot(y) + detail::log_ball_mgf(n_, p * b.radius * y.norm()) / p;
    }
    require_mesh();
    const double p = p_.value();
    const Vec z = p * y;
    const double shift = support(body_, z);
    double total = 0.0;
    std::array<double, 16> a{};
    for (std::size_t i = 0; i < simplices_.size(); ++i) {
      const Mat& s = simplices_[i];
      for (int j = 0; j <= n_; ++j) a[j] = s.col(j).dot(z);
      total += weights_[i] * exp_divided_difference(a.data(), n_ + 1, shift);
    }
    return (std::log(total / volume_) + shift) / p;
  }

  /// h_{p,K}(y) and its gradient (the barycenter of the tilted density).
  std::pair<double, Vec> h_grad(const Vec& y) const {
    if (p_.is_infinite()) return {support(body_, y), support_point(body_, y)};
    const double p = p_.value();
    if (body_.is_ball()) {
      const auto& b = body_.as_ball();
      const double ny = y.norm();
      const double a = p * b.radius * ny;
      const double step = 1e-4 * std::max(1.0, a);
      const double lo = std::max(0.0, a - step), hi = a + step;
      const double slope = (detail::log_ball_mgf(n_, hi) - detail::log_ball_mgf(n_, lo)) / (hi - lo);
      Vec g = b.center;
      if (ny > 0) g += b.radius * slope * y / ny;
      return {b.center.dot(y) + detail::log_ball_mgf(n_, a) / p, g};
    }
    require_mesh();
    const Vec z = p * y;
    const double shift = support(body_, z);
    double total = 0.0;
    Vec moment = Vec::Zero(n_);
    std::array<double, 16> a{};
    for (std::size_t i = 0; i < simplices_.size(); ++i) {
      const Mat& s = simplices_[i];
      for (int j = 0; j <= n_; ++j) a[j] = s.col(j).dot(z);
      total += weights_[i] * exp_divided_difference(a.data(), n_ + 1, shift);
      for (int j = 0; j <= n_; ++j) {
        a[n_ + 1] = a[j];
        moment += (weights_[i] * exp_divided_difference(a.data(), n_ + 2, shift)) * s.col(j);
      }
    }
    return {(std::log(total / volume_) + shift) / p, moment / total};
  }

 private:
  void require_mesh() const {
    if (simplices_.empty()) fail(ErrorKind::unsupported_dimension, "deterministic L_p support needs n <= 3");
  }

  ConvexBody body_;
  PParam p_;
  double tol_;
  int n_;
  int resolution_ = 0;
  double volume_ = 0.0;
  std::vector<Mat> simplices_;
  std::vector<double> weights_;  // n! |S|
};

// ---------------------------------------------------------------------------
// L_p support

/// Monte Carlo L_p support for bodies without a mesh (n = 4): the log of a
/// ratio estimator over rejection samples, error by the delta method.
inline Estimate lp_support_mc(const ConvexBody& k, PParam p, const Vec& y, std::uint64_t samples,
                              std::uint64_t seed) {
  if (p.is_infinite()) return Estimate::exact(support(k, y));
  const int n = k.dim();
  const auto [lo, hi] = bounding_box(k);
  const double shift = p.value() * support(k, y);
  Rng rng(seed, 0x5a);
  double sum = 0.0, sum2 = 0.0;
  std::uint64_t hits = 0;
  Vec x(n);
  for (std::uint64_t i = 0; i < samples; ++i) {
    for (int d = 0; d < n; ++d) x[d] = rng.uniform(lo[d], hi[d]);
    if (!contains(k, x, 0.0)) continue;
    ++hits;
    const double v = std::exp(p.value() * x.dot(y) - shift);
    sum += v;
    sum2 += v * v;
  }
  if (hits < 2) fail(ErrorKind::zero_acceptance, "no Monte Carlo sample landed in the body");
  const double H = static_cast<double>(hits);
  const double mean = sum / H;
  const double var = std::max(0.0, sum2 / H - mean * mean) * H / (H - 1.0);
  const double rel = 1.96 * std::sqrt(var / H) / mean;
  return {(std::log(mean) + shift) / p.value(), rel / p.value(), Method::monte_carlo, samples};
}

inline Estimate lp_support(const LpEvaluator& e, const Vec& y, std::uint64_t mc_samples = 400000,
                           std::uint64_t seed = 1) {
  if (y.size() != e.dim()) fail(ErrorKind::invalid_argument, "dimension mismatch");
  if (e.p().is_infinite()) return Estimate::exact(support(e.body(), y));
  if (!e.deterministic()) return lp_support_mc(e.body(), e.p(), y, mc_samples, seed);
  const double v = e.h(y);
  // divided differences are accurate to a few ulps per simplex
  return Estimate::det(v, 1e-13 * (1.0 + std::abs(v) + std::abs(support(e.body(), y))), 1);
}

// ---------------------------------------------------------------------------
// L_p polar gauge

struct GaugeResult {
  Estimate value;
  Vec gradient;  // empty unless requested
};

namespace detail {

// Smallest radius from which the radial integrand decays at least at rate
// c = h_K(u)/2. The secant slope of r -> h_{p,K}(r u) is nondecreasing, so
// once it reaches c it stays there.
inline double decay_start(const LpEvaluator& e, const Vec& u, double c) {
  double r = 1.0 / (2.0 * c);
  for (int i = 0; i < 200; ++i) {
    const double d = 1e-3 * r;
    if ((e.h((r + d) * u) - e.h(r * u)) / d >= c) return r + d;
    r *= 1.5;
  }
  fail(ErrorKind::divergent_integral, "L_p support does not reach its decay rate");
}

inline void require_origin_interior(const ConvexBody& k) {
  if (!origin_interior(k)) fail(ErrorKind::origin_not_interior, "the origin must lie in the interior of the body");
}

}  // namespace detail

inline GaugeResult lp_gauge_full(const LpEvaluator& e, const Vec& y, bool want_gradient) {
  const int n = e.dim();
  if (y.size() != n) fail(ErrorKind::invalid_argument, "dimension mismatch");
  detail::require_origin_interior(e.body());
  const double ny = y.norm();
  if (ny == 0.0) return {Estimate::exact(0.0), want_gradient ? Vec(Vec::Zero(n)) : Vec()};
  const Vec u = y / ny;
  const double hk = support(e.body(), u);
  if (e.p().is_infinite()) {
    return {Estimate::exact(hk * ny), want_gradient ? support_point(e.body(), u) : Vec()};
  }
  if (!(hk > 0.0)) fail(ErrorKind::origin_not_interior, "support is not positive");
  const double c = 0.5 * hk;
  const double r0 = detail::decay_start(e, u, c);
  const double norm_fact = factorial(n - 1);
  if (!want_gradient) {
    const auto integral = integrate_radial([&](double r) { return std::exp(-e.h(r * u)); }, n, e.tol(), c, r0);
    const double I = integral.value / norm_fact;
    const double g = std::pow(I, -1.0 / n);
    return {Estimate::det(g * ny, g * ny * integral.error / (n * integral.value), integral.samples_or_cells), Vec()};
  }
  const auto [est, vec] = integrate_radial_vec(
      [&](double r) {
        const auto [hv, grad] = e.h_grad(r * u);
        Vec out(n + 1);
        const double w = std::exp(-hv);
        out[0] = w;
        out.tail(n) = (r * w) * grad;
        return out;
      },
      n, e.tol(), c, r0);
  const double I = est.value / norm_fact;
  const double g = std::pow(I, -1.0 / n);
  // d/dy of I(y) is -(1/(n-1)!) int r^n e^{-h(ry)} grad h(ry) dr
  const Vec dI = -vec.tail(n) / norm_fact;
  const Vec grad = (-1.0 / n) * std::pow(I, -1.0 / n - 1.0) * dI;
  return {Estimate::det(g * ny, g * ny * est.error / (n * est.value), est.samples_or_cells), grad};
}

/// L_p polar gauge; 0 at y = o by convention.
inline Estimate lp_gauge(const LpEvaluator& e, const Vec& y) { return lp_gauge_full(e, y, false).value; }

// ---------------------------------------------------------------------------
// L_p polar volume

struct PolarVolumeRoutes {
  Estimate spherical;   // (1/n) int_S ||u||^{-n}
  Estimate full_space;  // (1/n!) int_{R^n} e^{-h}
  Estimate combined;
};

namespace detail {

inline Estimate spherical_route(const LpEvaluator& e, const SphereGrid& g) {
  const int n = e.dim();
  std::vector<double> vals;
  double gauge_err = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto gv = lp_gauge(e, g.nodes[i]);
    vals.push_back(std::pow(gv.value, -n) / n);
    gauge_err += g.weights[i] * std::pow(gv.value, -n - 1) * gv.error;
  }
  auto est = integrate_sphere(g, vals);
  est.error += gauge_err;
  return est;
}

// p = inf on a polytope: ||u|| = max_v <v,u> is smooth inside each normal
// cone, so integrate cone by cone (adaptive arcs in n = 2, two Gauss orders
// on triangles in n = 3). In n = 3 the cones
// are cut by the faces of [-1,1]^3, where the integrand of the sphere
// integral is just h_K(x)^{-3} / 3 by homogeneity.
inline Estimate spherical_route_cells(const ConvexBody& k) {
  const int n = k.dim();
  const auto& verts = k.poly().vertices;
  std::vector<double> x8, w8, x16, w16;
  gauss_legendre(8, x8, w8);
  gauss_legendre(16, x16, w16);
  double value = 0.0, error = 0.0;
  std::uint64_t cells = 0;
  if (n == 2) {
    for (std::size_t i = 0; i < verts.size(); ++i) {
      // arc where v_i is the maximizer, from the two hull edges at v_i
      const Vec& v = verts[i];
      std::vector<double> angles;
      for (const auto& f : k.poly().facets)
        if (std::abs(f.normal.dot(v) - f.offset) <= 1e-9 * k.poly().scale)
          angles.push_back(std::atan2(f.normal[1], f.normal[0]));
      if (angles.size() != 2) fail(ErrorKind::degenerate_input, "vertex without exactly two incident edges");
      double a = angles[0], b = angles[1];
      if (b < a) std::swap(a, b);
      if (b - a > std::numbers::pi) {  // the cone wraps through +-pi
        std::swap(a, b);
        b += 2.0 * std::numbers::pi;
      }
      const auto I = integrate_gk(
          [&](double t) { return std::pow(v[0] * std::cos(t) + v[1] * std::sin(t), -2.0) / 2.0; }, a, b, 0.0, 1e-13);
      value += I.value;
      error += I.error;
      ++cells;
    }
  } else {
    for (int face = 0; face < 6; ++face) {
      const int axis = face / 2;
      const double sign = face % 2 ? -1.0 : 1.0;
      auto lift = [&](double a, double b) {
        Vec x(3);
        x[axis] = sign;
        x[(axis + 1) % 3] = a;
        x[(axis + 2) % 3] = b;
        return x;
      };
      for (std::size_t i = 0; i < verts.size(); ++i) {
        const Vec& v = verts[i];
        std::vector<std::array<double, 2>> poly{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
        for (std::size_t j = 0; j < verts.size() && !poly.empty(); ++j) {
          if (j == i) continue;
          // keep <v - w, lift(a, b)> >= 0, affine in (a, b)
          const Vec d = v - verts[j];
          const double c0 = d[axis] * sign, ca = d[(axis + 1) % 3], cb = d[(axis + 2) % 3];
          auto side = [&](const std::array<double, 2>& p) { return c0 + ca * p[0] + cb * p[1]; };
          std::vector<std::array<double, 2>> out;
          for (std::size_t m = 0; m < poly.size(); ++m) {
            const auto& p = poly[m];
            const auto& q = poly[(m + 1) % poly.size()];
            const double sp = side(p), sq = side(q);
            if (sp >= 0) out.push_back(p);
            if ((sp >= 0) != (sq >= 0)) {
              const double t = sp / (sp - sq);
              out.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
            }
          }
          poly = std::move(out);
        }
        if (poly.size() < 3) continue;
        // fan triangles, each by a collapsed (Duffy) tensor rule
        auto tri = [&](const std::array<double, 2>& A, const std::array<double, 2>& B, const std::array<double, 2>& C,
                       const std::vector<double>& xs, const std::vector<double>& ws) {
          const double area2 = std::abs((B[0] - A[0]) * (C[1] - A[1]) - (B[1] - A[1]) * (C[0] - A[0]));
          double sum = 0.0;
          for (std::size_t p = 0; p < xs.size(); ++p)
            for (std::size_t q = 0; q < xs.size(); ++q) {
              const double s = 0.5 * (xs[p] + 1.0), t = 0.5 * (xs[q] + 1.0);
              const double a = A[0] + s * (B[0] - A[0]) + s * t * (C[0] - B[0]);
              const double b = A[1] + s * (B[1] - A[1]) + s * t * (C[1] - B[1]);
              sum += 0.25 * ws[p] * ws[q] * s * area2 * std::pow(v.dot(lift(a, b)), -3.0) / 3.0;
            }
          return sum;
        };
        for (std::size_t m = 1; m + 1 < poly.size(); ++m) {
          const double f8 = tri(poly[0], poly[m], poly[m + 1], x8, w8);
          const double f16 = tri(poly[0], poly[m], poly[m + 1], x16, w16);
          value += f16;
          error += std::abs(f16 - f8);
        }
        ++cells;
      }
    }
  }
  return Estimate::det(value, error + 1e-14 * value, cells);
}

// Shell order: a fixed Gauss-Kronrod panel set in r, common to all
// directions, and the sphere sum inside each shell.
inline Estimate full_space_route(const LpEvaluator& e, const SphereGrid& g) {
  const int n = e.dim();
  double hk_max = 0.0, R = 0.0;
  for (const auto& u : g.nodes) {
    const double hk = support(e.body(), u);
    if (!(hk > 0.0)) fail(ErrorKind::origin_not_interior, "support is not positive");
    hk_max = std::max(hk_max, hk);
  }
  // truncation: the tail bound behind R is below tol times a lower bound
  // of the radial integral ((n-1)!/h_K^n, since h_{p,K} <= h_K)
  for (const auto& u : g.nodes) {
    const double hk = support(e.body(), u);
    const double c = 0.5 * hk;
    double r = decay_start(e, u, c);
    for (int guard = 0; guard < 400; ++guard) {
      double s = 0.0, term = 1.0 / c;
      for (int k = 0; k < n; ++k) {
        s += term * std::pow(r, n - 1 - k);
        term *= static_cast<double>(n - 1 - k) / c;
      }
      if (std::exp(-e.h(r * u)) * s <= 0.1 * e.tol() * factorial(n - 1) / std::pow(hk, n)) break;
      r *= 1.25;
    }
    R = std::max(R, r);
  }
  // Graded panels, width max(2/h_max, r/5). The exponent moves by at most
  // h_K(u) times the width across a panel, so in every direction a panel
  // either spans at most 10 decay lengths or starts where r h_K(u) > 50 and
  // the integrand is negligible.
  std::vector<double> edges{0.0};
  while (edges.back() < R) edges.push_back(edges.back() + std::max(2.0 / hk_max, 0.2 * edges.back()));
  const int panels = static_cast<int>(edges.size()) - 1;
  std::vector<double> kron(g.nodes.size(), 0.0), gauss(g.nodes.size(), 0.0);
  for (int k = 0; k < panels; ++k) {
    const double c = 0.5 * (edges[k] + edges[k + 1]), hw = 0.5 * (edges[k + 1] - edges[k]);
    for (int j = 0; j < 15; ++j) {
      const int idx = j < 7 ? j : (j == 7 ? 7 : 14 - j);
      const double x = (j < 7 ? -kKronrodX[j] : (j == 7 ? 0.0 : kKronrodX[14 - j])) * hw;
      const double r = c + x;
      const double wk = kKronrodW[idx] * hw;
      const bool is_gauss = (idx % 2 == 1) || idx == 7;
      const double wg = is_gauss ? kGaussW[idx == 7 ? 3 : idx / 2] * hw : 0.0;
      const double rp = std::pow(r, n - 1);
      for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const double f = rp * std::exp(-e.h(r * g.nodes[i]));
        kron[i] += wk * f;
        gauss[i] += wg * f;
      }
    }
  }
  const double scale = 1.0 / factorial(n);
  double radial_err = 0.0;
  std::vector<double> vals(g.nodes.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    vals[i] = scale * kron[i];
    radial_err += g.weights[i] * scale * std::abs(kron[i] - gauss[i]);
  }
  auto est = integrate_sphere(g, vals);
  est.error += radial_err + e.tol() * std::abs(est.value);
  est.samples_or_cells = static_cast<std::uint64_t>(panels) * g.nodes.size();
  return est;
}

}  // namespace detail

/// Both representations of |K^{o,p}| and their combination. Throws
/// RouteDisagreement when they differ by more than 5x the combined budget.
inline PolarVolumeRoutes lp_polar_volume_routes(const LpEvaluator& e) {
  const int n = e.dim();
  detail::require_origin_interior(e.body());
  if (!e.deterministic()) fail(ErrorKind::unsupported_dimension, "polar volumes need n <= 3");
  const auto ga = sphere_grid(n, e.resolution());
  const auto gb = sphere_grid(n, std::max(8, e.resolution() / 2));
  PolarVolumeRoutes out;
  if (e.p().is_infinite() && e.body().is_polytope() && n >= 2) {
    out.spherical = detail::spherical_route_cells(e.body());
  } else if (n == 3 && e.p().is_infinite()) {
    out.spherical = integrate_sphere3_adaptive(
        [&](const Vec& x) { return std::pow(lp_gauge(e, x).value, -3.0) / 3.0; }, 0.0, 1e-9);
  } else {
    out.spherical = detail::spherical_route(e, ga);
  }
  const bool exact_polar = e.p().is_infinite() && (e.body().is_polytope() || e.body().as_ball().center.norm() == 0.0);
  if (exact_polar) {
    // (1/n!) int e^{-h_K} = |K^o| exactly
    const double v = volume(polar(e.body()));
    out.full_space = Estimate::det(v, 1e-13 * v);
  } else {
    out.full_space = detail::full_space_route(e, gb);
  }
  const double diff = std::abs(out.spherical.value - out.full_space.value);
  if (diff > 5.0 * (out.spherical.error + out.full_space.error) + 1e-12 * out.full_space.value)
    fail(ErrorKind::route_disagreement, "polar volume routes disagree: " + std::to_string(out.spherical.value) +
                                            " vs " + std::to_string(out.full_space.value));
  if (exact_polar) {
    out.combined = out.full_space;
  } else {
    out.combined = out.spherical;
    out.combined.error = std::max(out.spherical.error, diff);
  }
  return out;
}

inline Estimate lp_polar_volume(const LpEvaluator& e) { return lp_polar_volume_routes(e).combined; }

/// M_p(K) = |K| |K^{o,p}|.
inline Estimate mahler_p(const LpEvaluator& e) {
  const auto v = lp_polar_volume(e);
  return {e.body_volume() * v.value, e.body_volume() * v.error, v.method, v.samples_or_cells};
}

/// M_p(B_2^n) by rotational symmetry: one radial integral of e^{-h_{p,B}(r)}.
inline Estimate mahler_p_ball(int n, PParam p, double tol = 1e-12) {
  if (n < 1 || n > 3) fail(ErrorKind::unsupported_dimension, "ball benchmark supports n <= 3");
  const double vb = ball_volume(n);
  if (p.is_infinite()) return Estimate::exact(vb * vb);
  const double q = p.value();
  const auto radial =
      integrate_radial([&](double r) { return std::exp(-detail::log_ball_mgf(n, q * r) / q); }, n, tol, 0.5,
                       // log_mgf(a)/q has slope >= 1/2 once a is past a few units
                       std::max(4.0, 8.0 / q));
  const double scale = vb * sphere_area(n) / factorial(n);
  return Estimate::det(scale * radial.value, scale * radial.error, radial.samples_or_cells);
}

// ---------------------------------------------------------------------------
// Polytope approximations of K^{o,p}

struct LpPolarApprox {
  SphereGrid grid;
  std::vector<double> radii;  // 1 / ||u|| at each node
  ConvexBody inner;           // hull of the boundary points
  ConvexBody outer;           // tangent halfspaces at the boundary points
  double inner_volume = 0.0;
  double outer_volume = 0.0;
};

inline LpPolarApprox lp_polar_approx(const LpEvaluator& e, int resolution = 0) {
  const int n = e.dim();
  detail::require_origin_interior(e.body());
  auto grid = sphere_grid(n, resolution > 0 ? resolution : e.resolution());
  std::vector<double> radii;
  std::vector<Vec> points, normals;
  std::vector<double> offsets;
  for (const auto& u : grid.nodes) {
    const auto g = lp_gauge_full(e, u, true);
    if (!(g.value.value > 0.0) || !std::isfinite(g.value.value))
      fail(ErrorKind::divergent_integral, "L_p gauge is not finite and positive");
    radii.push_back(1.0 / g.value.value);
    points.push_back(u / g.value.value);
    normals.push_back(g.gradient);
    offsets.push_back(1.0);
  }
  auto inner = ConvexBody::from_vertices(points);
  auto outer = n == 1 ? inner : ConvexBody::from_halfspaces(normals, offsets, Vec::Zero(n));
  const double vi = volume(inner), vo = volume(outer);
  return {std::move(grid), std::move(radii), std::move(inner), std::move(outer), vi, vo};
}

/// (n-1)-volume of a section; 0 when the slice misses the body.
inline double section_volume_or_zero(const ConvexBody& k, const Direction& v, double s) {
  try {
    return volume(section(k, v, s));
  } catch (const GeometryError& err) {
    if (err.kind() == ErrorKind::empty_section) return 0.0;
    throw;
  }
}

/// Midpoint of the inner/outer bracket, half its width as the error.
inline Estimate lp_polar_section_volume(const LpPolarApprox& a, const Direction& v, double s) {
  const double vi = section_volume_or_zero(a.inner, v, s);
  const double vo = section_volume_or_zero(a.outer, v, s);
  if (vo == 0.0) fail(ErrorKind::empty_section, "slice misses the L_p polar body");
  return Estimate::det(0.5 * (vi + vo), 0.5 * (vo - vi));
}

inline Estimate lp_polar_section_volume(const LpEvaluator& e, const Direction& v, double s, int resolution = 0) {
  return lp_polar_section_volume(lp_polar_approx(e, resolution), v, s);
}

// ---------------------------------------------------------------------------
// Translated polars

/// |(K - z)^o| two ways: directly, and as int_{K^o} (1 - <z,x>)^{-(n+1)} dx.
/// The integral is exact on each simplex of a mesh of K^o: the projective map
/// x -> x / (1 - <z,x>) has exactly that Jacobian and sends a simplex with
/// vertices v_i to the simplex with vertices v_i / (1 - <z, v_i>).
struct TranslatePolar {
  Estimate direct;
  Estimate integral;
};

inline TranslatePolar translate_polar_volume_sides(const ConvexBody& k, const Vec& z) {
  const int n = k.dim();
  detail::require_origin_interior(k);
  if (!strictly_contains(k, z)) fail(ErrorKind::center_not_interior, "z must lie in the interior of K");
  const double direct = volume(polar(translate(k, -z)));
  const auto mesh = triangulate(polar(k));
  double total = 0.0;
  for (std::size_t i = 0; i < mesh.simplices.size(); ++i) {
    double denom = 1.0;
    for (int j = 0; j <= n; ++j) denom *= 1.0 - z.dot(mesh.simplices[i].col(j));
    total += mesh.volumes[i] / denom;
  }
  const double ulp = 1e-13 * (direct + total) * static_cast<double>(mesh.simplices.size());
  return {Estimate::det(direct, ulp), Estimate::det(total, ulp, mesh.simplices.size())};
}

inline Estimate translate_polar_volume(const ConvexBody& k, const Vec& z) {
  const auto sides = translate_polar_volume_sides(k, z);
  const double diff = std::abs(sides.direct.value - sides.integral.value);
  if (diff > 5.0 * (sides.direct.error + sides.integral.error) + 1e-10 * sides.direct.value)
    fail(ErrorKind::identity_violation, "translated polar volume identity fails");
  return Estimate::det(sides.direct.value, sides.direct.error + diff);
}

// ---------------------------------------------------------------------------
// Sandwich K^o in K^{o,p} in c_p K^o

/// Direction set for ratio scans: +-1 (n = 1), uniform angles (n = 2),
/// a spherical Fibonacci lattice (n = 3).
inline std::vector<Vec> scan_directions(int n, int count) {
  std::vector<Vec> out;
  if (n == 1) return {make_vec({1.0}), make_vec({-1.0})};
  if (n == 2) {
    for (int i = 0; i < count; ++i) {
      const double th = 2.0 * std::numbers::pi * (i + 0.5) / count;
      out.push_back(make_vec({std::cos(th), std::sin(th)}));
    }
    return out;
  }
  if (n == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / count;
      const double rho = std::sqrt(1.0 - z * z);
      out.push_back(make_vec({rho * std::cos(golden * i), rho * std::sin(golden * i), z}));
    }
    return out;
  }
  fail(ErrorKind::unsupported_dimension, "direction scans support n <= 3");
}

struct SandwichRatios {
  double min_ratio;
  double max_ratio;
  double error;  // bound on the numerical error of either ratio
};

/// Ratios radius_{K^{o,p}}(u) / radius_{K^o}(u) = h_K(u) / ||u||_{p,K}.
inline SandwichRatios sandwich_margins(const LpEvaluator& e, int directions = 64) {
  const auto& k = e.body();
  const Vec bar = barycenter(k);
  const double scale = k.is_ball() ? k.as_ball().radius : k.poly().scale;
  if (bar.norm() > 1e-9 * scale) fail(ErrorKind::barycenter_not_origin, "body must be centered at its barycenter");
  SandwichRatios out{std::numeric_limits<double>::infinity(), 0.0, 0.0};
  for (const auto& u : scan_directions(e.dim(), directions)) {
    const auto g = lp_gauge(e, u);
    const double ratio = support(k, u) / g.value;
    out.min_ratio = std::min(out.min_ratio, ratio);
    out.max_ratio = std::max(out.max_ratio, ratio);
    out.error = std::max(out.error, ratio * g.error / g.value);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Infimal convolution and product gauges

/// inf over x + y = z of ||x||_A + ||y||_B, as a linear program over
/// (y, lambda, mu): minimize lambda + mu with <a_i, z - y> <= lambda b_i and
/// <c_j, y> <= mu d_j.
inline double inf_conv_gauge(const ConvexBody& a, const ConvexBody& b, const Vec& z) {
  detail::require_origin_interior(a);
  detail::require_origin_interior(b);
  const int n = a.dim();
  if (z.norm() == 0.0) return 0.0;
  const auto ha = a.hpoly(), hb = b.hpoly();
  const int m = static_cast<int>(ha.normals.size() + hb.normals.size());
  Mat A = Mat::Zero(m + 2, n + 2);
  Vec rhs = Vec::Zero(m + 2);
  int row = 0;
  for (std::size_t i = 0; i < ha.normals.size(); ++i, ++row) {
    A.row(row).head(n) = -ha.normals[i].transpose();
    A(row, n) = -ha.offsets[i];
    rhs[row] = -ha.normals[i].dot(z);
  }
  for (std::size_t j = 0; j < hb.normals.size(); ++j, ++row) {
    A.row(row).head(n) = hb.normals[j].transpose();
    A(row, n + 1) = -hb.offsets[j];
  }
  A(row, n) = -1.0;  // lambda >= 0
  A(row + 1, n + 1) = -1.0;  // mu >= 0
  Vec c = Vec::Zero(n + 2);
  c[n] = c[n + 1] = -1.0;
  const auto res = lp_maximize(A, rhs, c);
  if (res.status != LpResult::Status::optimal) fail(ErrorKind::degenerate_input, "infimal convolution LP failed");
  return -res.objective;
}

/// max(||x||_A, ||y||_B), the gauge of A x B at (x, y).
inline double product_gauge(const ConvexBody& a, const ConvexBody& b, const Vec& x, const Vec& y) {
  return std::max(gauge(a, x), gauge(b, y));
}

}  // namespace lpgeom
