// Integration engines: exponential integrals over simplices and polytopes,
// adaptive Gauss-Kronrod, radial integrals with exponential tails, sphere
// grids and seeded Monte Carlo.
#pragma once

#include "lpgeom/body.hpp"
#include "lpgeom/core.hpp"
#include "lpgeom/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <queue>
#include <vector>

namespace lpgeom {

inline double ball_volume(int n) { return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0); }

/// Surface measure of S^{n-1}; 2 for n = 1 (two points).
inline double sphere_area(int n) { return n * ball_volume(n); }

inline double euler_beta(double a, double b) {
  if (!(a > 0 && b > 0)) fail(ErrorKind::invalid_argument, "beta needs positive arguments");
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

// ---------------------------------------------------------------------------
// Divided differences of exp

namespace detail {

// exp[d_0..d_k] for |d_i| small: sum_j h_j(d) / (j+k)!, with h_j the complete
// homogeneous symmetric polynomials.
inline double exp_dd_series(const double* d, int count) {
  const int k = count - 1;
  constexpr int kTerms = 48;
  double rho = 0.0;
  for (int i = 0; i < count; ++i) rho = std::max(rho, std::abs(d[i]));
  // |h_j| <= C(j+k,k) rho^j, so the tail term is at most rho^j / (j! k!);
  // the sum itself is at least e^{-rho} / k!. h_j can vanish by symmetry,
  // hence the bound and not the term.
  int terms = 1;
  for (double b = 1.0; terms < kTerms && b > 1e-18 * std::exp(-rho); ++terms) b *= rho / terms;
  std::array<double, kTerms> h{};
  h[0] = 1.0;
  for (int i = 0; i < count; ++i)
    for (int j = 1; j < terms; ++j) h[j] += d[i] * h[j - 1];
  double sum = 0.0, inv_fact = 1.0 / factorial(k), bound = inv_fact;
  for (int j = 0; j < terms; ++j) {
    sum += h[j] * inv_fact;
    inv_fact /= (j + k + 1);
    bound *= rho / (j + 1);
    if (bound < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace detail

/// Divided difference exp[a_0, ..., a_{m-1}] of x -> e^{x - shift}, m <= 16.
/// Nodes may repeat. Clusters narrower than 1 use a Taylor series about their
/// mean; wider spans use the recursive definition, which is well conditioned
/// there.
inline double exp_divided_difference(const double* nodes, int m, double shift = 0.0) {
  std::array<double, 16> a{};
  for (int i = 0; i < m; ++i) {
    // insertion sort; m is tiny
    int j = i;
    while (j > 0 && a[j - 1] > nodes[i]) {
      a[j] = a[j - 1];
      --j;
    }
    a[j] = nodes[i];
  }
  if (a[m - 1] - a[0] < 1.0) {
    const double c = 0.5 * (a[0] + a[m - 1]);
    std::array<double, 16> d{};
    for (int q = 0; q < m; ++q) d[q] = a[q] - c;
    return std::exp(c - shift) * detail::exp_dd_series(d.data(), m);
  }
  // table[i] holds exp[a_i .. a_{i+len-1}]
  std::array<double, 16> table{};
  for (int i = 0; i < m; ++i) table[i] = std::exp(a[i] - shift);
  for (int len = 2; len <= m; ++len) {
    for (int i = 0; i + len <= m; ++i) {
      const int j = i + len - 1;
      const double spread = a[j] - a[i];
      if (spread < 1.0) {
        const double c = 0.5 * (a[i] + a[j]);
        std::array<double, 16> d{};
        for (int q = 0; q < len; ++q) d[q] = a[i + q] - c;
        table[i] = std::exp(c - shift) * detail::exp_dd_series(d.data(), len);
      } else {
        table[i] = (table[i + 1] - table[i]) / spread;
      }
    }
  }
  return table[0];
}

inline double exp_divided_difference(const std::vector<double>& a, double shift = 0.0) {
  if (a.empty() || a.size() > 16) fail(ErrorKind::invalid_argument, "divided difference needs 1..16 nodes");
  return exp_divided_difference(a.data(), static_cast<int>(a.size()), shift);
}

/// Columns of s are the n+1 vertices of an n-simplex.
inline double integrate_exp_simplex(const Mat& s, const Vec& w, double shift = 0.0) {
  const int n = static_cast<int>(s.rows());
  std::array<double, 16> a{};
  for (int i = 0; i <= n; ++i) a[i] = s.col(i).dot(w);
  return factorial(n) * simplex_volume(s) * exp_divided_difference(a.data(), n + 1, shift);
}

/// First moment: integral of x e^{<x,w> - shift} over the simplex.
inline Vec integrate_exp_simplex_moment(const Mat& s, const Vec& w, double shift = 0.0) {
  const int n = static_cast<int>(s.rows());
  std::array<double, 16> a{};
  for (int i = 0; i <= n; ++i) a[i] = s.col(i).dot(w);
  const double scale = factorial(n) * simplex_volume(s);
  Vec out = Vec::Zero(n);
  for (int i = 0; i <= n; ++i) {
    a[n + 1] = a[i];  // repeated node: derivative in a_i
    out += s.col(i) * exp_divided_difference(a.data(), n + 2, shift);
  }
  return scale * out;
}

// ---------------------------------------------------------------------------
// Meshes

struct SimplexMesh {
  std::vector<Mat> simplices;  // n x (n+1), columns are vertices
  std::vector<double> volumes;
  double total_volume = 0.0;
};

inline SimplexMesh triangulate(const ConvexBody& k) {
  SimplexMesh mesh;
  for (auto& s : fan_simplices(k)) {
    const double v = simplex_volume(s);
    if (v <= 0.0) continue;
    mesh.volumes.push_back(v);
    mesh.total_volume += v;
    mesh.simplices.push_back(std::move(s));
  }
  if (mesh.simplices.empty()) fail(ErrorKind::degenerate_input, "empty triangulation");
  return mesh;
}

// ---------------------------------------------------------------------------
// Monte Carlo

/// Rejection sampling in the box [lo, hi]: mean of f over accepted points
/// times box volume, with zero on rejected points. The 95% radius is
/// 1.96 sd / sqrt(N).
inline Estimate mc_integral(const std::function<bool(const Vec&)>& inside, const Vec& lo, const Vec& hi,
                            const std::function<double(const Vec&)>& f, std::uint64_t samples, std::uint64_t seed,
                            std::uint64_t stream = 0) {
  const int n = static_cast<int>(lo.size());
  Rng rng(seed, stream);
  const double box = (hi - lo).prod();
  double sum = 0.0, sum2 = 0.0;
  std::uint64_t hits = 0;
  Vec x(n);
  for (std::uint64_t i = 0; i < samples; ++i) {
    for (int d = 0; d < n; ++d) x[d] = rng.uniform(lo[d], hi[d]);
    if (!inside(x)) continue;
    ++hits;
    const double v = f(x);
    sum += v;
    sum2 += v * v;
  }
  if (hits == 0) fail(ErrorKind::zero_acceptance, "no Monte Carlo sample landed in the region");
  const double N = static_cast<double>(samples);
  const double mean = sum / N;
  const double var = std::max(0.0, sum2 / N - mean * mean) * N / std::max(1.0, N - 1.0);
  return {box * mean, 1.96 * box * std::sqrt(var / N), Method::monte_carlo, samples};
}

// ---------------------------------------------------------------------------
// Exponential integrals over bodies

/// Integral of e^{<x,w>} over K. Deterministic (mesh) for polytopes with
/// n <= 3, Monte Carlo otherwise.
inline Estimate integrate_exp_body(const ConvexBody& k, const Vec& w, Method method = Method::deterministic,
                                   std::uint64_t samples = 200000, std::uint64_t seed = 1) {
  if (method == Method::deterministic && k.is_polytope() && k.dim() <= 3) {
    const auto mesh = triangulate(k);
    double total = 0.0;
    for (const auto& s : mesh.simplices) total += integrate_exp_simplex(s, w);
    return Estimate::det(total, 1e-13 * std::abs(total) * mesh.simplices.size(), mesh.simplices.size());
  }
  const auto [lo, hi] = bounding_box(k);
  return mc_integral([&](const Vec& x) { return contains(k, x, 0.0); }, lo, hi,
                     [&](const Vec& x) { return std::exp(x.dot(w)); }, samples, seed);
}

// ---------------------------------------------------------------------------
// One-dimensional quadrature

namespace detail {

inline constexpr std::array<double, 8> kKronrodX = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                                    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                                    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                                    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodW = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                                    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                                    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                                    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussW = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                                  0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

inline Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = kKronrodW[7] * fc, gauss = kGaussW[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double x = h * kKronrodX[i];
    const double s = f(c - x) + f(c + x);
    kron += kKronrodW[i] * s;
    if (i % 2 == 1) gauss += kGaussW[i / 2] * s;
  }
  return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod 7-15 on [a, b]; the error is the sum of the
/// per-panel Gauss/Kronrod differences.
inline Estimate integrate_gk(const std::function<double(double)>& f, double a, double b, double abs_tol,
                             double rel_tol = 1e-12, int max_panels = 2000) {
  std::priority_queue<detail::Panel> heap;
  auto first = detail::gk15(f, a, b);
  double value = first.value, error = first.error;
  heap.push(first);
  int panels = 1;
  // below ~50 ulp of the value the estimate is roundoff, not truncation
  while (error > std::max({abs_tol, rel_tol * std::abs(value), 1e-14 * std::abs(value)}) && panels < max_panels) {
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const auto l = detail::gk15(f, worst.a, mid), r = detail::gk15(f, mid, worst.b);
    value += l.value + r.value - worst.value;
    error += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
    ++panels;
  }
  return Estimate::det(value, std::max(error, 4e-16 * std::abs(value) * panels), panels);
}

/// Integral of r^{n-1} f(r) over (0, inf). The caller promises a decay rate
/// c > 0: beyond the truncation point R, f(r) <= f(R) e^{-c (r - R)}. R is
/// doubled until the implied tail bound falls below tol times the value.
inline Estimate integrate_radial(const std::function<double(double)>& f, int n, double tol, double c,
                                 double r0 = 1.0) {
  if (!(c > 0.0) || !std::isfinite(c)) fail(ErrorKind::no_decay_bound, "decay rate must be positive");
  auto integrand = [&](double r) { return std::pow(r, n - 1) * f(r); };
  auto tail = [&](double R) {
    // f(R) * int_R^inf r^{n-1} e^{-c (r-R)} dr
    double s = 0.0, term = 1.0 / c;
    for (int k = 0; k < n; ++k) {
      s += term * std::pow(R, n - 1 - k);
      term *= static_cast<double>(n - 1 - k) / c;
    }
    return f(R) * s;
  };
  double R = std::max(r0, 4.0 * n / c);
  double a = 0.0, value = 0.0, error = 0.0;
  std::uint64_t cells = 0;
  for (int guard = 0; guard < 80; ++guard) {
    const auto piece = integrate_gk(integrand, a, R, 0.1 * tol * std::abs(value), 0.1 * tol);
    value += piece.value;
    error += piece.error;
    cells += piece.samples_or_cells;
    const double t = tail(R);
    if (!std::isfinite(t)) fail(ErrorKind::divergent_integral, "radial integrand is not finite");
    if (t <= tol * value) return Estimate::det(value, error + t, cells);
    a = R;
    R *= 2.0;
  }
  fail(ErrorKind::divergent_integral, "radial integral did not converge");
}

namespace detail {

struct VecPanel {
  double a, b;
  Vec value;
  double error;
  bool operator<(const VecPanel& o) const { return error < o.error; }
};

inline VecPanel gk15_vec(const std::function<Vec(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const Vec fc = f(c);
  Vec kron = kKronrodW[7] * fc;
  double gauss = kGaussW[3] * fc[0];
  for (int i = 0; i < 7; ++i) {
    const double x = h * kKronrodX[i];
    const Vec s = f(c - x) + f(c + x);
    kron += kKronrodW[i] * s;
    if (i % 2 == 1) gauss += kGaussW[i / 2] * s[0];
  }
  return {a, b, kron * h, std::abs((kron[0] - gauss) * h)};
}

}  // namespace detail

/// Radial integral of r^{n-1} f(r) for vector-valued f. Refinement and
/// truncation are driven by component 0, which must be the dominant positive
/// density (the other components are moments of it).
inline std::pair<Estimate, Vec> integrate_radial_vec(const std::function<Vec(double)>& f, int n, double tol, double c,
                                                     double r0 = 1.0) {
  if (!(c > 0.0) || !std::isfinite(c)) fail(ErrorKind::no_decay_bound, "decay rate must be positive");
  auto integrand = [&](double r) -> Vec { return std::pow(r, n - 1) * f(r); };
  double R = std::max(r0, 4.0 * n / c);
  double a = 0.0, error = 0.0;
  Vec value;
  std::uint64_t cells = 0;
  for (int guard = 0; guard < 80; ++guard) {
    std::priority_queue<detail::VecPanel> heap;
    auto first = detail::gk15_vec(integrand, a, R);
    Vec piece = first.value;
    double perr = first.error;
    heap.push(first);
    int panels = 1;
    const double base = value.size() ? value[0] : 0.0;
    while (perr > std::max(0.1 * tol, 1e-14) * std::abs(base + piece[0]) && panels < 2000) {
      const auto worst = heap.top();
      heap.pop();
      const double mid = 0.5 * (worst.a + worst.b);
      auto l = detail::gk15_vec(integrand, worst.a, mid), r = detail::gk15_vec(integrand, mid, worst.b);
      piece += l.value + r.value - worst.value;
      perr += l.error + r.error - worst.error;
      heap.push(std::move(l));
      heap.push(std::move(r));
      ++panels;
    }
    value = value.size() ? Vec(value + piece) : piece;
    error += perr;
    cells += panels;
    double s = 0.0, term = 1.0 / c;
    for (int k = 0; k < n; ++k) {
      s += term * std::pow(R, n - 1 - k);
      term *= static_cast<double>(n - 1 - k) / c;
    }
    const double t = f(R)[0] * s;
    if (!std::isfinite(t)) fail(ErrorKind::divergent_integral, "radial integrand is not finite");
    if (t <= tol * value[0]) return {Estimate::det(value[0], error + t, cells), value};
    a = R;
    R *= 2.0;
  }
  fail(ErrorKind::divergent_integral, "radial integral did not converge");
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
inline void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w) {
  x.assign(m, 0.0);
  w.assign(m, 0.0);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5)), dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[m - 1 - i] = z;
    w[i] = w[m - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

// ---------------------------------------------------------------------------
// Sphere grids

struct SphereGrid {
  int dim = 0;
  std::vector<Vec> nodes;
  std::vector<double> weights;
  // weights of the nested half-resolution rule on the same nodes (zero where
  // a node is not used); the difference of the two rules is the error proxy
  std::vector<double> coarse_weights;
};

namespace detail {

// Clenshaw-Curtis on [-1, 1] with N+1 points x_j = cos(pi j / N), N even.
inline std::vector<double> clenshaw_curtis_weights(int N) {
  std::vector<double> w(N + 1, 0.0);
  for (int j = 0; j <= N; ++j) {
    double s = 0.0;
    for (int k = 0; k <= N / 2; ++k) {
      const double b = (k == 0 || 2 * k == N) ? 1.0 : 2.0;
      s += b / (1.0 - 4.0 * k * k) * std::cos(2.0 * k * j * std::numbers::pi / N);
    }
    const double c = (j == 0 || j == N) ? 1.0 : 2.0;
    w[j] = c * s / N;
  }
  return w;
}

}  // namespace detail

/// n = 1: the two points +-1. n = 2: uniform angles (trapezoid, exact for
/// trigonometric polynomials of degree < resolution). n = 3: Clenshaw-Curtis
/// in z = cos(theta) with about resolution/2 rows, times a uniform azimuth.
/// Every grid is invariant under u -> -u.
inline SphereGrid sphere_grid(int n, int resolution) {
  SphereGrid g;
  g.dim = n;
  if (n == 1) {
    g.nodes = {make_vec({1.0}), make_vec({-1.0})};
    g.weights = {1.0, 1.0};
    g.coarse_weights = g.weights;
    return g;
  }
  if (n == 2) {
    const int m = std::max(4, resolution + resolution % 2);
    for (int i = 0; i < m; ++i) {
      const double th = 2.0 * std::numbers::pi * i / m;
      g.nodes.push_back(make_vec({std::cos(th), std::sin(th)}));
      g.weights.push_back(2.0 * std::numbers::pi / m);
      g.coarse_weights.push_back(i % 2 == 0 ? 4.0 * std::numbers::pi / m : 0.0);
    }
    return g;
  }
  if (n == 3) {
    // polar index N multiple of 4 so the coarse rule N/2 is even; azimuth 2N
    int N = std::max(4, resolution / 2);
    N += (4 - N % 4) % 4;
    const int M = 2 * N;
    const auto wz = detail::clenshaw_curtis_weights(N);
    const auto wz2 = detail::clenshaw_curtis_weights(N / 2);
    for (int j = 0; j <= N; ++j) {
      const double z = std::cos(std::numbers::pi * j / N);
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double cw = (j % 2 == 0) ? wz2[j / 2] : 0.0;
      if (j == 0 || j == N) {
        g.nodes.push_back(make_vec({0.0, 0.0, z}));
        g.weights.push_back(wz[j] * 2.0 * std::numbers::pi);
        g.coarse_weights.push_back(cw * 2.0 * std::numbers::pi);
        continue;
      }
      for (int i = 0; i < M; ++i) {
        const double ph = 2.0 * std::numbers::pi * (i + 0.5 * (j % 2)) / M;
        g.nodes.push_back(make_vec({rho * std::cos(ph), rho * std::sin(ph), z}));
        g.weights.push_back(wz[j] * 2.0 * std::numbers::pi / M);
        // coarse: even polar rows only, every other azimuth
        g.coarse_weights.push_back((j % 2 == 0 && i % 2 == 0) ? cw * 4.0 * std::numbers::pi / M : 0.0);
      }
    }
    return g;
  }
  fail(ErrorKind::unsupported_dimension, "sphere grids support n <= 3");
}

/// Integral of f over S^{n-1} with the fine rule and |fine - coarse| as the error.
inline Estimate integrate_sphere(const SphereGrid& g, const std::vector<double>& values) {
  double fine = 0.0, coarse = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    fine += g.weights[i] * values[i];
    coarse += g.coarse_weights[i] * values[i];
  }
  return Estimate::det(fine, std::abs(fine - coarse), values.size());
}

inline Estimate integrate_sphere(const SphereGrid& g, const std::function<double(const Vec&)>& f) {
  std::vector<double> v;
  v.reserve(g.nodes.size());
  for (const auto& u : g.nodes) v.push_back(f(u));
  return integrate_sphere(g, v);
}

namespace detail {

struct Square {
  double x0, x1, y0, y1, value, error;
  int face, split_axis;
  bool operator<(const Square& o) const { return error < o.error; }
};

// Genz-Malik degree 7 rule with its embedded degree 5 rule on a rectangle,
// plus the axis with the larger fourth difference.
inline Square genz_malik(const std::function<double(double, double)>& f, double x0, double x1, double y0, double y1,
                         int face) {
  static const double l2 = std::sqrt(9.0 / 70.0), l3 = std::sqrt(9.0 / 10.0), l5 = std::sqrt(9.0 / 19.0);
  const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1), hx = 0.5 * (x1 - x0), hy = 0.5 * (y1 - y0);
  auto F = [&](double a, double b) { return f(cx + a * hx, cy + b * hy); };
  const double f0 = F(0, 0);
  const double a2 = F(l2, 0) + F(-l2, 0), b2 = F(0, l2) + F(0, -l2);
  const double a3 = F(l3, 0) + F(-l3, 0), b3 = F(0, l3) + F(0, -l3);
  const double s4 = F(l3, l3) + F(l3, -l3) + F(-l3, l3) + F(-l3, -l3);
  const double s5 = F(l5, l5) + F(l5, -l5) + F(-l5, l5) + F(-l5, -l5);
  const double area = 4.0 * hx * hy;
  const double r7 = (-3816.0 * f0 + 2940.0 * (a2 + b2) + 1020.0 * (a3 + b3) + 200.0 * s4 + 6859.0 / 4.0 * s5) / 19683.0;
  const double r5 = -971.0 / 729.0 * f0 + 245.0 / 486.0 * (a2 + b2) + 65.0 / 1458.0 * (a3 + b3) + 25.0 / 729.0 * s4;
  const double ratio = (l2 * l2) / (l3 * l3);
  const double dx = std::abs(a2 - 2.0 * f0 - ratio * (a3 - 2.0 * f0));
  const double dy = std::abs(b2 - 2.0 * f0 - ratio * (b3 - 2.0 * f0));
  return {x0, x1, y0, y1, area * r7, area * std::abs(r7 - r5), face, dx >= dy ? 0 : 1};
}

}  // namespace detail

/// Adaptive integral over S^2 of a function given as g(x) = f(x/|x|) |x|^{-3}
/// on the faces of [-1,1]^3 (for f homogeneous of degree -3, g = f).
/// Genz-Malik squares split along the rougher axis until the summed error
/// estimate meets the tolerance.
inline Estimate integrate_sphere3_adaptive(const std::function<double(const Vec&)>& g, double abs_tol, double rel_tol,
                                           int max_squares = 20000) {
  auto face_fn = [&](int face) {
    const int axis = face / 2;
    const double sign = face % 2 ? -1.0 : 1.0;
    return [&g, axis, sign](double a, double b) {
      Vec x(3);
      x[axis] = sign;
      x[(axis + 1) % 3] = a;
      x[(axis + 2) % 3] = b;
      return g(x);
    };
  };
  std::array<std::function<double(double, double)>, 6> faces;
  for (int f = 0; f < 6; ++f) faces[f] = face_fn(f);
  std::priority_queue<detail::Square> heap;
  double value = 0.0, error = 0.0;
  // 2x2 start per face, so no face edge or axis passes through a square's interior only
  for (int f = 0; f < 6; ++f)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        auto s = detail::genz_malik(faces[f], -1.0 + i, i, -1.0 + j, j, f);
        value += s.value;
        error += s.error;
        heap.push(s);
      }
  int squares = static_cast<int>(heap.size());
  double checkpoint = std::numeric_limits<double>::quiet_NaN();
  while (error > std::max({abs_tol, rel_tol * std::abs(value), 1e-14 * std::abs(value)}) && squares < max_squares) {
    const auto s = heap.top();
    heap.pop();
    value -= s.value;
    error -= s.error;
    detail::Square parts[2];
    if (s.split_axis == 0) {
      const double m = 0.5 * (s.x0 + s.x1);
      parts[0] = detail::genz_malik(faces[s.face], s.x0, m, s.y0, s.y1, s.face);
      parts[1] = detail::genz_malik(faces[s.face], m, s.x1, s.y0, s.y1, s.face);
    } else {
      const double m = 0.5 * (s.y0 + s.y1);
      parts[0] = detail::genz_malik(faces[s.face], s.x0, s.x1, s.y0, m, s.face);
      parts[1] = detail::genz_malik(faces[s.face], s.x0, s.x1, m, s.y1, s.face);
    }
    for (const auto& q : parts) {
      value += q.value;
      error += q.error;
      heap.push(q);
    }
    if (++squares == max_squares / 2) checkpoint = value;
  }
  // rebuild the error sum from the heap: the running one drifts
  error = 0.0;
  for (auto h = heap; !h.empty(); h.pop()) error += h.top().error;
  // the local estimates are optimistic on kinked integrands; when the budget
  // ran out, the change over its second half is a second opinion
  if (std::isfinite(checkpoint)) error = std::max(error, std::abs(value - checkpoint));
  return Estimate::det(value, error, static_cast<std::uint64_t>(squares) * 17);
}

}  // namespace lpgeom
