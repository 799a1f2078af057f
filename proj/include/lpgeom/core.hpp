// Basic vocabulary shared by every lpgeom module: vectors, error kinds,
// the exponent type and numerical estimates.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpgeom {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Tolerance for extreme-point, redundancy and containment decisions.
inline constexpr double kGeomEps = 1e-9;

enum class ErrorKind {
  degenerate_input,
  origin_not_interior,
  center_not_interior,
  empty_interior,
  empty_section,
  no_decay_bound,
  divergent_integral,
  unsupported_dimension,
  unsupported_operation,
  zero_acceptance,
  route_disagreement,
  identity_violation,
  barycenter_not_origin,
  barycenters_not_opposite,
  invalid_speed,
  not_convex_at_t,
  hypothesis_failed,
  invalid_argument,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::degenerate_input: return "DegenerateInput";
    case ErrorKind::origin_not_interior: return "OriginNotInterior";
    case ErrorKind::center_not_interior: return "CenterNotInterior";
    case ErrorKind::empty_interior: return "EmptyInterior";
    case ErrorKind::empty_section: return "EmptySection";
    case ErrorKind::no_decay_bound: return "NoDecayBound";
    case ErrorKind::divergent_integral: return "DivergentIntegral";
    case ErrorKind::unsupported_dimension: return "UnsupportedDimension";
    case ErrorKind::unsupported_operation: return "UnsupportedOperation";
    case ErrorKind::zero_acceptance: return "ZeroAcceptance";
    case ErrorKind::route_disagreement: return "RouteDisagreement";
    case ErrorKind::identity_violation: return "IdentityViolation";
    case ErrorKind::barycenter_not_origin: return "BarycenterNotOrigin";
    case ErrorKind::barycenters_not_opposite: return "BarycentersNotOpposite";
    case ErrorKind::invalid_speed: return "InvalidSpeed";
    case ErrorKind::not_convex_at_t: return "NotConvexAtT";
    case ErrorKind::hypothesis_failed: return "HypothesisFailed";
    case ErrorKind::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every precondition violation in the library surfaces as this exception.
class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw GeometryError(kind, what);
}

inline Vec make_vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Vec unit_axis(int n, int i) {
  Vec v = Vec::Zero(n);
  v[i] = 1.0;
  return v;
}

/// A unit vector. Construction normalizes; |unit| = 1 within 1e-12 afterwards.
class Direction {
 public:
  explicit Direction(const Vec& v) : unit_(v) {
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) fail(ErrorKind::invalid_argument, "direction must be a nonzero finite vector");
    unit_ /= norm;
  }

  const Vec& unit() const { return unit_; }
  int dim() const { return static_cast<int>(unit_.size()); }
  operator const Vec&() const { return unit_; }

 private:
  Vec unit_;
};

/// The exponent p in (0, inf]. Infinity is a distinct state, never a large float.
class PParam {
 public:
  explicit PParam(double p) : p_(p), infinite_(false) {
    if (!(p > 0.0) || !std::isfinite(p)) fail(ErrorKind::invalid_argument, "p must be a positive finite number (use PParam::infinity())");
  }
  static PParam infinity() { return PParam(); }

  bool is_infinite() const { return infinite_; }
  double value() const { return infinite_ ? std::numeric_limits<double>::infinity() : p_; }

  /// (1+p)^{1+1/p}/p, with the limit 1 at p = inf.
  double c_p() const {
    if (infinite_) return 1.0;
    return std::exp((1.0 + 1.0 / p_) * std::log1p(p_)) / p_;
  }

  std::string to_string() const;

  friend bool operator==(const PParam& a, const PParam& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.p_ == b.p_);
  }

 private:
  PParam() : p_(0.0), infinite_(true) {}
  double p_;
  bool infinite_;
};

inline std::string PParam::to_string() const {
  if (infinite_) return "inf";
  std::string s = std::to_string(p_);
  while (s.size() > 1 && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

inline PParam parse_p(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "INF" || text == "infinity") return PParam::infinity();
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(text, &used);
  } catch (const std::exception&) {
    fail(ErrorKind::invalid_argument, "cannot parse p value '" + text + "'");
  }
  if (used != text.size()) fail(ErrorKind::invalid_argument, "cannot parse p value '" + text + "'");
  return PParam(p);
}

enum class Method { deterministic, monte_carlo };

inline const char* to_string(Method m) { return m == Method::deterministic ? "deterministic" : "monte_carlo"; }

/// A value with an absolute error bound (deterministic) or a 95% confidence
/// radius (Monte Carlo).
struct Estimate {
  double value = 0.0;
  double error = 0.0;
  Method method = Method::deterministic;
  std::uint64_t samples_or_cells = 0;

  static Estimate exact(double v) { return {v, 0.0, Method::deterministic, 0}; }
  static Estimate det(double v, double err, std::uint64_t cells = 0) {
    return {v, std::abs(err), Method::deterministic, cells};
  }

  double lo() const { return value - error; }
  double hi() const { return value + error; }
};

inline Method combine(Method a, Method b) {
  return (a == Method::monte_carlo || b == Method::monte_carlo) ? Method::monte_carlo : Method::deterministic;
}

inline Estimate operator+(const Estimate& a, const Estimate& b) {
  return {a.value + b.value, a.error + b.error, combine(a.method, b.method), a.samples_or_cells + b.samples_or_cells};
}
inline Estimate operator-(const Estimate& a, const Estimate& b) {
  return {a.value - b.value, a.error + b.error, combine(a.method, b.method), a.samples_or_cells + b.samples_or_cells};
}
inline Estimate operator*(const Estimate& a, const Estimate& b) {
  return {a.value * b.value, std::abs(a.value) * b.error + std::abs(b.value) * a.error + a.error * b.error,
          combine(a.method, b.method), a.samples_or_cells + b.samples_or_cells};
}
inline Estimate operator*(double s, const Estimate& a) {
  return {s * a.value, std::abs(s) * a.error, a.method, a.samples_or_cells};
}

/// x^e with first-order error propagation (x > 0).
inline Estimate pow(const Estimate& a, double e) {
  const double v = std::pow(a.value, e);
  double err = std::abs(e) * std::pow(a.value, e - 1.0) * a.error;
  if (a.error >= a.value) err = std::max(err, std::abs(v));
  return {v, err, a.method, a.samples_or_cells};
}

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

}  // namespace lpgeom
