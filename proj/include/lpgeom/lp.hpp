// Dense two-phase simplex for the small linear programs that arise in
// halfspace-to-vertex conversion (Chebyshev centers) and as an oracle in tests.
#pragma once

#include "lpgeom/core.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace lpgeom {

struct LpResult {
  enum class Status { optimal, infeasible, unbounded } status;
  double objective = 0.0;
  Vec x;
};

namespace detail {

// Tableau simplex with Bland-style tie breaking for
//   maximize c^T x  subject to  A x <= b,  x >= 0.
class SimplexTableau {
 public:
  SimplexTableau(const Mat& A, const Vec& b, const Vec& c)
      : m_(static_cast<int>(b.size())), n_(static_cast<int>(c.size())), basis_(m_), nonbasis_(n_ + 1),
        D_(Mat::Zero(m_ + 2, n_ + 2)) {
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < n_; ++j) D_(i, j) = A(i, j);
    for (int i = 0; i < m_; ++i) {
      basis_[i] = n_ + i;
      D_(i, n_) = -1.0;
      D_(i, n_ + 1) = b[i];
    }
    for (int j = 0; j < n_; ++j) {
      nonbasis_[j] = j;
      D_(m_, j) = -c[j];
    }
    nonbasis_[n_] = -1;
    D_(m_ + 1, n_) = 1.0;
  }

  LpResult solve() {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    int r = 0;
    for (int i = 1; i < m_; ++i)
      if (D_(i, n_ + 1) < D_(r, n_ + 1)) r = i;
    if (m_ > 0 && D_(r, n_ + 1) < -kEps) {
      pivot(r, n_);
      if (!run(1) || D_(m_ + 1, n_ + 1) < -kEps) return {LpResult::Status::infeasible, -kInf, Vec()};
      for (int i = 0; i < m_; ++i)
        if (basis_[i] == -1) {
          int s = -1;
          for (int j = 0; j <= n_; ++j)
            if (s == -1 || D_(i, j) < D_(i, s) || (D_(i, j) == D_(i, s) && nonbasis_[j] < nonbasis_[s])) s = j;
          pivot(i, s);
        }
    }
    if (!run(2)) return {LpResult::Status::unbounded, kInf, Vec()};
    Vec x = Vec::Zero(n_);
    for (int i = 0; i < m_; ++i)
      if (basis_[i] >= 0 && basis_[i] < n_) x[basis_[i]] = D_(i, n_ + 1);
    return {LpResult::Status::optimal, D_(m_, n_ + 1), x};
  }

 private:
  static constexpr double kEps = 1e-12;

  void pivot(int r, int s) {
    const double inv = 1.0 / D_(r, s);
    for (int i = 0; i < m_ + 2; ++i)
      if (i != r)
        for (int j = 0; j < n_ + 2; ++j)
          if (j != s) D_(i, j) -= D_(r, j) * D_(i, s) * inv;
    for (int j = 0; j < n_ + 2; ++j)
      if (j != s) D_(r, j) *= inv;
    for (int i = 0; i < m_ + 2; ++i)
      if (i != r) D_(i, s) *= -inv;
    D_(r, s) = inv;
    std::swap(basis_[r], nonbasis_[s]);
  }

  bool run(int phase) {
    const int row = phase == 1 ? m_ + 1 : m_;
    for (int guard = 0; guard < 100000; ++guard) {
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (phase == 2 && nonbasis_[j] == -1) continue;
        if (s == -1 || D_(row, j) < D_(row, s) || (D_(row, j) == D_(row, s) && nonbasis_[j] < nonbasis_[s])) s = j;
      }
      if (D_(row, s) > -kEps) return true;
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (D_(i, s) < kEps) continue;
        if (r == -1) {
          r = i;
          continue;
        }
        const double lhs = D_(i, n_ + 1) / D_(i, s), rhs = D_(r, n_ + 1) / D_(r, s);
        if (lhs < rhs || (lhs == rhs && basis_[i] < basis_[r])) r = i;
      }
      if (r == -1) return false;
      pivot(r, s);
    }
    return false;
  }

  int m_, n_;
  std::vector<int> basis_, nonbasis_;
  Mat D_;
};

}  // namespace detail

/// maximize <c, x> subject to A x <= b with x unrestricted in sign.
inline LpResult lp_maximize(const Mat& A, const Vec& b, const Vec& c) {
  const int n = static_cast<int>(c.size());
  Mat split(A.rows(), 2 * n);
  split << A, -A;
  Vec c2(2 * n);
  c2 << c, -c;
  auto res = detail::SimplexTableau(split, b, c2).solve();
  if (res.status == LpResult::Status::optimal) {
    Vec x = res.x.head(n) - res.x.tail(n);  // not in place: the resize would alias
    res.x = std::move(x);
  }
  return res;
}

/// Center and radius of the largest ball inside {x : <a_i, x> <= b_i}.
/// Returns nullopt when the region is empty or unbounded.
inline std::optional<std::pair<Vec, double>> chebyshev_center(const std::vector<Vec>& normals,
                                                              const std::vector<double>& offsets) {
  if (normals.empty()) return std::nullopt;
  const int n = static_cast<int>(normals.front().size());
  const int m = static_cast<int>(normals.size());
  // variables: x (free, split inside lp_maximize) and r, with r <= 1e6 as a cap
  Mat A = Mat::Zero(m + 2, n + 1);
  Vec b = Vec::Zero(m + 2);
  for (int i = 0; i < m; ++i) {
    A.row(i).head(n) = normals[i].transpose();
    A(i, n) = normals[i].norm();
    b[i] = offsets[i];
  }
  A(m, n) = 1.0;
  b[m] = 1e6;
  A(m + 1, n) = -1.0;  // r >= 0
  b[m + 1] = 0.0;
  Vec c = Vec::Zero(n + 1);
  c[n] = 1.0;
  const auto res = lp_maximize(A, b, c);
  if (res.status != LpResult::Status::optimal) return std::nullopt;
  if (res.x[n] >= 1e6 * (1.0 - 1e-12)) return std::nullopt;
  return std::make_pair(Vec(res.x.head(n)), res.x[n]);
}

}  // namespace lpgeom
