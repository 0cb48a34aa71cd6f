#pragma once

// Two-phase primal simplex with Bland's anti-cycling rule for
//   min c^T x  s.t.  A x = b,  x >= 0
// on small dense problems (hundreds of rows). Used by the one-norm
// minimization of quasi-probability decompositions.

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace qemforge {

struct SimplexResult {
  Eigen::VectorXd x;
  double objective = 0.0;
};

struct SimplexError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// Pivot until optimal. Returns false if the problem is unbounded.
inline bool simplex_pivot(Eigen::MatrixXd& tab, std::vector<int>& basis,
                          int ncols, double tol) {
  const int m = static_cast<int>(tab.rows()) - 1;
  const int cost = m;  // last row
  for (;;) {
    int enter = -1;
    for (int j = 0; j < ncols; ++j) {
      if (tab(cost, j) < -tol) { enter = j; break; }  // Bland: smallest index
    }
    if (enter < 0) return true;
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      if (tab(i, enter) > tol) {
        const double ratio = tab(i, ncols) / tab(i, enter);
        if (leave < 0 || ratio < best_ratio - 1e-15 ||
            (ratio < best_ratio + 1e-15 && basis[static_cast<std::size_t>(i)] <
                                               basis[static_cast<std::size_t>(leave)])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) return false;  // unbounded
    tab.row(leave) /= tab(leave, enter);
    for (int i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = tab(i, enter);
      if (f != 0.0) tab.row(i) -= f * tab.row(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }
}

}  // namespace detail

inline SimplexResult simplex_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                   const Eigen::VectorXd& c, double tol = 1e-9) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  // Tableau: [A | I_art | b], cost row last; artificial basis start.
  Eigen::MatrixXd tab = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  tab.block(0, 0, m, n) = a;
  tab.block(0, n, m, m) = Eigen::MatrixXd::Identity(m, m);
  tab.block(0, n + m, m, 1) = b;
  for (int i = 0; i < m; ++i)
    if (tab(i, n + m) < 0.0) tab.row(i) = -tab.row(i);
  std::vector<int> basis(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  // Phase 1: minimize sum of artificials.
  for (int j = 0; j < m; ++j) tab(m, n + j) = 1.0;
  for (int i = 0; i < m; ++i) tab.row(m) -= tab.row(i);  // price out the basis
  if (!detail::simplex_pivot(tab, basis, n + m, tol))
    throw SimplexError("phase-1 unbounded (cannot happen for bounded artificials)");
  if (tab(m, n + m) < -tol) throw SimplexError("infeasible constraint system");

  // Drive remaining artificials out of the basis where possible.
  for (int i = 0; i < m; ++i) {
    if (basis[static_cast<std::size_t>(i)] >= n) {
      int enter = -1;
      for (int j = 0; j < n; ++j)
        if (std::abs(tab(i, j)) > tol) { enter = j; break; }
      if (enter >= 0) {
        tab.row(i) /= tab(i, enter);
        for (int k = 0; k <= m; ++k) {
          if (k == i) continue;
          const double f = tab(k, enter);
          if (f != 0.0) tab.row(k) -= f * tab.row(i);
        }
        basis[static_cast<std::size_t>(i)] = enter;
      }
    }
  }

  // Phase 2: original objective; artificial columns blocked.
  tab.row(m).setZero();
  tab.block(m, 0, 1, n) = c.transpose();
  for (int i = 0; i < m; ++i) {
    const int bj = basis[static_cast<std::size_t>(i)];
    if (bj < n && tab(m, bj) != 0.0) tab.row(m) -= tab(m, bj) * tab.row(i);
  }
  for (int j = n; j < n + m; ++j) tab.col(j).setZero();  // forbid re-entry
  if (!detail::simplex_pivot(tab, basis, n, tol))
    throw SimplexError("objective unbounded below");

  SimplexResult res;
  res.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i) {
    const int bj = basis[static_cast<std::size_t>(i)];
    if (bj < n) res.x[bj] = tab(i, n + m);
  }
  res.objective = c.dot(res.x);
  return res;
}

}  // namespace qemforge
