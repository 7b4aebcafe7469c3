#include "snvec/simplex.hpp"

#include "snvec/error.hpp"

#include <limits>
#include <vector>

namespace snvec {

namespace {

struct Tableau {
  Eigen::MatrixXd t;           // rows 0..m-1 constraints, row m objective; last column rhs
  std::vector<int> basis;      // basic variable per constraint row
  int m = 0, n = 0;            // constraints, variables (excluding rhs)

  void pivot(int r, int c) {
    t.row(r) /= t(r, c);
    for (int i = 0; i <= m; ++i)
      if (i != r && t(i, c) != 0.0) t.row(i) -= t(i, c) * t.row(r);
    basis[r] = c;
  }

  // Minimizes the objective row over columns [0, active); Bland's rule.
  // Returns false when unbounded.
  bool run(int active, double tol) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < active; ++j)
        if (t(m, j) < -tol) {
          enter = j;
          break;
        }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (t(i, enter) <= tol) continue;
        double ratio = t(i, n) / t(i, enter);
        if (ratio < best - tol || (ratio <= best + tol && leave >= 0 && basis[i] < basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp, double tol) {
  const int nx = static_cast<int>(std::max(lp.a_le.cols(), lp.a_eq.cols()));
  const int mle = static_cast<int>(lp.a_le.rows()), meq = static_cast<int>(lp.a_eq.rows());
  if ((mle && lp.a_le.cols() != nx) || (meq && lp.a_eq.cols() != nx) || lp.b_le.size() != mle ||
      lp.b_eq.size() != meq || (lp.c.size() != 0 && lp.c.size() != nx))
    throw Error("solve_lp: inconsistent problem shapes");

  // Columns: x (nx), slacks (mle), artificials (m), rhs.
  Tableau tb;
  tb.m = mle + meq;
  const int art0 = nx + mle;
  tb.n = art0 + tb.m;
  tb.t = Eigen::MatrixXd::Zero(tb.m + 1, tb.n + 1);
  tb.basis.assign(tb.m, -1);
  for (int i = 0; i < tb.m; ++i) {
    const bool le = i < mle;
    Eigen::RowVectorXd row = le ? Eigen::RowVectorXd(lp.a_le.row(i)) : Eigen::RowVectorXd(lp.a_eq.row(i - mle));
    double rhs = le ? lp.b_le[i] : lp.b_eq[i - mle];
    double sign = rhs < 0 ? -1.0 : 1.0;
    tb.t.row(i).head(nx) = sign * row;
    if (le) tb.t(i, nx + i) = sign;
    tb.t(i, art0 + i) = 1.0;
    tb.t(i, tb.n) = sign * rhs;
    tb.basis[i] = art0 + i;
  }
  // Phase 1: minimize the sum of artificials.
  for (int i = 0; i < tb.m; ++i) tb.t.row(tb.m) -= tb.t.row(i);
  for (int i = 0; i < tb.m; ++i) tb.t(tb.m, art0 + i) = 0.0;
  tb.run(art0, tol);

  LpResult res;
  double scale = 1.0;
  for (int i = 0; i < tb.m; ++i) scale = std::max(scale, std::abs(tb.t(i, tb.n)));
  if (-tb.t(tb.m, tb.n) > 1e3 * tol * scale) {
    res.status = LpResult::Status::Infeasible;
    return res;
  }
  // Drive artificials out of the basis where possible.
  for (int i = 0; i < tb.m; ++i) {
    if (tb.basis[i] < art0) continue;
    for (int j = 0; j < art0; ++j)
      if (std::abs(tb.t(i, j)) > 1e-9) {
        tb.pivot(i, j);
        break;
      }
  }
  res.status = LpResult::Status::Optimal;
  if (lp.c.size() != 0) {
    tb.t.row(tb.m).setZero();
    tb.t.row(tb.m).head(nx) = lp.c.transpose();
    for (int i = 0; i < tb.m; ++i)
      if (tb.basis[i] < art0 && tb.t(tb.m, tb.basis[i]) != 0.0) tb.t.row(tb.m) -= tb.t(tb.m, tb.basis[i]) * tb.t.row(i);
    // Artificials still basic sit at zero on redundant rows; exclude their columns.
    if (!tb.run(art0, tol)) {
      res.status = LpResult::Status::Unbounded;
      return res;
    }
  }
  res.x = Eigen::VectorXd::Zero(nx);
  for (int i = 0; i < tb.m; ++i)
    if (tb.basis[i] < nx) res.x[tb.basis[i]] = tb.t(i, tb.n);
  res.objective = lp.c.size() ? lp.c.dot(res.x) : 0.0;
  return res;
}

}  // namespace snvec
