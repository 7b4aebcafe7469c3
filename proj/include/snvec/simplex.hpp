#pragma once

#include <Eigen/Dense>

namespace snvec {

/// Dense linear program
///   minimize c^T x  s.t.  A_le x <= b_le,  A_eq x = b_eq,  x >= 0,
/// solved with a two-phase tableau simplex under Bland's rule. Intended for
/// the tiny programs of the majorization test (tens of rows).
struct LinearProgram {
  Eigen::MatrixXd a_le;
  Eigen::VectorXd b_le;
  Eigen::MatrixXd a_eq;
  Eigen::VectorXd b_eq;
  Eigen::VectorXd c;  ///< may be empty for a pure feasibility problem
};

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
};

LpResult solve_lp(const LinearProgram& lp, double tol = 1e-11);

}  // namespace snvec
