// Small dense two-phase simplex (Bland's rule). Problems solved here have at
// most a few dozen variables, so a tableau implementation is adequate.

#ifndef SASAKI_LINPROG_HPP
#define SASAKI_LINPROG_HPP

#include <Eigen/Dense>

namespace sasaki::detail {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double value = 0.0;
  Eigen::VectorXd x;
};

/// maximize c.x subject to a x == b, x >= 0.
LpResult maximize(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                  double eps = 1e-11);

}  // namespace sasaki::detail

#endif  // SASAKI_LINPROG_HPP
