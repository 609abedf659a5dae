#ifndef LVDELAY_LINALG_HPP
#define LVDELAY_LINALG_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace lvd {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Determinant via Gaussian elimination with partial pivoting, together
/// with a scale factor (product of active-submatrix max-norms along the
/// elimination) used to set sign-decision tolerances.
struct DetResult {
  double det = 0.0;
  double scale = 1.0;
};

DetResult det_scaled(const MatrixXd& A);

/// Tolerance band for treating det_scaled output as zero.
inline double det_tol(const DetResult& r, double rel = 1e-9) {
  return rel * std::max(1.0, r.scale);
}

MatrixXd principal_submatrix(const MatrixXd& A, const std::vector<int>& idx);

/// Visits all non-empty subsets of {0,...,n-1} ordered by increasing
/// cardinality, lexicographic within each cardinality.
void for_each_subset(int n, const std::function<void(const std::vector<int>&)>& fn);

double min_real_eigenvalue(const MatrixXd& A);

/// Dense two-phase simplex with Bland's rule.
/// maximize c.x  subject to  A x <= rhs, x >= 0.
struct LpResult {
  enum class Status { optimal, infeasible, unbounded };
  Status status = Status::infeasible;
  VectorXd x;
  double objective = 0.0;
};

LpResult simplex_maximize(const MatrixXd& A, const VectorXd& rhs, const VectorXd& c);

}  // namespace lvd

#endif
