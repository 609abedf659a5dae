#include "lvdelay/linalg.hpp"

#include <cmath>
#include <numeric>

namespace lvd {

DetResult det_scaled(const MatrixXd& A) {
  const int n = static_cast<int>(A.rows());
  MatrixXd U = A;
  DetResult r;
  r.det = 1.0;
  r.scale = 1.0;
  for (int k = 0; k < n; ++k) {
    const double block_max = U.block(k, k, n - k, n - k).cwiseAbs().maxCoeff();
    r.scale *= std::max(block_max, 1e-300);
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(U(i, k)) > std::abs(U(piv, k))) piv = i;
    if (U(piv, k) == 0.0) {
      r.det = 0.0;
      return r;
    }
    if (piv != k) {
      U.row(piv).swap(U.row(k));
      r.det = -r.det;
    }
    r.det *= U(k, k);
    for (int i = k + 1; i < n; ++i) {
      const double f = U(i, k) / U(k, k);
      U.row(i).tail(n - k) -= f * U.row(k).tail(n - k);
    }
  }
  return r;
}

MatrixXd principal_submatrix(const MatrixXd& A, const std::vector<int>& idx) {
  const int p = static_cast<int>(idx.size());
  MatrixXd S(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) S(i, j) = A(idx[i], idx[j]);
  return S;
}

void for_each_subset(int n, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> subset;
  // lexicographic combinations of each cardinality
  std::function<void(int, int, int)> rec = [&](int start, int remaining, int) {
    if (remaining == 0) {
      fn(subset);
      return;
    }
    for (int i = start; i <= n - remaining; ++i) {
      subset.push_back(i);
      rec(i + 1, remaining - 1, 0);
      subset.pop_back();
    }
  };
  for (int card = 1; card <= n; ++card) rec(0, card, 0);
}

double min_real_eigenvalue(const MatrixXd& A) {
  Eigen::EigenSolver<MatrixXd> es(A, /*computeEigenvectors=*/false);
  return es.eigenvalues().real().minCoeff();
}

namespace {

constexpr double kLpTol = 1e-9;

// Dense tableau simplex with Bland's rule. Columns: structural | slack |
// artificial | rhs. Returns false on unboundedness.
bool run_simplex(MatrixXd& T, std::vector<int>& basis, VectorXd& obj,
                 double& obj_value, int ncols_enterable) {
  const int m = static_cast<int>(T.rows());
  for (int iter = 0; iter < 20000; ++iter) {
    int enter = -1;
    for (int j = 0; j < ncols_enterable; ++j) {
      if (obj[j] > kLpTol) {  // Bland: first improving column
        enter = j;
        break;
      }
    }
    if (enter < 0) return true;  // optimal
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      if (T(i, enter) > kLpTol) {
        const double ratio = T(i, T.cols() - 1) / T(i, enter);
        if (leave < 0 || ratio < best_ratio - kLpTol ||
            (std::abs(ratio - best_ratio) <= kLpTol && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) return false;  // unbounded
    // pivot
    T.row(leave) /= T(leave, enter);
    for (int i = 0; i < m; ++i)
      if (i != leave && T(i, enter) != 0.0) T.row(i) -= T(i, enter) * T.row(leave);
    const double f = obj[enter];
    obj -= f * T.row(leave).head(obj.size()).transpose();
    obj_value += f * T(leave, T.cols() - 1);
    basis[leave] = enter;
  }
  return true;
}

}  // namespace

LpResult simplex_maximize(const MatrixXd& A, const VectorXd& rhs, const VectorXd& c) {
  const int m = static_cast<int>(A.rows());
  const int k = static_cast<int>(A.cols());
  LpResult res;

  // Rows with negative rhs are flipped and given an artificial variable.
  std::vector<int> art_rows;
  for (int i = 0; i < m; ++i)
    if (rhs[i] < 0) art_rows.push_back(i);
  const int r = static_cast<int>(art_rows.size());
  const int ncols = k + m + r;

  MatrixXd T = MatrixXd::Zero(m, ncols + 1);
  std::vector<int> basis(m);
  int art = 0;
  for (int i = 0; i < m; ++i) {
    const double sign = rhs[i] < 0 ? -1.0 : 1.0;
    T.block(i, 0, 1, k) = sign * A.row(i);
    T(i, k + i) = sign;  // slack
    T(i, ncols) = sign * rhs[i];
    if (rhs[i] < 0) {
      T(i, k + m + art) = 1.0;
      basis[i] = k + m + art;
      ++art;
    } else {
      basis[i] = k + i;
    }
  }

  if (r > 0) {
    // Phase 1: maximize -(sum of artificials).
    VectorXd obj = VectorXd::Zero(ncols);
    for (int j = 0; j < r; ++j) obj[k + m + j] = -1.0;
    double obj_value = 0.0;
    // price out basic artificials (each carries cost -1)
    for (int i = 0; i < m; ++i) {
      if (basis[i] >= k + m) {
        obj += T.row(i).head(ncols).transpose();
        obj_value -= T(i, ncols);
      }
    }
    if (!run_simplex(T, basis, obj, obj_value, k + m)) {
      res.status = LpResult::Status::unbounded;
      return res;
    }
    // the phase-1 optimum is -(sum of artificials); negative means the
    // artificials could not be driven to zero
    if (obj_value < -1e-7) {
      res.status = LpResult::Status::infeasible;
      return res;
    }
    // Drive any residual basic artificial out of the basis.
    for (int i = 0; i < m; ++i) {
      if (basis[i] >= k + m) {
        int piv = -1;
        for (int j = 0; j < k + m; ++j)
          if (std::abs(T(i, j)) > kLpTol) {
            piv = j;
            break;
          }
        if (piv >= 0) {
          T.row(i) /= T(i, piv);
          for (int q = 0; q < m; ++q)
            if (q != i && T(q, piv) != 0.0) T.row(q) -= T(q, piv) * T.row(i);
          basis[i] = piv;
        }
      }
    }
  }

  // Phase 2 with the real objective.
  VectorXd obj = VectorXd::Zero(ncols);
  obj.head(k) = c;
  double obj_value = 0.0;
  for (int i = 0; i < m; ++i) {
    if (basis[i] < ncols && obj[basis[i]] != 0.0) {
      const double f = obj[basis[i]];
      obj -= f * T.row(i).head(ncols).transpose();
      obj_value += f * T(i, ncols);
    }
  }
  if (!run_simplex(T, basis, obj, obj_value, k + m)) {
    res.status = LpResult::Status::unbounded;
    return res;
  }

  res.status = LpResult::Status::optimal;
  res.x = VectorXd::Zero(k);
  for (int i = 0; i < m; ++i)
    if (basis[i] < k) res.x[basis[i]] = T(i, ncols);
  res.objective = c.dot(res.x);
  return res;
}

}  // namespace lvd
