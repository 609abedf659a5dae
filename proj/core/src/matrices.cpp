#include "lvdelay/matrices.hpp"

#include <cmath>

namespace lvd {

namespace {

bool in_support(const std::vector<int>& support, int i) {
  for (int s : support)
    if (s == i) return true;
  return false;
}

}  // namespace

MatrixXd modified_interactions(const MatrixXd& a, const std::vector<int>& support) {
  const int n = static_cast<int>(a.rows());
  MatrixXd t = a;
  for (int i = 0; i < n; ++i) {
    if (in_support(support, i)) continue;
    for (int j = 0; j < n; ++j) {
      if (in_support(support, j)) continue;
      t(i, j) = std::max(0.0, -a(i, j));  // a_ij^-
    }
  }
  return t;
}

MatrixXd StructureMatrices::M0_hat_support(const std::vector<int>& support) const {
  const int n = static_cast<int>(a.rows());
  const MatrixXd t = modified_interactions(a, support);
  MatrixXd out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out(i, j) = (i == j ? mu[i] : 0.0) - std::abs(t(i, j));
  return out;
}

StructureMatrices build_matrices(const SystemSpec& spec) {
  const int n = spec.n;
  StructureMatrices m;
  m.mu = spec.mu;
  m.a = spec.a;
  const VectorXd lam = spec.lambda();
  m.M0.resize(n, n);
  m.M.resize(n, n);
  m.M0_minus.resize(n, n);
  m.M0_hat.resize(n, n);
  m.M_hat.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double aij = spec.a(i, j);
      const double dij = i == j ? 1.0 : 0.0;
      m.M0(i, j) = dij * spec.mu[i] + aij;
      m.M(i, j) = dij * lam[i] + aij;
      m.M0_minus(i, j) = dij * spec.mu[i] - std::max(0.0, -aij);
      m.M0_hat(i, j) = dij * spec.mu[i] - std::abs(aij);
      m.M_hat(i, j) = m.M0_hat(i, j) - dij * spec.c[i] * spec.d[i] / spec.e[i];
    }
  }
  return m;
}

std::string to_string(MatrixClass c) {
  switch (c) {
    case MatrixClass::P_matrix: return "P_matrix";
    case MatrixClass::not_P: return "not_P";
    case MatrixClass::nonsingular_M: return "nonsingular_M";
    case MatrixClass::singular_M: return "singular_M";
    case MatrixClass::not_M: return "not_M";
    case MatrixClass::indeterminate: return "indeterminate";
  }
  return "?";
}

MatrixVerdict is_P_matrix(const MatrixXd& B) {
  const int n = static_cast<int>(B.rows());
  if (n > 16) throw SpecError("is_P_matrix: dimension exceeds enumeration bound 16");
  MatrixVerdict out;
  bool band = false;
  std::vector<int> band_minor;
  double band_det = 0.0;
  bool negative = false;
  for_each_subset(n, [&](const std::vector<int>& idx) {
    if (negative) return;
    const DetResult r = det_scaled(principal_submatrix(B, idx));
    const double tol = det_tol(r);
    if (r.det < -tol) {
      negative = true;
      out.failing_minor = idx;
      out.near_zero_det = r.det;
    } else if (std::abs(r.det) <= tol && !band) {
      band = true;
      band_minor = idx;
      band_det = r.det;
    }
  });
  if (negative) {
    out.cls = MatrixClass::not_P;
    out.detail = "principal minor is negative";
  } else if (band) {
    out.cls = MatrixClass::indeterminate;
    out.failing_minor = band_minor;
    out.near_zero_det = band_det;
    out.detail = "principal minor inside the zero tolerance band";
  } else {
    out.cls = MatrixClass::P_matrix;
  }
  return out;
}

MatrixVerdict classify_Z_matrix(const MatrixXd& B) {
  const int n = static_cast<int>(B.rows());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && B(i, j) > 0)
        throw SpecError("classify_Z_matrix: input is not a Z-matrix (positive off-diagonal entry)");

  MatrixVerdict out;
  const DetResult dr = det_scaled(B);
  if (std::abs(dr.det) > det_tol(dr)) {
    const MatrixXd inv = B.fullPivLu().inverse();
    if (inv.minCoeff() >= -1e-10) {
      const VectorXd v = inv * VectorXd::Ones(n);
      const VectorXd bv = B * v;
      if (v.minCoeff() > 0 && bv.minCoeff() > 0) {
        out.cls = MatrixClass::nonsingular_M;
        out.v = v;
        return out;
      }
    }
  }
  // Singular (or numerically non-invertible / non-M) cases by spectrum.
  const double min_re = min_real_eigenvalue(B);
  if (min_re >= -1e-8) {
    out.cls = MatrixClass::singular_M;
    out.detail = "min real eigenvalue " + std::to_string(min_re);
  } else {
    out.cls = MatrixClass::not_M;
    out.detail = "eigenvalue with real part " + std::to_string(min_re);
  }
  return out;
}

std::optional<std::pair<VectorXd, VectorXd>> lemma31_certificate(const MatrixXd& B) {
  const MatrixVerdict cls = classify_Z_matrix(B);
  if (cls.cls != MatrixClass::nonsingular_M) return std::nullopt;
  const int n = static_cast<int>(B.rows());
  const VectorXd q = B.fullPivLu().solve(VectorXd::Ones(n));
  const VectorXd eta = B.transpose().fullPivLu().solve(VectorXd::Ones(n));
  // verify sum_j (eta_i b_ij q_j + eta_j b_ji q_i) > 0 for each i
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j)
      s += eta[i] * B(i, j) * q[j] + eta[j] * B(j, i) * q[i];
    if (!(s > 0)) return std::nullopt;
  }
  if (q.minCoeff() <= 0 || eta.minCoeff() <= 0) return std::nullopt;
  return std::make_pair(eta, q);
}

std::optional<VectorXd> linear_feasibility(const MatrixXd& A, const VectorXd& rhs,
                                           const std::vector<int>& strict_rows) {
  const int m = static_cast<int>(A.rows());
  const int k = static_cast<int>(A.cols());
  if (m > 64 || k > 64) throw SpecError("linear_feasibility: dimension exceeds bound 64");

  if (strict_rows.empty()) {
    const LpResult r = simplex_maximize(A, rhs, VectorXd::Zero(k));
    if (r.status != LpResult::Status::optimal) return std::nullopt;
    return r.x;
  }

  // Margin LP over (x, t): maximize t subject to A x + t 1_strict <= rhs,
  // t <= 1 (keeps the problem bounded).
  MatrixXd Am(m + 1, k + 1);
  Am.setZero();
  Am.block(0, 0, m, k) = A;
  for (int i : strict_rows) Am(i, k) = 1.0;
  Am(m, k) = 1.0;
  VectorXd rm(m + 1);
  rm.head(m) = rhs;
  rm[m] = 1.0;
  VectorXd obj = VectorXd::Zero(k + 1);
  obj[k] = 1.0;
  const LpResult r = simplex_maximize(Am, rm, obj);
  if (r.status != LpResult::Status::optimal) {
    if (r.status == LpResult::Status::unbounded)
      throw std::runtime_error("linear_feasibility: internal error (unbounded margin LP)");
    return std::nullopt;
  }
  if (r.x[k] <= 1e-9) return std::nullopt;  // no strictly feasible point
  return r.x.head(k).eval();
}

}  // namespace lvd
