#ifndef LVDELAY_MATRICES_HPP
#define LVDELAY_MATRICES_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lvdelay/linalg.hpp"
#include "lvdelay/system_spec.hpp"

namespace lvd {

/// Structure matrices of the controlled system.
///   M0       [d_ij mu_i + a_ij]            community matrix
///   M        [d_ij lambda_i + a_ij]        controlled community matrix
///   M0_minus [d_ij mu_i - a_ij^-]          a^- = max(0, -a)
///   M0_hat   [d_ij mu_i - |a_ij|]
///   M_hat    [d_ij mu_i - |a_ij| - d_ij c_i d_i / e_i]
struct StructureMatrices {
  MatrixXd M0, M, M0_minus, M0_hat, M_hat;
  VectorXd mu;
  MatrixXd a;

  /// [d_ij mu_i - |a~_ij|] with a~_ij = a_ij^- when both i and j lie
  /// outside the support, a~_ij = a_ij otherwise. With full support this
  /// is M0_hat; with empty support it is M0_minus.
  MatrixXd M0_hat_support(const std::vector<int>& support) const;
};

StructureMatrices build_matrices(const SystemSpec& spec);

/// a~ matrix for a support set (used by the attractivity certificates).
MatrixXd modified_interactions(const MatrixXd& a, const std::vector<int>& support);

enum class MatrixClass {
  P_matrix,
  not_P,
  nonsingular_M,
  singular_M,
  not_M,
  indeterminate,
};

std::string to_string(MatrixClass c);

struct MatrixVerdict {
  MatrixClass cls = MatrixClass::indeterminate;
  /// For nonsingular_M: positive v with B v > 0 (v = B^-1 * 1).
  std::optional<VectorXd> v;
  /// Failing principal minor (index set) for not_P / not_M diagnostics.
  std::vector<int> failing_minor;
  /// Near-zero determinant value when indeterminate.
  double near_zero_det = 0.0;
  std::string detail;
};

/// All 2^n - 1 principal minors must exceed the scaled tolerance band;
/// a minor inside the band yields `indeterminate`. Enumeration bound n <= 16.
MatrixVerdict is_P_matrix(const MatrixXd& B);

/// Requires a Z-matrix (non-positive off-diagonal entries). Nonsingular
/// M-matrix test: invertible with entrywise non-negative inverse; the
/// certificate v = B^-1 * 1 is re-verified. Singular M-matrix test: min
/// real part of the spectrum >= -1e-8.
MatrixVerdict classify_Z_matrix(const MatrixXd& B);

/// For a nonsingular M-matrix B, positive vectors eta = (B^T)^-1 * 1 and
/// q = B^-1 * 1 with sum_j (eta_i b_ij q_j + eta_j b_ji q_i) > 0 per row.
std::optional<std::pair<VectorXd, VectorXd>> lemma31_certificate(const MatrixXd& B);

/// Feasibility of A x <= rhs, x >= 0 with the rows in `strict_rows`
/// required to hold strictly. The strict margin is maximized by a
/// phase-1 objective; returns a point only if the margin exceeds 1e-9.
std::optional<VectorXd> linear_feasibility(const MatrixXd& A, const VectorXd& rhs,
                                           const std::vector<int>& strict_rows);

}  // namespace lvd

#endif
