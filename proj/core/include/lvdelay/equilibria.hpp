#ifndef LVDELAY_EQUILIBRIA_HPP
#define LVDELAY_EQUILIBRIA_HPP

#include <map>
#include <vector>

#include "lvdelay/matrices.hpp"
#include "lvdelay/system_spec.hpp"

namespace lvd {

/// One non-negative equilibrium candidate, identified by its support set.
/// x* solves (d_ij lambda_i + a_ij)|_S x_S = b_S with zeros off S, and
/// u_i* = d_i x_i* / e_i. The margin of an off-support index q is
/// (M x*)_q - b_q; the candidate is saturated when x* >= 0 on S and every
/// margin is >= 0.
struct EquilibriumCandidate {
  std::vector<int> support;  // sorted, 0-based
  VectorXd x_star, u_star;
  std::map<int, double> margins;  // off-support index -> (M x*)_q - b_q
  bool saturated = false;
  bool degenerate = false;  // a support value or margin inside the zero band
  bool singular = false;    // support linear system was singular; skipped

  /// Indices with x_i* above the degeneracy band (the effective support).
  std::vector<int> positive_support(double tol = 1e-9) const;
};

/// Determinant quantities for an ordered support list (i_1,...,i_p):
/// R0 with hatted diagonal lambda_i + a_ii, Ri with b replacing column i,
/// and the bordered determinants Rq for every q outside the list.
struct CramerTable {
  std::vector<int> support;
  double R0 = 0.0;
  VectorXd Ri;
  std::map<int, double> Rq;
  /// Max relative deviation of the identity Rq = b_q R0 - sum_j a_qj Rj.
  double identity_error = 0.0;
};

CramerTable cramer_table(const SystemSpec& spec, const std::vector<int>& support);

/// One candidate per support subset with a non-singular support system
/// (singular subsets are returned with `singular` set and no values),
/// plus the trivial candidate for the empty support. Subsets are ordered
/// by increasing cardinality, lexicographic within. n <= 16.
std::vector<EquilibriumCandidate> enumerate_equilibria(const SystemSpec& spec);

struct SaturatedResult {
  enum class Status { unique, multiple, none };
  Status status = Status::none;
  /// When unique: exactly one entry. Distinct saturated points otherwise.
  std::vector<EquilibriumCandidate> candidates;
  MatrixVerdict m_verdict;  // P-matrix test of the controlled matrix M
  bool uniqueness_guaranteed = false;
};

/// If M is a P-matrix, resolves the unique saturated equilibrium
/// (coincident degenerate candidates are collapsed onto the smallest
/// support). Otherwise returns every saturated point found, with a
/// warning that uniqueness is not guaranteed.
SaturatedResult saturated_equilibrium(const SystemSpec& spec);

}  // namespace lvd

#endif
