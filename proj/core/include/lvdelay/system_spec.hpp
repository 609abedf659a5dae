#ifndef LVDELAY_SYSTEM_SPEC_HPP
#define LVDELAY_SYSTEM_SPEC_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "lvdelay/kernel.hpp"

namespace lvd {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Full parameterization of the controlled Lotka-Volterra system
///
///   x_i' = x_i ( b_i - mu_i x_i - sum_j a_ij (K_ij * x_j) - c_i (G_i * u_i) )
///   u_i' = -e_i u_i + d_i x_i
///
/// where * denotes convolution of the entire past against a normalized
/// delay kernel. c_i = 0 disables the control feedback on species i (the
/// control ODE is still integrated, but decoupled).
struct SystemSpec {
  int n = 0;
  VectorXd b;    // intrinsic growth rates, any sign
  VectorXd mu;   // instantaneous self-limitation, > 0
  MatrixXd a;    // interaction coefficients, any sign
  VectorXd c;    // control strengths, >= 0
  VectorXd d;    // > 0
  VectorXd e;    // > 0
  std::vector<std::vector<Kernel>> K;  // n x n kernels for the x terms
  std::vector<Kernel> G;               // n kernels for the control terms

  /// Non-fatal validation findings (renormalized tables, dirac tau = 0).
  std::vector<std::string> warnings;

  /// Throws SpecError naming the failing inequality or key.
  void validate();

  /// lambda_i = mu_i + c_i d_i / e_i (diagonal correction of the
  /// controlled community matrix).
  VectorXd lambda() const;
};

/// Initial data on (-inf, 0]: per state variable either a constant or a
/// tabulated function with a constant tail beyond its earliest sample.
struct HistorySpec {
  struct Entry {
    bool is_constant = true;
    double value = 0.0;
    std::vector<double> times;   // increasing, all <= 0
    std::vector<double> values;  // >= 0

    double at(double t) const;
  };

  std::vector<Entry> x, u;  // size n each

  double x_at(int i, double t) const { return x[static_cast<std::size_t>(i)].at(t); }
  double u_at(int i, double t) const { return u[static_cast<std::size_t>(i)].at(t); }

  static HistorySpec constants(const VectorXd& x0, const VectorXd& u0);

  /// Throws unless values are non-negative and the value at 0 is positive.
  void validate(int n) const;
};

}  // namespace lvd

#endif
