#ifndef LVDELAY_KERNEL_HPP
#define LVDELAY_KERNEL_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace lvd {

/// Raised on malformed or invariant-violating model input.
class SpecError : public std::runtime_error {
public:
  explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

/// One normalized delay kernel on [0, inf) with finite first moment.
///
/// Three families are supported:
///   dirac(tau)     a point mass at s = tau (discrete delay)
///   gamma(m, rate) the Erlang density rate^m s^(m-1) e^(-rate s)/(m-1)!
///   table          a piecewise-linear density sampled at increasing nodes
class Kernel {
public:
  enum class Kind { dirac, gamma, table };

  static Kernel dirac(double tau);
  static Kernel gamma(int order, double rate);
  /// Validates node/weight data. Raw mass within 1e-6 of 1 is renormalized
  /// (sets renormalized()); a larger deviation is rejected.
  static Kernel table(std::vector<double> nodes, std::vector<double> weights);

  Kind kind() const { return kind_; }
  double tau() const { return tau_; }
  int order() const { return order_; }
  double rate() const { return rate_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  bool renormalized() const { return renormalized_; }

  /// Integral of the density over [0, inf); 1 up to quadrature error.
  double mass() const;
  /// Integral of s K(s) over [0, inf).
  double first_moment() const;
  /// Integral of K over [T, inf). For dirac this is 1 for T <= tau, else 0.
  double tail_mass(double T) const;
  /// Integral of s K(s) over [T, inf).
  double moment_tail(double T) const;
  /// Smallest horizon T with tail_mass(T) <= eps (and moment tail <= eps
  /// when with_moment is set). For dirac returns tau.
  double horizon(double eps, bool with_moment = false) const;
  /// Density value at s; only meaningful for gamma and table kernels.
  double density(double s) const;

private:
  Kernel() = default;
  Kind kind_ = Kind::dirac;
  double tau_ = 0.0;
  int order_ = 1;
  double rate_ = 1.0;
  std::vector<double> nodes_, weights_;
  bool renormalized_ = false;
};

}  // namespace lvd

#endif
