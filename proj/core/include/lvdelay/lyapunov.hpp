#ifndef LVDELAY_LYAPUNOV_HPP
#define LVDELAY_LYAPUNOV_HPP

#include <vector>

#include "lvdelay/attractivity.hpp"
#include "lvdelay/simulator.hpp"

namespace lvd {

/// Time series of the attraction functional U = U1 + U2 along one
/// trajectory, evaluated in the certificate's rescaled variables.
/// g_terms[k] holds the per-species divergence G(x_i, x_i*) for the
/// certificate's index set. h_forcing is filled for reduced (boundary)
/// certificates only: the decaying forcing produced by the vanishing
/// species.
struct LyapunovTrace {
  std::vector<double> t;
  std::vector<double> U1, U2, U;
  std::vector<std::vector<double>> g_terms;  // [cert species][grid]
  std::vector<double> h_forcing;
};

/// stride > 1 evaluates the functional on every stride-th grid point
/// (the kernel quadrature still uses the full dense output).
LyapunovTrace lyapunov_trace(const Trajectory& traj,
                             const EquilibriumCandidate& eq,
                             const EtaQCert& cert, int stride = 1);

/// The multiplicative extinction functional for one alpha certificate,
/// with an exponential decay rate fitted on the final half of the run.
struct VpqTrace {
  std::vector<double> t;
  std::vector<double> V;
  double fitted_rate = 0.0;  // -slope of log V
};

VpqTrace vpq_trace(const Trajectory& traj, const AlphaCert& cert,
                   int stride = 1);

}  // namespace lvd

#endif
