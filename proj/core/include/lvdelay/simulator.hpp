#ifndef LVDELAY_SIMULATOR_HPP
#define LVDELAY_SIMULATOR_HPP

#include <map>
#include <vector>

#include "lvdelay/equilibria.hpp"
#include "lvdelay/system_spec.hpp"

namespace lvd {

/// Raised on runtime integration failures (loss of positivity, histories
/// that do not reach far enough back for the kernel horizons).
class SimulationError : public std::runtime_error {
public:
  explicit SimulationError(const std::string& what) : std::runtime_error(what) {}
};

/// Dense output of one integration run on the uniform grid t_k = k h.
/// Values and derivatives are stored per grid point so that delayed
/// lookups can use cubic Hermite interpolation; times t <= 0 fall back to
/// the history.
struct Trajectory {
  SystemSpec spec;
  HistorySpec history;
  double step = 0.0;
  std::vector<double> t;
  std::vector<std::vector<double>> x, u;    // [species][grid]
  std::vector<std::vector<double>> dx, du;  // derivatives on the same grid

  double x_at(int i, double time) const;
  double u_at(int i, double time) const;
  double t_end() const { return t.empty() ? 0.0 : t.back(); }
};

/// Fixed-step RK4 with method of steps. Discrete delays interpolate the
/// dense output, gamma kernels run as linear chains (one chain per
/// distinct driving signal and kernel), table kernels use a truncated
/// trapezoid convolution on the kernel's own node grid. Aborts when a
/// density or control leaves the positive cone.
Trajectory integrate(const SystemSpec& spec, const HistorySpec& history,
                     double T_end, double h);

struct ConvergenceReport {
  bool converged = false;
  VectorXd residual_x, residual_u;  // final-point deviation from eq
  /// Fitted exponents (-slope of log x_q) for off-support species over
  /// the trailing window.
  std::map<int, double> extinction_rates;
  double window_start = 0.0;  // trailing 25% of the run
  /// min x_i <= (e_i/d_i) min u_i and (e_i/d_i) max u_i <= max x_i over
  /// the window, up to discretization tolerance.
  bool sandwich_ok = false;
};

ConvergenceReport convergence_check(const Trajectory& traj,
                                    const EquilibriumCandidate& eq, double atol);

struct BoundednessReport {
  VectorXd sup_x, sup_u;
  /// Growth of the running supremum over the final quarter stays below 1%.
  bool bounded = false;
};

BoundednessReport boundedness_check(const Trajectory& traj);

}  // namespace lvd

#endif
