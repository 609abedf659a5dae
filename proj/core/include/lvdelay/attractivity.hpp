#ifndef LVDELAY_ATTRACTIVITY_HPP
#define LVDELAY_ATTRACTIVITY_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lvdelay/equilibria.hpp"

namespace lvd {

/// Positive-vector certificate for the Lyapunov diagonal-dominance route.
/// eta and q satisfy, for the modified interaction magnitudes |a~_ij|,
///   eta_i mu_i q_i - sum_j (eta_i |a~_ij| q_j + eta_j |a~_ji| q_i)/2 > 0,
/// and epsilon > 0 keeps the control cross term dominated after rescaling
/// the system to q = 1. `support` is empty when eta/q span all species;
/// otherwise they index the listed (reduced-system) species.
struct EtaQCert {
  std::vector<int> support;
  VectorXd eta, q;
  double epsilon = 0.0;
  VectorXd slack;  // left-minus-right margins of the dominance rows
};

/// Extinction certificate for one off-support species q: a non-negative
/// alpha over the support whose three constraint groups hold, with decay
/// rate eta_rate = sum_i alpha_i b_i - b_q > 0.
struct AlphaCert {
  int q = -1;
  std::vector<int> support;
  VectorXd alpha;
  double eta_rate = 0.0;
  VectorXd slacks;  // margins of all constraint rows (first row strict)
};

enum class TheoremId {
  T2_2i_trivial,
  T3_1,
  T3_2_positive,
  T4_2_extinct,
  T4_3,
  T4_4_cascade,
  none_applicable,
};

std::string to_string(TheoremId t);

struct AttractivityVerdict {
  TheoremId theorem = TheoremId::none_applicable;
  std::optional<EquilibriumCandidate> equilibrium;
  std::optional<EtaQCert> eta_q_cert;
  std::vector<AlphaCert> alpha_certs;
  /// Per-species exponential decay rates of the extinction cascade.
  std::map<int, double> cascade_rates;
  /// Whether the fired result concludes global attractivity of the
  /// equilibrium (Theorem 4.4 without its extra hypotheses only gives
  /// extinction of species 2..n).
  bool globally_attractive = false;
  std::vector<std::string> notes;
};

/// Dominance certificate for the saturated equilibrium eq: builds the
/// support-modified matrix [d_ij mu_i - |a~_ij|] and, when it is a
/// nonsingular M-matrix, returns (eta, q) plus the largest epsilon in
/// (0, 1] surviving the rescaled dominance condition.
std::optional<EtaQCert> check_theorem_3_1(const SystemSpec& spec,
                                          const EquilibriumCandidate& eq);

/// Positive-equilibrium route: [d_ij mu_i - |a_ij|] nonsingular M-matrix
/// and all full-support Cramer numerators positive.
std::optional<std::pair<EquilibriumCandidate, EtaQCert>> check_theorem_3_2(
    const SystemSpec& spec);

/// Linear feasibility search for the extinction conditions of species q
/// against the given support; among feasible alpha the decay rate is
/// maximized. With alpha = 0 the proviso mu_q - a_qq^- > 0 is required.
std::optional<AlphaCert> find_alpha(const SystemSpec& spec,
                                    const std::vector<int>& support, int q);

/// Boundary equilibrium route: per-q extinction certificates plus a
/// dominance certificate for the reduced system on the support.
std::optional<AttractivityVerdict> check_theorem_4_3(const SystemSpec& spec);

/// Cascade route with species 1 as survivor: a_q1 >= 0 and
/// (lambda_1 + a_11) b_q - a_q1 b_1 < 0 for q = 2..n.
std::optional<AttractivityVerdict> check_theorem_4_4(const SystemSpec& spec);

/// Autonomous comparison system for bounded time-varying coefficients:
/// sup of the growth/control-gain signals, inf of the damping ones.
struct NonAutonomousBounds {
  int n = 0;
  using Signal = std::function<double(double)>;
  std::vector<Signal> beta;          // -> b_i (sup)
  std::vector<Signal> m;             // -> mu_i (inf, must stay positive)
  std::vector<std::vector<Signal>> alpha;  // -> a_ij (inf)
  std::vector<Signal> k;             // -> c_i (inf)
  std::vector<Signal> delta;         // -> d_i (sup)
  std::vector<Signal> eps;           // -> e_i (inf, must stay positive)
  std::vector<std::vector<Kernel>> K;
  std::vector<Kernel> G;
  double horizon = 1000.0;  // sampling window for sup/inf
  double step = 1e-3;
};

SystemSpec nonautonomous_envelope(const NonAutonomousBounds& bounds);

/// Theorem priority: trivial-equilibrium result, then the positive-
/// equilibrium result, then the dominance result on the saturated
/// candidate, then the two partial-extinction routes. First hit wins;
/// every attempted hypothesis lands in notes.
AttractivityVerdict verdict(const SystemSpec& spec);

}  // namespace lvd

#endif
