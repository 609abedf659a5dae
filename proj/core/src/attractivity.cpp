#include "lvdelay/attractivity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lvd {

namespace {

// Largest eps in (0, 1] with slack_i - eps * coef_i > 0 for all i, found
// by bisection to 1e-6 (any positive value works in theory; we report the
// best one the margins allow).
std::optional<double> pick_epsilon(const VectorXd& slack, const VectorXd& coef) {
  auto ok = [&](double eps) {
    for (int i = 0; i < slack.size(); ++i)
      if (!(slack[i] - eps * coef[i] > 0)) return false;
    return true;
  };
  if (ok(1.0)) return 1.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  if (lo > 0.0 && ok(lo)) return lo;
  return std::nullopt;
}

// Certificate over all n species with support-modified interactions.
std::optional<EtaQCert> full_cert(const SystemSpec& spec,
                                  const std::vector<int>& support) {
  const StructureMatrices sm = build_matrices(spec);
  const MatrixXd B = sm.M0_hat_support(support);
  const auto pair = lemma31_certificate(B);
  if (!pair) return std::nullopt;
  const VectorXd& eta = pair->first;
  const VectorXd& q = pair->second;
  const int n = spec.n;
  const MatrixXd t = modified_interactions(spec.a, support).cwiseAbs();

  VectorXd slack(n);
  for (int i = 0; i < n; ++i) {
    double s = eta[i] * spec.mu[i] * q[i];
    for (int j = 0; j < n; ++j)
      s -= 0.5 * (eta[i] * t(i, j) * q[j] + eta[j] * t(j, i) * q[i]);
    slack[i] = s;
  }
  if (slack.minCoeff() <= 0) return std::nullopt;

  // After rescaling to q = 1 the dominance margin equals slack and the
  // control cross term contributes eps * c_i q_i / 2. The derivative
  // bound of the functional weighs that term by eta_i, so eps must also
  // survive the eta-weighted coefficient; taking the larger of the two
  // keeps both inequalities valid.
  VectorXd coef(n);
  for (int i = 0; i < n; ++i)
    coef[i] = 0.5 * std::max(eta[i], 1.0) * spec.c[i] * q[i];
  const auto eps = pick_epsilon(slack, coef);
  if (!eps) return std::nullopt;

  EtaQCert cert;
  cert.eta = eta;
  cert.q = q;
  cert.epsilon = *eps;
  cert.slack = slack;
  return cert;
}

// Certificate for the reduced system on the support; the coupling to the
// off-support species enters the eps coefficient.
std::optional<EtaQCert> reduced_cert(const SystemSpec& spec,
                                     const std::vector<int>& support) {
  const int p = static_cast<int>(support.size());
  const StructureMatrices sm = build_matrices(spec);
  const MatrixXd B = principal_submatrix(sm.M0_hat, support);
  const auto pair = lemma31_certificate(B);
  if (!pair) return std::nullopt;
  const VectorXd& eta = pair->first;
  const VectorXd& q = pair->second;

  std::vector<bool> in(spec.n, false);
  for (int s : support) in[s] = true;

  VectorXd slack(p), coef(p);
  for (int i = 0; i < p; ++i) {
    const int si = support[i];
    double s = eta[i] * spec.mu[si] * q[i];
    for (int j = 0; j < p; ++j) {
      const int sj = support[j];
      s -= 0.5 * (eta[i] * std::abs(spec.a(si, sj)) * q[j] +
                  eta[j] * std::abs(spec.a(sj, si)) * q[i]);
    }
    slack[i] = s;
    double off = 0.0;
    for (int j = 0; j < spec.n; ++j)
      if (!in[j]) off += std::abs(spec.a(si, j));
    coef[i] = 0.5 * eta[i] * (spec.c[si] * q[i] + off);
  }
  if (slack.minCoeff() <= 0) return std::nullopt;
  const auto eps = pick_epsilon(slack, coef);
  if (!eps) return std::nullopt;

  EtaQCert cert;
  cert.support = support;
  cert.eta = eta;
  cert.q = q;
  cert.epsilon = *eps;
  cert.slack = slack;
  return cert;
}

EquilibriumCandidate trivial_candidate(const SystemSpec& spec) {
  EquilibriumCandidate c;
  c.x_star = VectorXd::Zero(spec.n);
  c.u_star = VectorXd::Zero(spec.n);
  bool sat = true;
  for (int q = 0; q < spec.n; ++q) {
    c.margins[q] = -spec.b[q];
    if (spec.b[q] > 0) sat = false;
  }
  c.saturated = sat;
  return c;
}

}  // namespace

std::string to_string(TheoremId t) {
  switch (t) {
    case TheoremId::T2_2i_trivial: return "trivial_equilibrium";
    case TheoremId::T3_1: return "dominance_saturated";
    case TheoremId::T3_2_positive: return "dominance_positive";
    case TheoremId::T4_2_extinct: return "single_extinction";
    case TheoremId::T4_3: return "boundary_with_extinction";
    case TheoremId::T4_4_cascade: return "cascade_extinction";
    case TheoremId::none_applicable: return "none_applicable";
  }
  return "?";
}

std::optional<EtaQCert> check_theorem_3_1(const SystemSpec& spec,
                                          const EquilibriumCandidate& eq) {
  return full_cert(spec, eq.positive_support());
}

std::optional<std::pair<EquilibriumCandidate, EtaQCert>> check_theorem_3_2(
    const SystemSpec& spec) {
  const int n = spec.n;
  const StructureMatrices sm = build_matrices(spec);
  if (classify_Z_matrix(sm.M0_hat).cls != MatrixClass::nonsingular_M)
    return std::nullopt;

  // All Cramer numerators of the full-support system must be positive.
  const VectorXd lam = spec.lambda();
  MatrixXd B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = (i == j ? lam[i] : 0.0) + spec.a(i, j);
  for (int i = 0; i < n; ++i) {
    MatrixXd Bi = B;
    Bi.col(i) = spec.b;
    const DetResult r = det_scaled(Bi);
    if (!(r.det > det_tol(r))) return std::nullopt;
  }

  std::vector<int> full(n);
  for (int i = 0; i < n; ++i) full[i] = i;
  auto cert = full_cert(spec, full);
  if (!cert) return std::nullopt;

  EquilibriumCandidate c;
  c.support = full;
  c.x_star = B.partialPivLu().solve(spec.b);
  c.u_star = spec.d.array() * c.x_star.array() / spec.e.array();
  c.saturated = true;
  return std::make_pair(c, *cert);
}

std::optional<AlphaCert> find_alpha(const SystemSpec& spec,
                                    const std::vector<int>& support, int q) {
  const int n = spec.n;
  const int p = static_cast<int>(support.size());
  const VectorXd lam = spec.lambda();
  std::vector<bool> in(n, false);
  for (int s : support) {
    if (s == q) throw SpecError("find_alpha: q must lie outside the support");
    in[s] = true;
  }

  // Rows over alpha >= 0: first the strict rate row, then one row per
  // species j (support rows bound by a_qj, off-support rows by the
  // corresponding entry of the q-line of the controlled matrix).
  MatrixXd A(1 + n, std::max(p, 1));
  A.setZero();
  VectorXd rhs(1 + n);
  for (int i = 0; i < p; ++i) A(0, i) = -spec.b[support[i]];
  rhs[0] = -spec.b[q];
  for (int j = 0; j < n; ++j) {
    const int row = 1 + j;
    for (int i = 0; i < p; ++i) {
      const int si = support[i];
      A(row, i) = spec.a(si, j) + (si == j ? lam[si] : 0.0);
    }
    rhs[row] = spec.a(q, j) + (q == j ? lam[q] : 0.0);
    if (in[j]) rhs[row] = spec.a(q, j);
  }

  VectorXd alpha;
  if (p == 0) {
    // alpha is empty: need b_q < 0 and a non-negative q-line.
    if (!(spec.b[q] < 0) || rhs.tail(n).minCoeff() < -1e-12) return std::nullopt;
    alpha.resize(0);
  } else {
    const auto feasible = linear_feasibility(A, rhs, {0});
    if (!feasible) return std::nullopt;
    alpha = *feasible;
    // Among feasible points, maximize the decay rate (bounded by a cap on
    // each alpha_i so the LP stays finite).
    MatrixXd Ac(1 + n + p, p);
    Ac.setZero();
    Ac.topRows(1 + n) = A;
    VectorXd rc(1 + n + p);
    rc.head(1 + n) = rhs;
    for (int i = 0; i < p; ++i) {
      Ac(1 + n + i, i) = 1.0;
      rc[1 + n + i] = 1e3;
    }
    VectorXd obj(p);
    for (int i = 0; i < p; ++i) obj[i] = spec.b[support[i]];
    const LpResult r = simplex_maximize(Ac, rc, obj);
    if (r.status == LpResult::Status::optimal) {
      double rate = -spec.b[q];
      for (int i = 0; i < p; ++i) rate += r.x[i] * spec.b[support[i]];
      if (rate > 1e-9) alpha = r.x;
    }
  }

  AlphaCert cert;
  cert.q = q;
  cert.support = support;
  cert.alpha = alpha;
  cert.eta_rate = -spec.b[q];
  for (int i = 0; i < p; ++i) cert.eta_rate += alpha[i] * spec.b[support[i]];
  if (!(cert.eta_rate > 1e-9)) return std::nullopt;
  if ((p == 0 || alpha.cwiseAbs().maxCoeff() <= 1e-12) &&
      !(spec.mu[q] - std::max(0.0, -spec.a(q, q)) > 0))
    return std::nullopt;

  cert.slacks.resize(1 + n);
  cert.slacks[0] = cert.eta_rate;
  for (int j = 0; j < n; ++j) {
    double lhs = 0.0;
    for (int i = 0; i < p; ++i) lhs += alpha[i] * A(1 + j, i);
    cert.slacks[1 + j] = rhs[1 + j] - lhs;
  }
  return cert;
}

std::optional<AttractivityVerdict> check_theorem_4_3(const SystemSpec& spec) {
  const SaturatedResult sat = saturated_equilibrium(spec);
  if (sat.m_verdict.cls != MatrixClass::P_matrix) return std::nullopt;
  if (sat.status != SaturatedResult::Status::unique) return std::nullopt;
  const EquilibriumCandidate& eq = sat.candidates.front();
  const std::vector<int> sup = eq.positive_support();
  if (sup.empty() || static_cast<int>(sup.size()) == spec.n) return std::nullopt;

  const StructureMatrices sm = build_matrices(spec);
  if (classify_Z_matrix(sm.M0_minus).cls != MatrixClass::nonsingular_M)
    return std::nullopt;
  auto cert = reduced_cert(spec, sup);
  if (!cert) return std::nullopt;

  AttractivityVerdict v;
  std::vector<bool> in(spec.n, false);
  for (int s : sup) in[s] = true;
  for (int q = 0; q < spec.n; ++q) {
    if (in[q]) continue;
    auto ac = find_alpha(spec, sup, q);
    // the boundary route needs a nonzero alpha for every vanishing species
    if (!ac || ac->alpha.size() == 0 || ac->alpha.cwiseAbs().maxCoeff() <= 1e-12)
      return std::nullopt;
    v.cascade_rates[q] = ac->eta_rate;
    v.alpha_certs.push_back(std::move(*ac));
  }

  v.theorem = TheoremId::T4_3;
  v.equilibrium = eq;
  v.eta_q_cert = std::move(*cert);
  v.globally_attractive = true;
  return v;
}

std::optional<AttractivityVerdict> check_theorem_4_4(const SystemSpec& spec) {
  const int n = spec.n;
  if (n < 2) return std::nullopt;
  const StructureMatrices sm = build_matrices(spec);
  if (is_P_matrix(sm.M).cls != MatrixClass::P_matrix) return std::nullopt;
  if (classify_Z_matrix(sm.M0_minus).cls != MatrixClass::nonsingular_M)
    return std::nullopt;

  const VectorXd lam = spec.lambda();
  const double h11 = lam[0] + spec.a(0, 0);
  if (!(h11 > 0) || !(spec.b[0] > 0)) return std::nullopt;

  AttractivityVerdict v;
  for (int q = 1; q < n; ++q) {
    if (spec.a(q, 0) < 0) return std::nullopt;
    const double rq2 = h11 * spec.b[q] - spec.a(q, 0) * spec.b[0];
    const double scale =
        1.0 + std::abs(h11 * spec.b[q]) + std::abs(spec.a(q, 0) * spec.b[0]);
    if (!(rq2 < -1e-9 * scale)) return std::nullopt;

    AlphaCert ac;
    ac.q = q;
    ac.support = {0};
    ac.alpha.resize(1);
    ac.alpha[0] = spec.a(q, 0) / h11;
    ac.eta_rate = -rq2 / h11;
    ac.slacks.resize(2);
    ac.slacks[0] = ac.eta_rate;
    ac.slacks[1] = spec.a(q, 0) - ac.alpha[0] * h11;  // support row, zero slack
    v.cascade_rates[q] = ac.eta_rate;
    v.alpha_certs.push_back(std::move(ac));
  }

  EquilibriumCandidate c;
  c.support = {0};
  c.x_star = VectorXd::Zero(n);
  c.x_star[0] = spec.b[0] / h11;
  c.u_star = spec.d.array() * c.x_star.array() / spec.e.array();
  for (int q = 1; q < n; ++q) c.margins[q] = spec.a(q, 0) * c.x_star[0] - spec.b[q];
  c.saturated = true;

  v.theorem = TheoremId::T4_4_cascade;
  v.equilibrium = c;
  v.globally_attractive = spec.mu[0] > std::abs(spec.a(0, 0));
  if (!v.globally_attractive)
    v.notes.push_back(
        "cascade gives extinction of species 2..n; survivor convergence needs "
        "mu_1 > |a_11|, which fails here");
  return v;
}

SystemSpec nonautonomous_envelope(const NonAutonomousBounds& bounds) {
  const int n = bounds.n;
  if (n <= 0) throw SpecError("nonautonomous_envelope: n must be positive");
  auto scan = [&](const NonAutonomousBounds::Signal& f, bool want_sup) {
    double best = f(0.0);
    for (double t = bounds.step; t <= bounds.horizon; t += bounds.step) {
      const double v = f(t);
      best = want_sup ? std::max(best, v) : std::min(best, v);
    }
    return best;
  };

  SystemSpec s;
  s.n = n;
  s.b.resize(n);
  s.mu.resize(n);
  s.c.resize(n);
  s.d.resize(n);
  s.e.resize(n);
  s.a.resize(n, n);
  for (int i = 0; i < n; ++i) {
    s.b[i] = scan(bounds.beta[i], true);
    s.mu[i] = scan(bounds.m[i], false);
    s.c[i] = scan(bounds.k[i], false);
    s.d[i] = scan(bounds.delta[i], true);
    s.e[i] = scan(bounds.eps[i], false);
    for (int j = 0; j < n; ++j) s.a(i, j) = scan(bounds.alpha[i][j], false);
    if (!(s.mu[i] > 0))
      throw SpecError("nonautonomous_envelope: inf of m_" + std::to_string(i + 1) +
                      " must be positive");
    if (!(s.e[i] > 0))
      throw SpecError("nonautonomous_envelope: inf of e_" + std::to_string(i + 1) +
                      " must be positive");
    if (s.c[i] < 0)
      throw SpecError("nonautonomous_envelope: inf of k_" + std::to_string(i + 1) +
                      " must be non-negative");
    if (s.d[i] < 0)
      throw SpecError("nonautonomous_envelope: sup of d_" + std::to_string(i + 1) +
                      " must be non-negative");
  }
  s.K = bounds.K;
  s.G = bounds.G;
  s.validate();
  return s;
}

AttractivityVerdict verdict(const SystemSpec& spec) {
  AttractivityVerdict v;
  const StructureMatrices sm = build_matrices(spec);

  // Trivial equilibrium route: b <= 0 with a dissipativity matrix.
  if (spec.b.maxCoeff() <= 0) {
    const MatrixVerdict p = is_P_matrix(sm.M);
    const MatrixVerdict z = classify_Z_matrix(sm.M0_minus);
    if (p.cls == MatrixClass::P_matrix &&
        (z.cls == MatrixClass::nonsingular_M || z.cls == MatrixClass::singular_M)) {
      v.theorem = TheoremId::T2_2i_trivial;
      v.equilibrium = trivial_candidate(spec);
      v.globally_attractive = true;
      v.notes.push_back("all growth rates non-positive; [d mu - a^-] is a " +
                        to_string(z.cls));
      return v;
    }
    v.notes.push_back("all growth rates non-positive but the trivial route "
                      "failed: M is " + to_string(p.cls) + ", [d mu - a^-] is " +
                      to_string(z.cls));
  }

  // Positive equilibrium route.
  if (auto pos = check_theorem_3_2(spec)) {
    v.theorem = TheoremId::T3_2_positive;
    v.equilibrium = std::move(pos->first);
    v.eta_q_cert = std::move(pos->second);
    v.globally_attractive = true;
    v.notes.push_back("positive equilibrium with [d mu - |a|] a nonsingular "
                      "M-matrix");
    return v;
  }
  v.notes.push_back("positive-equilibrium route not applicable");

  // Dominance route on the saturated candidate (control-independent).
  const SaturatedResult sat = saturated_equilibrium(spec);
  if (sat.status == SaturatedResult::Status::unique) {
    const EquilibriumCandidate& eq = sat.candidates.front();
    if (auto cert = check_theorem_3_1(spec, eq)) {
      v.theorem = TheoremId::T3_1;
      v.equilibrium = eq;
      v.eta_q_cert = std::move(*cert);
      v.globally_attractive = true;
      v.notes.push_back("support-modified dominance certificate; conclusion "
                        "holds for every admissible control gain");
      return v;
    }
    v.notes.push_back("saturated candidate found but its support-modified "
                      "matrix is not a nonsingular M-matrix");
  } else {
    std::ostringstream os;
    os << "saturated candidate not unique (" << sat.candidates.size()
       << " distinct saturated points)";
    v.notes.push_back(os.str());
  }

  if (auto b = check_theorem_4_3(spec)) {
    b->notes.insert(b->notes.begin(), v.notes.begin(), v.notes.end());
    return *b;
  }
  v.notes.push_back("boundary-with-extinction route not applicable");

  if (auto c = check_theorem_4_4(spec)) {
    c->notes.insert(c->notes.begin(), v.notes.begin(), v.notes.end());
    return *c;
  }
  v.notes.push_back("cascade route not applicable");

  v.theorem = TheoremId::none_applicable;
  return v;
}

}  // namespace lvd
