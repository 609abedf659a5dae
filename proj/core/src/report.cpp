#include "lvdelay/report.hpp"

#include <cmath>
#include <sstream>

namespace lvd {

const char* const kVersion = "0.1.0";

namespace {

ordered_json vec_json(const VectorXd& v) {
  ordered_json a = ordered_json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

ordered_json mat_json(const MatrixXd& m) {
  ordered_json a = ordered_json::array();
  for (int i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    a.push_back(row);
  }
  return a;
}

ordered_json support_json(const std::vector<int>& s) {
  ordered_json a = ordered_json::array();
  for (int i : s) a.push_back(i + 1);  // 1-based in reports
  return a;
}

ordered_json kernel_json(const Kernel& k) {
  ordered_json o;
  switch (k.kind()) {
    case Kernel::Kind::dirac:
      o["kind"] = "dirac";
      o["tau"] = k.tau();
      break;
    case Kernel::Kind::gamma:
      o["kind"] = "gamma";
      o["m"] = k.order();
      o["gamma"] = k.rate();
      break;
    case Kernel::Kind::table:
      o["kind"] = "table";
      o["nodes"] = k.nodes().size();
      break;
  }
  return o;
}

ordered_json verdict_json(const MatrixVerdict& v) {
  ordered_json o;
  o["class"] = to_string(v.cls);
  if (v.v) o["certificate_v"] = vec_json(*v.v);
  if (!v.failing_minor.empty()) {
    o["minor"] = support_json(v.failing_minor);
    o["minor_det"] = v.near_zero_det;
  }
  if (!v.detail.empty()) o["detail"] = v.detail;
  return o;
}

ordered_json eq_json(const EquilibriumCandidate& c) {
  ordered_json o;
  o["support"] = support_json(c.support);
  if (c.singular) {
    o["singular"] = true;
    return o;
  }
  o["x_star"] = vec_json(c.x_star);
  o["u_star"] = vec_json(c.u_star);
  ordered_json margins = ordered_json::object();
  for (const auto& [q, m] : c.margins) margins[std::to_string(q + 1)] = m;
  o["margins"] = margins;
  o["saturated"] = c.saturated;
  o["degenerate"] = c.degenerate;
  return o;
}

}  // namespace

ordered_json tolerance_json() {
  ordered_json t;
  t["det_relative"] = 1e-9;
  t["inverse_nonnegativity"] = -1e-10;
  t["eigenvalue"] = 1e-8;
  t["degeneracy_band"] = 1e-9;
  t["lp_strict_margin"] = 1e-9;
  t["kernel_tail_mass"] = 1e-8;
  t["chain_init_tail_mass"] = 1e-10;
  t["epsilon_bisection"] = 1e-6;
  t["table_mass_band"] = 1e-6;
  return t;
}

AnalysisResult analyze(const SystemSpec& spec) {
  AnalysisResult r;
  r.matrices = build_matrices(spec);
  r.cls_M = is_P_matrix(r.matrices.M);
  r.cls_M0_minus = classify_Z_matrix(r.matrices.M0_minus);
  r.cls_M0_hat = classify_Z_matrix(r.matrices.M0_hat);
  r.cls_M_hat = classify_Z_matrix(r.matrices.M_hat);
  r.equilibria = enumerate_equilibria(spec);
  r.saturated = saturated_equilibrium(spec);
  r.verdict = verdict(spec);
  r.indeterminate = r.cls_M.cls == MatrixClass::indeterminate;
  return r;
}

ordered_json report_json(const SystemSpec& spec, const AnalysisResult& r) {
  ordered_json doc;
  doc["version"] = kVersion;

  ordered_json s;
  s["n"] = spec.n;
  s["b"] = vec_json(spec.b);
  s["mu"] = vec_json(spec.mu);
  s["a"] = mat_json(spec.a);
  s["c"] = vec_json(spec.c);
  s["d"] = vec_json(spec.d);
  s["e"] = vec_json(spec.e);
  s["lambda"] = vec_json(spec.lambda());
  ordered_json kk = ordered_json::array();
  for (int i = 0; i < spec.n; ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < spec.n; ++j) row.push_back(kernel_json(spec.K[i][j]));
    kk.push_back(row);
  }
  s["K"] = kk;
  ordered_json gg = ordered_json::array();
  for (int i = 0; i < spec.n; ++i) gg.push_back(kernel_json(spec.G[i]));
  s["G"] = gg;
  if (!spec.warnings.empty()) s["warnings"] = spec.warnings;
  doc["spec"] = s;

  ordered_json m;
  m["M"] = mat_json(r.matrices.M);
  m["M_class"] = verdict_json(r.cls_M);
  m["M0_minus"] = mat_json(r.matrices.M0_minus);
  m["M0_minus_class"] = verdict_json(r.cls_M0_minus);
  m["M0_hat"] = mat_json(r.matrices.M0_hat);
  m["M0_hat_class"] = verdict_json(r.cls_M0_hat);
  m["M_hat"] = mat_json(r.matrices.M_hat);
  m["M_hat_class"] = verdict_json(r.cls_M_hat);
  doc["matrices"] = m;

  ordered_json eqs = ordered_json::array();
  for (const auto& c : r.equilibria) eqs.push_back(eq_json(c));
  doc["equilibria"] = eqs;

  ordered_json sat;
  switch (r.saturated.status) {
    case SaturatedResult::Status::unique: sat["status"] = "unique"; break;
    case SaturatedResult::Status::multiple: sat["status"] = "multiple"; break;
    case SaturatedResult::Status::none: sat["status"] = "none"; break;
  }
  sat["uniqueness_guaranteed"] = r.saturated.uniqueness_guaranteed;
  ordered_json cands = ordered_json::array();
  for (const auto& c : r.saturated.candidates) cands.push_back(eq_json(c));
  sat["candidates"] = cands;
  doc["saturated"] = sat;

  ordered_json v;
  v["result"] = to_string(r.verdict.theorem);
  v["globally_attractive"] = r.verdict.globally_attractive;
  if (r.verdict.equilibrium) v["equilibrium"] = eq_json(*r.verdict.equilibrium);
  if (r.verdict.eta_q_cert) {
    const EtaQCert& c = *r.verdict.eta_q_cert;
    ordered_json cj;
    if (!c.support.empty()) cj["support"] = support_json(c.support);
    cj["eta"] = vec_json(c.eta);
    cj["q"] = vec_json(c.q);
    cj["epsilon"] = c.epsilon;
    cj["slack"] = vec_json(c.slack);
    v["dominance_certificate"] = cj;
  }
  if (!r.verdict.alpha_certs.empty()) {
    ordered_json arr = ordered_json::array();
    for (const AlphaCert& c : r.verdict.alpha_certs) {
      ordered_json cj;
      cj["q"] = c.q + 1;
      cj["support"] = support_json(c.support);
      cj["alpha"] = vec_json(c.alpha);
      cj["eta_rate"] = c.eta_rate;
      cj["slacks"] = vec_json(c.slacks);
      arr.push_back(cj);
    }
    v["extinction_certificates"] = arr;
  }
  if (!r.verdict.cascade_rates.empty()) {
    ordered_json rates = ordered_json::object();
    for (const auto& [q, rate] : r.verdict.cascade_rates)
      rates[std::to_string(q + 1)] = rate;
    v["extinction_rates"] = rates;
  }
  if (!r.verdict.notes.empty()) v["notes"] = r.verdict.notes;
  doc["verdict"] = v;

  doc["indeterminate"] = r.indeterminate;
  doc["tolerances"] = tolerance_json();
  return doc;
}

ordered_json simulation_json(const Trajectory& traj, const ConvergenceReport& conv,
                             const BoundednessReport& bounds) {
  ordered_json o;
  o["T_end"] = traj.t_end();
  o["h"] = traj.step;
  o["grid_points"] = traj.t.size();
  ordered_json fx = ordered_json::array(), fu = ordered_json::array();
  for (int i = 0; i < traj.spec.n; ++i) {
    fx.push_back(traj.x[i].back());
    fu.push_back(traj.u[i].back());
  }
  o["final_x"] = fx;
  o["final_u"] = fu;
  o["converged"] = conv.converged;
  o["residual_x"] = vec_json(conv.residual_x);
  o["residual_u"] = vec_json(conv.residual_u);
  o["window_start"] = conv.window_start;
  o["control_sandwich"] = conv.sandwich_ok;
  if (!conv.extinction_rates.empty()) {
    ordered_json rates = ordered_json::object();
    for (const auto& [q, rate] : conv.extinction_rates)
      rates[std::to_string(q + 1)] = rate;
    o["extinction_rates"] = rates;
  }
  o["sup_x"] = vec_json(bounds.sup_x);
  o["sup_u"] = vec_json(bounds.sup_u);
  o["bounded"] = bounds.bounded;
  return o;
}

std::string report_text(const ordered_json& doc) {
  std::ostringstream os;
  os << "system analysis (v" << doc["version"].get<std::string>() << ")\n";
  const auto& s = doc["spec"];
  os << "  n = " << s["n"].get<int>() << ", b = " << s["b"].dump()
     << ", lambda = " << s["lambda"].dump() << "\n";
  if (s.contains("warnings"))
    for (const auto& w : s["warnings"]) os << "  warning: " << w.get<std::string>() << "\n";

  const auto& m = doc["matrices"];
  os << "matrix classes\n";
  for (const char* key : {"M", "M0_minus", "M0_hat", "M_hat"}) {
    const std::string cls = m[std::string(key) + "_class"]["class"].get<std::string>();
    os << "  " << key << ": " << cls << "\n";
  }

  os << "equilibria (" << doc["equilibria"].size() << " candidates)\n";
  for (const auto& e : doc["equilibria"]) {
    os << "  support " << e["support"].dump();
    if (e.contains("singular")) {
      os << "  singular support system\n";
      continue;
    }
    os << "  x* = " << e["x_star"].dump()
       << (e["saturated"].get<bool>() ? "  saturated" : "")
       << (e["degenerate"].get<bool>() ? "  degenerate" : "") << "\n";
  }

  const auto& sat = doc["saturated"];
  os << "saturated equilibrium: " << sat["status"].get<std::string>()
     << (sat["uniqueness_guaranteed"].get<bool>() ? " (uniqueness guaranteed)" : "")
     << "\n";

  const auto& v = doc["verdict"];
  os << "verdict: " << v["result"].get<std::string>();
  if (v["globally_attractive"].get<bool>()) os << " (globally attractive)";
  os << "\n";
  if (v.contains("equilibrium"))
    os << "  equilibrium x* = " << v["equilibrium"]["x_star"].dump() << "\n";
  if (v.contains("dominance_certificate")) {
    const auto& c = v["dominance_certificate"];
    os << "  eta = " << c["eta"].dump() << ", q = " << c["q"].dump()
       << ", epsilon = " << c["epsilon"].get<double>() << "\n";
  }
  if (v.contains("extinction_certificates"))
    for (const auto& c : v["extinction_certificates"])
      os << "  extinction of species " << c["q"].get<int>() << ": alpha = "
         << c["alpha"].dump() << ", rate = " << c["eta_rate"].get<double>() << "\n";
  if (v.contains("notes"))
    for (const auto& note : v["notes"]) os << "  note: " << note.get<std::string>() << "\n";

  if (doc.contains("simulation")) {
    const auto& sim = doc["simulation"];
    os << "simulation: T = " << sim["T_end"].get<double>() << ", h = "
       << sim["h"].get<double>() << "\n"
       << "  final x = " << sim["final_x"].dump() << "\n"
       << "  converged = " << (sim["converged"].get<bool>() ? "yes" : "no")
       << ", bounded = " << (sim["bounded"].get<bool>() ? "yes" : "no") << "\n";
    if (sim.contains("extinction_rates"))
      os << "  extinction rates " << sim["extinction_rates"].dump() << "\n";
  }
  if (doc["indeterminate"].get<bool>())
    os << "indeterminate: a principal minor fell inside the zero tolerance band\n";
  return os.str();
}

}  // namespace lvd
