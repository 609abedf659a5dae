// Command-line front end: static analysis, simulation, randomized
// verification of the certified asymptotics, and built-in examples.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <random>

#include <lvdelay/config.hpp>
#include <lvdelay/fixtures.hpp>
#include <lvdelay/lyapunov.hpp>
#include <lvdelay/report.hpp>

namespace {

using namespace lvd;

double default_step(const SystemSpec& spec) {
  double h = 0.01;
  auto scan = [&](const Kernel& k) {
    if (k.kind() == Kernel::Kind::dirac && k.tau() > 0)
      h = std::min(h, k.tau() / 10.0);
  };
  for (int i = 0; i < spec.n; ++i) {
    for (int j = 0; j < spec.n; ++j)
      if (spec.a(i, j) != 0.0) scan(spec.K[i][j]);
    if (spec.c[i] > 0.0) scan(spec.G[i]);
  }
  return h;
}

std::vector<std::size_t> strided_indices(std::size_t n, int stride) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < n; k += static_cast<std::size_t>(stride))
    idx.push_back(k);
  if (idx.back() != n - 1) idx.push_back(n - 1);
  return idx;
}

void write_csv(const std::string& path, const Trajectory& traj, int stride,
               const LyapunovTrace* lyap, const VpqTrace* vpq) {
  std::ofstream out(path);
  if (!out) throw SpecError("cannot write file: " + path);
  const int n = traj.spec.n;
  out << "t";
  for (int i = 0; i < n; ++i) out << ", x_" << (i + 1);
  for (int i = 0; i < n; ++i) out << ", u_" << (i + 1);
  if (lyap) out << ", U1, U2, U";
  if (vpq) out << ", V";
  out << "\n";
  const auto idx = strided_indices(traj.t.size(), stride);
  char buf[64];
  auto emit = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << ", " << buf;
  };
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const std::size_t k = idx[r];
    std::snprintf(buf, sizeof buf, "%.17g", traj.t[k]);
    out << buf;
    for (int i = 0; i < n; ++i) emit(traj.x[i][k]);
    for (int i = 0; i < n; ++i) emit(traj.u[i][k]);
    if (lyap) {
      emit(lyap->U1[r]);
      emit(lyap->U2[r]);
      emit(lyap->U[r]);
    }
    if (vpq) emit(vpq->V[r]);
    out << "\n";
  }
}

int cmd_analyze(const std::string& path, const std::string& format) {
  const LoadedSpec loaded = load_spec_file(path);
  const AnalysisResult r = analyze(loaded.spec);
  const ordered_json doc = report_json(loaded.spec, r);
  if (format == "structured")
    std::cout << doc.dump(2) << "\n";
  else
    std::cout << report_text(doc);
  return r.indeterminate ? 2 : 0;
}

int cmd_simulate(const std::string& path, double T, double h,
                 const std::string& history_path, const std::string& out_path,
                 int stride, const std::string& format) {
  LoadedSpec loaded = load_spec_file(path);
  if (!history_path.empty()) {
    const LoadedSpec hdoc = load_spec_file(history_path);
    if (!hdoc.history) throw SpecError(history_path + ": no history section");
    loaded.history = hdoc.history;
  }
  if (!loaded.history)
    throw SpecError("no history: provide one in the spec or via --history");
  if (h <= 0) h = default_step(loaded.spec);

  const AnalysisResult r = analyze(loaded.spec);
  const Trajectory traj = integrate(loaded.spec, *loaded.history, T, h);
  const BoundednessReport bounds = boundedness_check(traj);

  LyapunovTrace lyap;
  VpqTrace vpq;
  bool have_lyap = false, have_vpq = false;
  if (r.verdict.eta_q_cert && r.verdict.equilibrium) {
    lyap = lyapunov_trace(traj, *r.verdict.equilibrium, *r.verdict.eta_q_cert,
                          stride);
    have_lyap = true;
  }
  if (!r.verdict.alpha_certs.empty()) {
    vpq = vpq_trace(traj, r.verdict.alpha_certs.front(), stride);
    have_vpq = true;
  }
  if (!out_path.empty())
    write_csv(out_path, traj, stride, have_lyap ? &lyap : nullptr,
              have_vpq ? &vpq : nullptr);

  ordered_json doc = report_json(loaded.spec, r);
  if (r.verdict.equilibrium) {
    const ConvergenceReport conv =
        convergence_check(traj, *r.verdict.equilibrium, 1e-4);
    doc["simulation"] = simulation_json(traj, conv, bounds);
  } else {
    ConvergenceReport conv;
    conv.residual_x = VectorXd::Zero(loaded.spec.n);
    conv.residual_u = VectorXd::Zero(loaded.spec.n);
    doc["simulation"] = simulation_json(traj, conv, bounds);
    doc["simulation"].erase("converged");
    doc["simulation"].erase("residual_x");
    doc["simulation"].erase("residual_u");
  }
  if (have_lyap) {
    doc["simulation"]["U_initial"] = lyap.U.front();
    doc["simulation"]["U_final"] = lyap.U.back();
  }
  if (have_vpq) doc["simulation"]["V_fitted_rate"] = vpq.fitted_rate;
  if (format == "structured")
    std::cout << doc.dump(2) << "\n";
  else
    std::cout << report_text(doc);
  return r.indeterminate ? 2 : 0;
}

struct RunOutcome {
  bool pass = true;
  unsigned seed = 0;
  std::vector<std::string> failures;
};

RunOutcome verify_one(const SystemSpec& spec, const AnalysisResult& r,
                      const EquilibriumCandidate& eq, unsigned seed, double T,
                      double h, double tol) {
  RunOutcome out;
  out.seed = seed;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(0.2, 1.8);
  VectorXd x0(spec.n), u0(spec.n);
  for (int i = 0; i < spec.n; ++i) x0[i] = unif(rng);
  for (int i = 0; i < spec.n; ++i) u0[i] = unif(rng);

  Trajectory traj;
  try {
    traj = integrate(spec, HistorySpec::constants(x0, u0), T, h);
  } catch (const std::exception& e) {
    out.pass = false;
    out.failures.push_back(std::string("integration failed: ") + e.what());
    return out;
  }

  if (!boundedness_check(traj).bounded) {
    out.pass = false;
    out.failures.push_back("trajectory not bounded");
  }

  const ConvergenceReport conv = convergence_check(traj, eq, tol);
  if (r.verdict.globally_attractive && !conv.converged) {
    out.pass = false;
    out.failures.push_back("did not converge to the certified equilibrium");
  }

  for (const auto& [q, rate] : r.verdict.cascade_rates) {
    double trailing_max = 0.0;
    for (std::size_t k = (3 * traj.t.size()) / 4; k < traj.t.size(); ++k)
      trailing_max = std::max(trailing_max, traj.x[q][k]);
    if (trailing_max < 1e-100) continue;  // extinct beyond fitting precision
    const auto it = conv.extinction_rates.find(q);
    if (it == conv.extinction_rates.end() || it->second < rate - 0.05) {
      out.pass = false;
      out.failures.push_back("extinction rate of species " +
                             std::to_string(q + 1) + " below certificate");
    }
  }

  const bool monotone_case = r.verdict.theorem == TheoremId::T3_1 ||
                             r.verdict.theorem == TheoremId::T3_2_positive;
  if (monotone_case && r.verdict.eta_q_cert) {
    const int stride =
        std::max(1, static_cast<int>(traj.t.size() / 1000));
    const LyapunovTrace lyap =
        lyapunov_trace(traj, eq, *r.verdict.eta_q_cert, stride);
    // coarser band than the grid-level invariant: the strided pairs
    // accumulate the small non-monotone control contribution of the
    // functional, which is not a verification failure
    const double eps_num = 1e-4 * (1.0 + lyap.U.front());
    for (std::size_t k = 1; k < lyap.U.size(); ++k) {
      if (lyap.U[k] > lyap.U[k - 1] + eps_num) {
        out.pass = false;
        out.failures.push_back("Lyapunov functional increased at t = " +
                               std::to_string(lyap.t[k]));
        break;
      }
    }
  }
  return out;
}

int cmd_verify(const std::string& path, double T, double h, unsigned seed,
               int runs, double tol, bool corrupt) {
  const LoadedSpec loaded = load_spec_file(path);
  const AnalysisResult r = analyze(loaded.spec);
  std::cout << "verdict: " << to_string(r.verdict.theorem) << "\n";
  if (r.indeterminate) {
    std::cout << "INDETERMINATE: matrix classification fell inside the zero "
                 "tolerance band\n";
    return 2;
  }
  if (r.verdict.theorem == TheoremId::none_applicable) {
    std::cout << "SKIP: no applicable attractivity result for this system\n";
    return 0;
  }
  if (!r.verdict.equilibrium) {
    std::cout << "SKIP: verdict carries no equilibrium to verify against\n";
    return 0;
  }
  if (h <= 0) h = default_step(loaded.spec);

  EquilibriumCandidate eq = *r.verdict.equilibrium;
  if (corrupt) {
    eq.x_star[0] += 0.05;  // deliberate self-test: verification must fail
    std::cout << "note: equilibrium deliberately corrupted for self-test\n";
  }

  std::vector<std::future<RunOutcome>> futures;
  for (int run = 0; run < runs; ++run) {
    const unsigned s = seed + static_cast<unsigned>(run);
    futures.push_back(std::async(std::launch::async, [&, s] {
      return verify_one(loaded.spec, r, eq, s, T, h, tol);
    }));
  }
  bool all_pass = true;
  for (auto& f : futures) {
    const RunOutcome o = f.get();
    std::cout << "history seed " << o.seed << ": " << (o.pass ? "PASS" : "FAIL")
              << "\n";
    for (const std::string& msg : o.failures) std::cout << "  " << msg << "\n";
    all_pass = all_pass && o.pass;
  }
  std::cout << (all_pass ? "PASS" : "FAIL") << " (" << runs
            << " randomized histories, T = " << T << ", h = " << h
            << ", tol = " << tol << ")\n";
  return all_pass ? 0 : 3;
}

int cmd_examples(const std::string& name, const std::string& out_path) {
  if (name.empty()) {
    for (const Fixture& f : fixtures())
      std::cout << f.name << "  " << f.description << "\n";
    return 0;
  }
  const Fixture& f = fixture(name);  // throws for unknown names
  const std::string path = out_path.empty() ? f.name + ".json" : out_path;
  std::ofstream out(path);
  if (!out) throw SpecError("cannot write file: " + path);
  out << f.config;
  std::cout << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"delayed Lotka-Volterra analysis and simulation"};
  app.set_help_flag("--help", "print help");  // frees -h for the step size
  app.require_subcommand(1);

  std::string spec_path, format = "text", history_path, out_path, name;
  double T = 100.0, h = 0.0, tol = 1e-3;
  int stride = 1, runs = 3;
  unsigned seed = 1;
  bool corrupt = false;

  auto* analyze_cmd = app.add_subcommand("analyze", "static analysis report");
  analyze_cmd->add_option("spec", spec_path, "spec file")->required();
  analyze_cmd->add_option("--format", format)
      ->check(CLI::IsMember({"text", "structured"}));

  auto* sim_cmd = app.add_subcommand("simulate", "integrate and export CSV");
  sim_cmd->add_option("spec", spec_path, "spec file")->required();
  sim_cmd->add_option("--T", T, "horizon");
  sim_cmd->add_option("--h", h, "step (default from the delays)");
  sim_cmd->add_option("--history", history_path, "history override file");
  sim_cmd->add_option("--out", out_path, "trajectory CSV path");
  sim_cmd->add_option("--stride", stride)->check(CLI::PositiveNumber);
  sim_cmd->add_option("--format", format)
      ->check(CLI::IsMember({"text", "structured"}));

  auto* verify_cmd =
      app.add_subcommand("verify", "check the verdict against simulations");
  verify_cmd->add_option("spec", spec_path, "spec file")->required();
  verify_cmd->add_option("--T", T, "horizon")->default_val(1200.0);
  verify_cmd->add_option("--h", h, "step (default from the delays)");
  verify_cmd->add_option("--seed", seed, "base seed for the histories");
  verify_cmd->add_option("--runs", runs)->check(CLI::PositiveNumber);
  verify_cmd->add_option("--tol", tol, "convergence tolerance");
  verify_cmd->add_flag("--corrupt-equilibrium", corrupt,
                       "self-test: perturb the equilibrium so FAIL is expected");

  auto* ex_cmd = app.add_subcommand("examples", "list or write built-in fixtures");
  ex_cmd->add_option("name", name, "fixture to materialize");
  ex_cmd->add_option("--out", out_path, "output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze_cmd) return cmd_analyze(spec_path, format);
    if (*sim_cmd)
      return cmd_simulate(spec_path, T, h, history_path, out_path, stride, format);
    if (*verify_cmd) return cmd_verify(spec_path, T, h, seed, runs, tol, corrupt);
    if (*ex_cmd) return cmd_examples(name, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
