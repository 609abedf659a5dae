#include "lvdelay/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

namespace lvd {

namespace {

double hermite(double v0, double m0, double v1, double m1, double h, double th) {
  const double t2 = th * th, t3 = t2 * th;
  return (2 * t3 - 3 * t2 + 1) * v0 + (t3 - 2 * t2 + th) * h * m0 +
         (-2 * t3 + 3 * t2) * v1 + (t3 - t2) * h * m1;
}

// One distinct linear chain: m stages driven by x_sig (or u_sig).
struct ChainSpec {
  bool on_u = false;
  int sig = 0;
  int m = 1;
  double gamma = 1.0;
  int offset = 0;  // into the chain block of the state vector
};

// Evaluation recipe for one convolution term.
struct Term {
  Kernel::Kind kind = Kernel::Kind::dirac;
  double tau = 0.0;
  int chain = -1;
  std::vector<double> qs, qw;  // table: abscissae and trapezoid * density
};

struct Engine {
  const SystemSpec& spec;
  const HistorySpec& hist;
  int n;
  double h;
  std::vector<ChainSpec> chains;
  std::vector<std::vector<Term>> TK;
  std::vector<Term> TG;
  int chain_dim = 0;

  // dense output built so far
  std::vector<double>* tg = nullptr;
  std::vector<std::vector<double>>*xv, *uv, *xd, *ud;

  Engine(const SystemSpec& s, const HistorySpec& hs, double step)
      : spec(s), hist(hs), n(s.n), h(step) {
    std::map<std::tuple<int, int, int, long long>, int> seen;  // dedupe key
    auto make_term = [&](const Kernel& k, bool on_u, int sig) {
      Term t;
      t.kind = k.kind();
      if (k.kind() == Kernel::Kind::dirac) {
        t.tau = k.tau();
      } else if (k.kind() == Kernel::Kind::gamma) {
        long long gbits;
        const double g = k.rate();
        static_assert(sizeof(gbits) == sizeof(g));
        std::memcpy(&gbits, &g, sizeof(g));
        const auto key = std::make_tuple(on_u ? 1 : 0, sig, k.order(), gbits);
        auto it = seen.find(key);
        if (it == seen.end()) {
          ChainSpec cs;
          cs.on_u = on_u;
          cs.sig = sig;
          cs.m = k.order();
          cs.gamma = k.rate();
          cs.offset = chain_dim;
          chain_dim += cs.m;
          it = seen.emplace(key, static_cast<int>(chains.size())).first;
          chains.push_back(cs);
        }
        t.chain = it->second;
      } else {
        const auto& nodes = k.nodes();
        const std::size_t m = nodes.size();
        std::vector<double> w(m, 0.0);
        for (std::size_t i = 0; i + 1 < m; ++i) {
          const double seg = 0.5 * (nodes[i + 1] - nodes[i]);
          w[i] += seg;
          w[i + 1] += seg;
        }
        for (std::size_t i = 0; i < m; ++i) {
          const double c = w[i] * k.density(nodes[i]);
          if (c != 0.0) {
            t.qs.push_back(nodes[i]);
            t.qw.push_back(c);
          }
        }
      }
      return t;
    };
    TK.resize(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j)
        TK[i].push_back(spec.a(i, j) != 0.0 ? make_term(spec.K[i][j], false, j)
                                            : Term{});
      TG.push_back(spec.c[i] > 0.0 ? make_term(spec.G[i], true, i) : Term{});
    }
  }

  int dim() const { return 2 * n + chain_dim; }

  double lookup(bool on_u, int idx, double tq, double stage_t,
                const VectorXd& z) const {
    if (tq <= 0.0) return on_u ? hist.u_at(idx, tq) : hist.x_at(idx, tq);
    const auto& vals = on_u ? (*uv)[idx] : (*xv)[idx];
    const auto& ders = on_u ? (*ud)[idx] : (*xd)[idx];
    const double t_last = tg->back();
    const double z_now = z[(on_u ? n : 0) + idx];
    if (tq >= t_last) {
      // inside the step being assembled: blend toward the stage value
      if (stage_t - t_last <= 1e-300) return z_now;
      const double th = (tq - t_last) / (stage_t - t_last);
      return vals.back() + th * (z_now - vals.back());
    }
    std::size_t k = static_cast<std::size_t>(tq / h);
    if (k + 1 >= vals.size()) k = vals.size() - 2;
    const double th = (tq - (*tg)[k]) / h;
    return hermite(vals[k], ders[k], vals[k + 1], ders[k + 1], h, th);
  }

  double conv(const Term& t, bool on_u, int idx, double stage_t,
              const VectorXd& z) const {
    switch (t.kind) {
      case Kernel::Kind::dirac:
        if (t.tau == 0.0) return z[(on_u ? n : 0) + idx];
        return lookup(on_u, idx, stage_t - t.tau, stage_t, z);
      case Kernel::Kind::gamma:
        return z[2 * n + chains[t.chain].offset + chains[t.chain].m - 1];
      case Kernel::Kind::table: {
        double s = 0.0;
        for (std::size_t k = 0; k < t.qs.size(); ++k)
          s += t.qw[k] * lookup(on_u, idx, stage_t - t.qs[k], stage_t, z);
        return s;
      }
    }
    return 0.0;
  }

  void deriv(double stage_t, const VectorXd& z, VectorXd& dz) const {
    for (int i = 0; i < n; ++i) {
      double rate = spec.b[i] - spec.mu[i] * z[i];
      for (int j = 0; j < n; ++j)
        if (spec.a(i, j) != 0.0)
          rate -= spec.a(i, j) * conv(TK[i][j], false, j, stage_t, z);
      if (spec.c[i] > 0.0) rate -= spec.c[i] * conv(TG[i], true, i, stage_t, z);
      dz[i] = z[i] * rate;
      dz[n + i] = -spec.e[i] * z[n + i] + spec.d[i] * z[i];
    }
    for (const ChainSpec& cs : chains) {
      const double sig = z[(cs.on_u ? n : 0) + cs.sig];
      const int base = 2 * n + cs.offset;
      dz[base] = cs.gamma * (sig - z[base]);
      for (int k = 1; k < cs.m; ++k)
        dz[base + k] = cs.gamma * (z[base + k - 1] - z[base + k]);
    }
  }
};

double erlang_history_quadrature(int stage, double gamma, bool on_u, int idx,
                                 const HistorySpec& hist, double h) {
  const Kernel k = Kernel::gamma(stage, gamma);
  const double T = k.horizon(1e-10);
  const double ds = std::min(h, 0.01);
  const int m = std::max(2, static_cast<int>(std::ceil(T / ds)));
  const double dd = T / m;
  double acc = 0.0;
  for (int j = 0; j <= m; ++j) {
    const double s = j * dd;
    const double f =
        k.density(s) * (on_u ? hist.u_at(idx, -s) : hist.x_at(idx, -s));
    acc += (j == 0 || j == m) ? 0.5 * f : f;
  }
  return acc * dd;
}

}  // namespace

double Trajectory::x_at(int i, double time) const {
  if (time <= 0.0) return history.x_at(i, time);
  const auto& v = x[static_cast<std::size_t>(i)];
  const auto& m = dx[static_cast<std::size_t>(i)];
  if (time >= t.back()) return v.back();
  std::size_t k = static_cast<std::size_t>(time / step);
  if (k + 1 >= v.size()) k = v.size() - 2;
  return hermite(v[k], m[k], v[k + 1], m[k + 1], step, (time - t[k]) / step);
}

double Trajectory::u_at(int i, double time) const {
  if (time <= 0.0) return history.u_at(i, time);
  const auto& v = u[static_cast<std::size_t>(i)];
  const auto& m = du[static_cast<std::size_t>(i)];
  if (time >= t.back()) return v.back();
  std::size_t k = static_cast<std::size_t>(time / step);
  if (k + 1 >= v.size()) k = v.size() - 2;
  return hermite(v[k], m[k], v[k + 1], m[k + 1], step, (time - t[k]) / step);
}

Trajectory integrate(const SystemSpec& spec, const HistorySpec& history,
                     double T_end, double h) {
  if (!(h > 0)) throw SpecError("integrate: step h must be > 0");
  if (!(T_end > 0)) throw SpecError("integrate: T_end must be > 0");
  history.validate(spec.n);
  const int n = spec.n;

  // step restriction from discrete delays, and history reach for
  // finite-horizon kernels
  double min_tau = std::numeric_limits<double>::infinity();
  double reach_x = 0.0, reach_u = 0.0;
  auto scan = [&](const Kernel& k, bool on_u) {
    if (k.kind() == Kernel::Kind::dirac && k.tau() > 0) {
      min_tau = std::min(min_tau, k.tau());
      (on_u ? reach_u : reach_x) = std::max(on_u ? reach_u : reach_x, k.tau());
    }
    if (k.kind() == Kernel::Kind::table)
      (on_u ? reach_u : reach_x) =
          std::max(on_u ? reach_u : reach_x, k.nodes().back());
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      if (spec.a(i, j) != 0.0) scan(spec.K[i][j], false);
    if (spec.c[i] > 0.0) scan(spec.G[i], true);
  }
  if (std::isfinite(min_tau) && h > min_tau / 4 + 1e-12)
    throw SpecError("integrate: h must not exceed a quarter of the smallest "
                    "discrete delay (" + std::to_string(min_tau) + ")");
  auto check_reach = [](const HistorySpec::Entry& en, double reach,
                        const std::string& name) {
    if (!en.is_constant && !en.times.empty() && en.times.front() > -reach + 1e-12)
      throw SimulationError("history buffer underflow: " + name +
                            " must be tabulated back to t = -" +
                            std::to_string(reach));
  };
  for (int i = 0; i < n; ++i) {
    check_reach(history.x[i], reach_x, "x[" + std::to_string(i + 1) + "]");
    check_reach(history.u[i], reach_u, "u[" + std::to_string(i + 1) + "]");
  }

  Engine eng(spec, history, h);

  Trajectory traj;
  traj.spec = spec;
  traj.history = history;
  traj.step = h;
  traj.x.assign(n, {});
  traj.u.assign(n, {});
  traj.dx.assign(n, {});
  traj.du.assign(n, {});
  eng.tg = &traj.t;
  eng.xv = &traj.x;
  eng.uv = &traj.u;
  eng.xd = &traj.dx;
  eng.ud = &traj.du;

  VectorXd z(eng.dim());
  for (int i = 0; i < n; ++i) {
    z[i] = history.x_at(i, 0.0);
    z[n + i] = history.u_at(i, 0.0);
  }
  for (const ChainSpec& cs : eng.chains)
    for (int k = 0; k < cs.m; ++k)
      z[2 * n + cs.offset + k] = erlang_history_quadrature(
          k + 1, cs.gamma, cs.on_u, cs.sig, history, h);

  const long long steps = static_cast<long long>(std::ceil(T_end / h - 1e-9));
  VectorXd k1(eng.dim()), k2(eng.dim()), k3(eng.dim()), k4(eng.dim()),
      zs(eng.dim());

  auto push_point = [&](double tt, const VectorXd& state, const VectorXd& der) {
    traj.t.push_back(tt);
    for (int i = 0; i < n; ++i) {
      traj.x[i].push_back(state[i]);
      traj.u[i].push_back(state[n + i]);
      traj.dx[i].push_back(der[i]);
      traj.du[i].push_back(der[n + i]);
    }
  };

  eng.deriv(0.0, z, k1);
  push_point(0.0, z, k1);

  for (long long s = 0; s < steps; ++s) {
    const double t0 = static_cast<double>(s) * h;
    // k1 already holds deriv(t0, z)
    zs = z + (0.5 * h) * k1;
    eng.deriv(t0 + 0.5 * h, zs, k2);
    zs = z + (0.5 * h) * k2;
    eng.deriv(t0 + 0.5 * h, zs, k3);
    zs = z + h * k3;
    eng.deriv(t0 + h, zs, k4);
    z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    for (int i = 0; i < n; ++i) {
      if (!(z[i] > 0.0) || !(z[n + i] > 0.0) || !std::isfinite(z[i])) {
        std::ostringstream os;
        os << "integrate: positivity lost for " << (z[i] > 0.0 ? "u_" : "x_")
           << (i + 1) << " at t = " << t0 + h
           << "; reduce the step size or check boundedness of the system";
        throw SimulationError(os.str());
      }
    }
    eng.deriv(t0 + h, z, k1);  // derivative at the accepted point
    push_point(t0 + h, z, k1);
  }
  return traj;
}

ConvergenceReport convergence_check(const Trajectory& traj,
                                    const EquilibriumCandidate& eq, double atol) {
  const int n = traj.spec.n;
  const std::size_t N = traj.t.size();
  const std::size_t w0 = (3 * N) / 4;
  ConvergenceReport rep;
  rep.window_start = traj.t[w0];
  rep.residual_x.resize(n);
  rep.residual_u.resize(n);

  bool conv = true;
  rep.sandwich_ok = true;
  for (int i = 0; i < n; ++i) {
    double dev = 0.0;
    double min_x = traj.x[i][w0], max_x = min_x;
    double min_u = traj.u[i][w0], max_u = min_u;
    for (std::size_t k = w0; k < N; ++k) {
      dev = std::max(dev, std::abs(traj.x[i][k] - eq.x_star[i]));
      dev = std::max(dev, std::abs(traj.u[i][k] - eq.u_star[i]));
      min_x = std::min(min_x, traj.x[i][k]);
      max_x = std::max(max_x, traj.x[i][k]);
      min_u = std::min(min_u, traj.u[i][k]);
      max_u = std::max(max_u, traj.u[i][k]);
    }
    if (dev > atol) conv = false;
    rep.residual_x[i] = std::abs(traj.x[i].back() - eq.x_star[i]);
    rep.residual_u[i] = std::abs(traj.u[i].back() - eq.u_star[i]);

    const double r = traj.spec.e[i] / traj.spec.d[i];
    const double tol = 0.05 * (max_x - min_x) + 1e-6 * (1.0 + max_x);
    if (min_x > r * min_u + tol || r * max_u > max_x + tol)
      rep.sandwich_ok = false;

    if (eq.x_star[i] <= 0.0) {
      // least-squares slope of log x_i over the window
      double st = 0, sy = 0, stt = 0, sty = 0;
      const double m = static_cast<double>(N - w0);
      for (std::size_t k = w0; k < N; ++k) {
        const double y = std::log(std::max(traj.x[i][k], 1e-300));
        st += traj.t[k];
        sy += y;
        stt += traj.t[k] * traj.t[k];
        sty += traj.t[k] * y;
      }
      const double slope = (m * sty - st * sy) / (m * stt - st * st);
      rep.extinction_rates[i] = -slope;
    }
  }
  rep.converged = conv;
  return rep;
}

BoundednessReport boundedness_check(const Trajectory& traj) {
  const int n = traj.spec.n;
  const std::size_t N = traj.t.size();
  const std::size_t w0 = (3 * N) / 4;
  BoundednessReport rep;
  rep.sup_x.resize(n);
  rep.sup_u.resize(n);
  rep.bounded = true;
  for (int i = 0; i < n; ++i) {
    double sx = 0, su = 0, sx_early = 0, su_early = 0;
    for (std::size_t k = 0; k < N; ++k) {
      sx = std::max(sx, traj.x[i][k]);
      su = std::max(su, traj.u[i][k]);
      if (k < w0) {
        sx_early = sx;
        su_early = su;
      }
    }
    rep.sup_x[i] = sx;
    rep.sup_u[i] = su;
    if (sx > 1.01 * sx_early + 1e-12 || su > 1.01 * su_early + 1e-12)
      rep.bounded = false;
  }
  return rep;
}

}  // namespace lvd
