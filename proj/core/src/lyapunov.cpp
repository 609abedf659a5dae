#include "lvdelay/lyapunov.hpp"

#include <algorithm>
#include <cmath>

namespace lvd {

namespace {

double g_div(double x) { return x - 1.0 - std::log(x); }

double G_div(double x, double xs) {
  if (xs > 0.0) return xs * g_div(x / xs);
  return x;
}

// Quadrature nodes (s, weight * density) for the outer kernel integral,
// using the same truncation rules as the integrator: dirac collapses to a
// point, gamma is sampled on the trajectory grid up to the tail-mass and
// moment-tail horizon, tables use their own node grid.
struct KernelQuad {
  std::vector<double> s, w;
};

KernelQuad kernel_quad(const Kernel& k, double h) {
  KernelQuad q;
  switch (k.kind()) {
    case Kernel::Kind::dirac:
      q.s.push_back(k.tau());
      q.w.push_back(1.0);
      break;
    case Kernel::Kind::gamma: {
      const double S = k.horizon(1e-8, true);
      const int m = std::max(2, static_cast<int>(std::ceil(S / h)));
      for (int j = 0; j <= m; ++j) {
        const double s = j * (S / m);
        q.s.push_back(s);
        q.w.push_back(((j == 0 || j == m) ? 0.5 : 1.0) * (S / m) * k.density(s));
      }
      break;
    }
    case Kernel::Kind::table: {
      const auto& nodes = k.nodes();
      std::vector<double> tw(nodes.size(), 0.0);
      for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
        const double seg = 0.5 * (nodes[j + 1] - nodes[j]);
        tw[j] += seg;
        tw[j + 1] += seg;
      }
      for (std::size_t j = 0; j < nodes.size(); ++j) {
        q.s.push_back(nodes[j]);
        q.w.push_back(tw[j] * k.density(nodes[j]));
      }
      break;
    }
  }
  return q;
}

// A scalar series on the extended uniform grid te = (e - back) * h,
// covering enough history for every kernel horizon, with linear
// interpolation for off-grid sample times.
struct Series {
  double h = 0.0;
  std::size_t back = 0;
  std::vector<double> v;

  double at(double time) const {
    const double pos = time / h + static_cast<double>(back);
    if (pos <= 0.0) return v.front();
    if (pos >= static_cast<double>(v.size() - 1)) return v.back();
    const std::size_t k = static_cast<std::size_t>(pos);
    const double th = pos - static_cast<double>(k);
    return v[k] + th * (v[k + 1] - v[k]);
  }
};

Series cumulative(const Series& s) {
  Series c;
  c.h = s.h;
  c.back = s.back;
  c.v.resize(s.v.size());
  c.v[0] = 0.0;
  for (std::size_t k = 1; k < s.v.size(); ++k)
    c.v[k] = c.v[k - 1] + 0.5 * s.h * (s.v[k] + s.v[k - 1]);
  return c;
}

double max_kernel_horizon(const SystemSpec& spec) {
  double S = 0.0;
  auto scan = [&](const Kernel& k) {
    switch (k.kind()) {
      case Kernel::Kind::dirac: S = std::max(S, k.tau()); break;
      case Kernel::Kind::gamma: S = std::max(S, k.horizon(1e-8, true)); break;
      case Kernel::Kind::table: S = std::max(S, k.nodes().back()); break;
    }
  };
  for (int i = 0; i < spec.n; ++i) {
    for (int j = 0; j < spec.n; ++j)
      if (spec.a(i, j) != 0.0) scan(spec.K[i][j]);
    if (spec.c[i] > 0.0) scan(spec.G[i]);
  }
  return S;
}

Series sample(const Trajectory& traj, bool on_u, int idx, double scale,
              std::size_t back) {
  Series s;
  s.h = traj.step;
  s.back = back;
  const std::size_t NE = back + traj.t.size();
  s.v.resize(NE);
  for (std::size_t e = 0; e < NE; ++e) {
    const double te = (static_cast<double>(e) - static_cast<double>(back)) * s.h;
    const double raw = on_u ? traj.u_at(idx, te) : traj.x_at(idx, te);
    s.v[e] = raw * scale;
  }
  return s;
}

double fit_negative_slope(const std::vector<double>& t,
                          const std::vector<double>& y, std::size_t from) {
  double st = 0, sy = 0, stt = 0, sty = 0;
  const double m = static_cast<double>(t.size() - from);
  for (std::size_t k = from; k < t.size(); ++k) {
    st += t[k];
    sy += y[k];
    stt += t[k] * t[k];
    sty += t[k] * y[k];
  }
  return -(m * sty - st * sy) / (m * stt - st * st);
}

}  // namespace

LyapunovTrace lyapunov_trace(const Trajectory& traj,
                             const EquilibriumCandidate& eq,
                             const EtaQCert& cert, int stride) {
  const SystemSpec& spec = traj.spec;
  const int n = spec.n;
  if (stride < 1) throw SpecError("lyapunov_trace: stride must be >= 1");
  if (!(cert.epsilon > 0)) throw SpecError("lyapunov_trace: certificate epsilon must be positive");

  std::vector<int> I = cert.support;
  const bool reduced = !I.empty();
  if (!reduced)
    for (int i = 0; i < n; ++i) I.push_back(i);
  const int p = static_cast<int>(I.size());
  if (cert.eta.size() != p || cert.q.size() != p)
    throw SpecError("lyapunov_trace: certificate size does not match its support");

  // interaction magnitudes in the certificate's (rescaled) coordinates
  MatrixXd amod = reduced ? spec.a : modified_interactions(spec.a, eq.positive_support());

  const double h = traj.step;
  const std::size_t back =
      static_cast<std::size_t>(std::ceil(max_kernel_horizon(spec) / h)) + 2;
  const std::size_t N = traj.t.size();

  // per-certificate-species scaled series and their antiderivatives
  std::vector<Series> xbar(p), W(p), ubar(p), Q1(p), Q2(p);
  VectorXd xstar_bar(p), ustar_bar(p);
  for (int k = 0; k < p; ++k) {
    const int i = I[k];
    xbar[k] = sample(traj, false, i, 1.0 / cert.q[k], back);
    ubar[k] = sample(traj, true, i, 1.0 / cert.q[k], back);
    xstar_bar[k] = eq.x_star[i] / cert.q[k];
    ustar_bar[k] = eq.u_star[i] / cert.q[k];
    Series dev = xbar[k];
    for (double& v : dev.v) v = (v - xstar_bar[k]) * (v - xstar_bar[k]);
    W[k] = cumulative(dev);
    Q1[k] = cumulative(ubar[k]);
    Series u2 = ubar[k];
    for (double& v : u2.v) v *= v;
    Q2[k] = cumulative(u2);
  }

  // quadrature recipes
  std::vector<std::vector<KernelQuad>> qk(p, std::vector<KernelQuad>(p));
  std::vector<KernelQuad> qg(p);
  for (int r = 0; r < p; ++r) {
    for (int s = 0; s < p; ++s)
      if (amod(I[r], I[s]) != 0.0) qk[r][s] = kernel_quad(spec.K[I[r]][I[s]], h);
    if (spec.c[I[r]] > 0.0) qg[r] = kernel_quad(spec.G[I[r]], h);
  }

  // off-support forcing for reduced certificates
  std::vector<int> off;
  std::vector<Series> xoff_sq;
  std::vector<std::vector<KernelQuad>> qoff(p);
  if (reduced) {
    std::vector<bool> in(n, false);
    for (int i : I) in[i] = true;
    for (int j = 0; j < n; ++j)
      if (!in[j]) off.push_back(j);
    for (int j : off) {
      Series s = sample(traj, false, j, 1.0, back);
      for (double& v : s.v) v *= v;
      xoff_sq.push_back(std::move(s));
    }
    for (int r = 0; r < p; ++r) {
      qoff[r].resize(off.size());
      for (std::size_t s = 0; s < off.size(); ++s)
        if (spec.a(I[r], off[s]) != 0.0)
          qoff[r][s] = kernel_quad(spec.K[I[r]][off[s]], h);
    }
  }

  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < N; k += static_cast<std::size_t>(stride))
    idx.push_back(k);
  if (idx.back() != N - 1) idx.push_back(N - 1);
  const std::size_t NE = idx.size();

  LyapunovTrace out;
  out.t.resize(NE);
  out.U1.resize(NE);
  out.U2.resize(NE);
  out.U.resize(NE);
  out.g_terms.assign(p, std::vector<double>(NE));
  if (reduced) out.h_forcing.resize(NE);

  for (std::size_t k = 0; k < NE; ++k) {
    const double te = traj.t[idx[k]];
    out.t[k] = te;
    double u1 = 0.0, u2 = 0.0, hf = 0.0;
    for (int r = 0; r < p; ++r) {
      const double xb = xbar[r].at(te);
      const double ub = ubar[r].at(te);
      const double gterm = G_div(xb, xstar_bar[r]);
      out.g_terms[r][k] = gterm;
      const double cq = spec.c[I[r]] * cert.q[r];  // rescaled control gain
      u1 += cert.eta[r] *
            (gterm + (cq / spec.d[I[r]]) * 0.5 * (ub - ustar_bar[r]) * (ub - ustar_bar[r]));

      for (int s = 0; s < p; ++s) {
        const double coeff = std::abs(amod(I[r], I[s])) * cert.q[s];
        if (coeff == 0.0) continue;
        double inner = 0.0;
        const double Wt = W[s].at(te);
        for (std::size_t m = 0; m < qk[r][s].s.size(); ++m)
          inner += qk[r][s].w[m] * (Wt - W[s].at(te - qk[r][s].s[m]));
        u2 += cert.eta[r] * 0.5 * coeff * inner;
      }
      if (cq > 0.0) {
        double inner = 0.0;
        const double q1t = Q1[r].at(te), q2t = Q2[r].at(te);
        for (std::size_t m = 0; m < qg[r].s.size(); ++m) {
          const double s = qg[r].s[m];
          const double block = (q2t - Q2[r].at(te - s)) -
                               2.0 * ub * (q1t - Q1[r].at(te - s)) + s * ub * ub;
          inner += qg[r].w[m] * block;
        }
        u2 += cert.eta[r] * cq / (2.0 * cert.epsilon) * inner;
      }
      if (reduced) {
        for (std::size_t s = 0; s < off.size(); ++s) {
          const double coeff = std::abs(spec.a(I[r], off[s]));
          if (coeff == 0.0) continue;
          double convv = 0.0;
          for (std::size_t m = 0; m < qoff[r][s].s.size(); ++m)
            convv += qoff[r][s].w[m] * xoff_sq[s].at(te - qoff[r][s].s[m]);
          hf += cert.eta[r] * 0.5 * coeff * convv / cert.epsilon;
        }
      }
    }
    out.U1[k] = u1;
    u2 = std::max(0.0, u2);  // clamp quadrature roundoff; U2 >= 0
    out.U2[k] = u2;
    out.U[k] = u1 + u2;
    if (reduced) out.h_forcing[k] = hf;
  }
  return out;
}

VpqTrace vpq_trace(const Trajectory& traj, const AlphaCert& cert, int stride) {
  if (stride < 1) throw SpecError("vpq_trace: stride must be >= 1");
  const SystemSpec& spec = traj.spec;
  const int n = spec.n;
  const int p = static_cast<int>(cert.support.size());
  if (cert.alpha.size() != p)
    throw SpecError("vpq_trace: alpha length does not match the support");

  const double h = traj.step;
  const std::size_t back =
      static_cast<std::size_t>(std::ceil(max_kernel_horizon(spec) / h)) + 2;
  const std::size_t N = traj.t.size();

  std::vector<Series> X(n), Uc(n);
  for (int j = 0; j < n; ++j) {
    X[j] = cumulative(sample(traj, false, j, 1.0, back));
    Uc[j] = cumulative(sample(traj, true, j, 1.0, back));
  }

  // rows that contribute the exponential bookkeeping: the support species
  // (weight +alpha_i) and q itself (weight -1)
  std::vector<int> rows = cert.support;
  rows.push_back(cert.q);
  std::vector<double> wt;
  for (int i = 0; i < p; ++i) wt.push_back(cert.alpha[i]);
  wt.push_back(-1.0);

  std::vector<std::vector<KernelQuad>> qk(rows.size(), std::vector<KernelQuad>(n));
  std::vector<KernelQuad> qg(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int j = 0; j < n; ++j)
      if (spec.a(rows[r], j) != 0.0) qk[r][j] = kernel_quad(spec.K[rows[r]][j], h);
    if (spec.c[rows[r]] > 0.0) qg[r] = kernel_quad(spec.G[rows[r]], h);
  }

  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < N; k += static_cast<std::size_t>(stride))
    idx.push_back(k);
  if (idx.back() != N - 1) idx.push_back(N - 1);
  const std::size_t NE = idx.size();

  VpqTrace out;
  out.t.resize(NE);
  out.V.resize(NE);
  std::vector<double> logV(NE);

  for (std::size_t k = 0; k < NE; ++k) {
    const double te = traj.t[idx[k]];
    out.t[k] = te;
    double lv = std::log(std::max(traj.x_at(cert.q, te), 1e-300));
    for (int i = 0; i < p; ++i)
      lv -= cert.alpha[i] * std::log(std::max(traj.x_at(cert.support[i], te), 1e-300));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const int i = rows[r];
      double term = spec.c[i] / spec.e[i] * traj.u_at(i, te);
      for (int j = 0; j < n; ++j) {
        if (spec.a(i, j) == 0.0) continue;
        double ik = 0.0;
        const double Xt = X[j].at(te);
        for (std::size_t m = 0; m < qk[r][j].s.size(); ++m)
          ik += qk[r][j].w[m] * (Xt - X[j].at(te - qk[r][j].s[m]));
        term += spec.a(i, j) * ik;
      }
      if (spec.c[i] > 0.0) {
        double ig = 0.0;
        const double Ut = Uc[i].at(te);
        for (std::size_t m = 0; m < qg[r].s.size(); ++m)
          ig += qg[r].w[m] * (Ut - Uc[i].at(te - qg[r].s[m]));
        term += spec.c[i] * ig;
      }
      lv += wt[r] * term;
    }
    logV[k] = lv;
    out.V[k] = std::exp(lv);
  }
  out.fitted_rate = fit_negative_slope(out.t, logV, NE / 2);
  return out;
}

}  // namespace lvd
