#include "lvdelay/equilibria.hpp"

#include <algorithm>
#include <cmath>

namespace lvd {

namespace {

// (d_ij lambda_i + a_ij) restricted to the support, hatted diagonal.
MatrixXd support_system(const SystemSpec& spec, const std::vector<int>& sup) {
  const VectorXd lam = spec.lambda();
  const int p = static_cast<int>(sup.size());
  MatrixXd B(p, p);
  for (int r = 0; r < p; ++r)
    for (int c = 0; c < p; ++c)
      B(r, c) = (r == c ? lam[sup[r]] : 0.0) + spec.a(sup[r], sup[c]);
  return B;
}

}  // namespace

std::vector<int> EquilibriumCandidate::positive_support(double tol) const {
  std::vector<int> out;
  for (int i : support)
    if (x_star[i] > tol) out.push_back(i);
  return out;
}

CramerTable cramer_table(const SystemSpec& spec, const std::vector<int>& support) {
  if (support.empty()) throw SpecError("cramer_table: support must be non-empty");
  const int p = static_cast<int>(support.size());
  const int n = spec.n;
  const MatrixXd B = support_system(spec, support);

  CramerTable t;
  t.support = support;
  t.R0 = det_scaled(B).det;
  t.Ri.resize(p);
  for (int i = 0; i < p; ++i) {
    MatrixXd Bi = B;
    for (int r = 0; r < p; ++r) Bi(r, i) = spec.b[support[r]];
    t.Ri[i] = det_scaled(Bi).det;
  }

  std::vector<bool> in(n, false);
  for (int s : support) in[s] = true;
  for (int q = 0; q < n; ++q) {
    if (in[q]) continue;
    MatrixXd Bq(p + 1, p + 1);
    Bq.block(0, 0, p, p) = B;
    for (int r = 0; r < p; ++r) {
      Bq(r, p) = spec.b[support[r]];
      Bq(p, r) = spec.a(q, support[r]);
    }
    Bq(p, p) = spec.b[q];
    const double rq = det_scaled(Bq).det;
    t.Rq[q] = rq;
    // identity: Rq = b_q R0 - sum_j a_qj Rj
    double rhs = spec.b[q] * t.R0;
    for (int j = 0; j < p; ++j) rhs -= spec.a(q, support[j]) * t.Ri[j];
    const double scale = std::max({1.0, std::abs(rq), std::abs(rhs)});
    t.identity_error = std::max(t.identity_error, std::abs(rq - rhs) / scale);
  }
  return t;
}

std::vector<EquilibriumCandidate> enumerate_equilibria(const SystemSpec& spec) {
  const int n = spec.n;
  if (n > 16) throw SpecError("enumerate_equilibria: dimension exceeds bound 16");
  const VectorXd lam = spec.lambda();
  MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = (i == j ? lam[i] : 0.0) + spec.a(i, j);

  std::vector<EquilibriumCandidate> out;

  auto finish = [&](EquilibriumCandidate& c) {
    c.u_star = spec.d.array() * c.x_star.array() / spec.e.array();
    const VectorXd mx = M * c.x_star;
    const double tol =
        1e-9 * (1.0 + spec.b.cwiseAbs().maxCoeff() + mx.cwiseAbs().maxCoeff());
    std::vector<bool> in(n, false);
    for (int s : c.support) in[s] = true;
    bool sat = true;
    for (int q = 0; q < n; ++q) {
      if (in[q]) {
        if (c.x_star[q] < -tol) sat = false;
        if (std::abs(c.x_star[q]) <= tol) c.degenerate = true;
      } else {
        const double margin = mx[q] - spec.b[q];
        c.margins[q] = margin;
        if (margin < -tol) sat = false;
        if (std::abs(margin) <= tol) c.degenerate = true;
      }
    }
    c.saturated = sat;
    out.push_back(c);
  };

  // trivial candidate (empty support): margins are -b_q
  {
    EquilibriumCandidate c;
    c.x_star = VectorXd::Zero(n);
    finish(c);
  }

  for_each_subset(n, [&](const std::vector<int>& sup) {
    EquilibriumCandidate c;
    c.support = sup;
    const MatrixXd B = support_system(spec, sup);
    const DetResult dr = det_scaled(B);
    if (std::abs(dr.det) <= det_tol(dr)) {
      c.singular = true;
      c.x_star = VectorXd::Zero(n);
      c.u_star = VectorXd::Zero(n);
      out.push_back(c);
      return;
    }
    VectorXd bs(sup.size());
    for (std::size_t r = 0; r < sup.size(); ++r) bs[r] = spec.b[sup[r]];
    const VectorXd xs = B.partialPivLu().solve(bs);
    c.x_star = VectorXd::Zero(n);
    for (std::size_t r = 0; r < sup.size(); ++r) c.x_star[sup[r]] = xs[r];
    finish(c);
  });
  return out;
}

SaturatedResult saturated_equilibrium(const SystemSpec& spec) {
  SaturatedResult res;
  const StructureMatrices m = build_matrices(spec);
  res.m_verdict = is_P_matrix(m.M);
  res.uniqueness_guaranteed = res.m_verdict.cls == MatrixClass::P_matrix;

  const auto all = enumerate_equilibria(spec);
  // Group saturated candidates by their x* point; keep the smallest
  // support as representative (coincident degenerate supports describe
  // the same equilibrium).
  std::vector<EquilibriumCandidate> groups;
  for (const auto& c : all) {
    if (c.singular || !c.saturated) continue;
    bool merged = false;
    for (auto& g : groups) {
      if ((g.x_star - c.x_star).cwiseAbs().maxCoeff() <= 1e-9) {
        if (c.support.size() < g.support.size()) g = c;
        merged = true;
        break;
      }
    }
    if (!merged) groups.push_back(c);
  }

  res.candidates = groups;
  if (groups.empty()) {
    res.status = SaturatedResult::Status::none;
  } else if (groups.size() == 1) {
    res.status = SaturatedResult::Status::unique;
  } else {
    res.status = SaturatedResult::Status::multiple;
  }
  return res;
}

}  // namespace lvd
