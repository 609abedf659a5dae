#include "lvdelay/kernel.hpp"

#include <algorithm>
#include <cmath>

namespace lvd {

namespace {

// Regularized upper incomplete gamma Q(m, x) for integer m >= 1:
// Q(m, x) = e^-x sum_{k=0}^{m-1} x^k / k!
double upper_gamma_q(int m, double x) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < m; ++k) {
    term *= x / k;
    sum += term;
  }
  return std::exp(-x) * sum;
}

double trapezoid(const std::vector<double>& s, const std::vector<double>& f) {
  double acc = 0.0;
  for (std::size_t k = 1; k < s.size(); ++k)
    acc += 0.5 * (f[k - 1] + f[k]) * (s[k] - s[k - 1]);
  return acc;
}

}  // namespace

Kernel Kernel::dirac(double tau) {
  if (tau < 0) throw SpecError("kernel: dirac tau must be >= 0");
  Kernel k;
  k.kind_ = Kind::dirac;
  k.tau_ = tau;
  return k;
}

Kernel Kernel::gamma(int order, double rate) {
  if (order < 1) throw SpecError("kernel: gamma order m must be a positive integer");
  if (!(rate > 0)) throw SpecError("kernel: gamma rate must be > 0");
  Kernel k;
  k.kind_ = Kind::gamma;
  k.order_ = order;
  k.rate_ = rate;
  return k;
}

Kernel Kernel::table(std::vector<double> nodes, std::vector<double> weights) {
  if (nodes.size() < 2 || nodes.size() != weights.size())
    throw SpecError("kernel: table needs matching nodes/weights arrays of length >= 2");
  if (nodes.front() < 0) throw SpecError("kernel: table nodes must be >= 0");
  for (std::size_t k = 1; k < nodes.size(); ++k)
    if (!(nodes[k] > nodes[k - 1]))
      throw SpecError("kernel: table nodes must be strictly increasing");
  for (double w : weights)
    if (w < 0) throw SpecError("kernel: table weights must be >= 0");

  const double raw_mass = trapezoid(nodes, weights);
  Kernel k;
  k.kind_ = Kind::table;
  if (std::abs(raw_mass - 1.0) > 1e-6)
    throw SpecError("kernel: table mass " + std::to_string(raw_mass) +
                    " deviates from 1 by more than 1e-6");
  if (std::abs(raw_mass - 1.0) > 1e-12) {
    for (double& w : weights) w /= raw_mass;
    k.renormalized_ = true;
  }
  k.nodes_ = std::move(nodes);
  k.weights_ = std::move(weights);
  return k;
}

double Kernel::mass() const {
  switch (kind_) {
    case Kind::dirac:
    case Kind::gamma:
      return 1.0;
    case Kind::table:
      return trapezoid(nodes_, weights_);
  }
  return 1.0;
}

double Kernel::first_moment() const {
  switch (kind_) {
    case Kind::dirac:
      return tau_;
    case Kind::gamma:
      return static_cast<double>(order_) / rate_;
    case Kind::table: {
      std::vector<double> f(nodes_.size());
      for (std::size_t k = 0; k < nodes_.size(); ++k) f[k] = nodes_[k] * weights_[k];
      return trapezoid(nodes_, f);
    }
  }
  return 0.0;
}

double Kernel::tail_mass(double T) const {
  if (T <= 0) return mass() > 0 ? 1.0 : 0.0;
  switch (kind_) {
    case Kind::dirac:
      return T <= tau_ ? 1.0 : 0.0;
    case Kind::gamma:
      return upper_gamma_q(order_, rate_ * T);
    case Kind::table: {
      if (T >= nodes_.back()) return 0.0;
      double acc = 0.0;
      for (std::size_t k = 1; k < nodes_.size(); ++k) {
        const double s0 = nodes_[k - 1], s1 = nodes_[k];
        if (s1 <= T) continue;
        if (s0 >= T) {
          acc += 0.5 * (weights_[k - 1] + weights_[k]) * (s1 - s0);
        } else {
          // partial segment [T, s1] of a linear density
          const double wT = weights_[k - 1] +
                            (weights_[k] - weights_[k - 1]) * (T - s0) / (s1 - s0);
          acc += 0.5 * (wT + weights_[k]) * (s1 - T);
        }
      }
      return acc;
    }
  }
  return 0.0;
}

double Kernel::moment_tail(double T) const {
  if (T <= 0) return first_moment();
  switch (kind_) {
    case Kind::dirac:
      return T <= tau_ ? tau_ : 0.0;
    case Kind::gamma:
      // int_T^inf s Erlang(m, rate) ds = (m/rate) Q(m+1, rate T)
      return (static_cast<double>(order_) / rate_) * upper_gamma_q(order_ + 1, rate_ * T);
    case Kind::table: {
      if (T >= nodes_.back()) return 0.0;
      double acc = 0.0;
      for (std::size_t k = 1; k < nodes_.size(); ++k) {
        const double s0 = nodes_[k - 1], s1 = nodes_[k];
        if (s1 <= T) continue;
        const double a = std::max(s0, T);
        const double wa = weights_[k - 1] +
                          (weights_[k] - weights_[k - 1]) * (a - s0) / (s1 - s0);
        acc += 0.5 * (a * wa + s1 * weights_[k]) * (s1 - a);
      }
      return acc;
    }
  }
  return 0.0;
}

double Kernel::horizon(double eps, bool with_moment) const {
  switch (kind_) {
    case Kind::dirac:
      return tau_;
    case Kind::table:
      return nodes_.back();
    case Kind::gamma: {
      double lo = 0.0, hi = 1.0;
      auto ok = [&](double T) {
        return tail_mass(T) <= eps && (!with_moment || moment_tail(T) <= eps);
      };
      while (!ok(hi)) hi *= 2.0;
      for (int it = 0; it < 200 && hi - lo > 1e-9 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? hi : lo) = mid;
      }
      return hi;
    }
  }
  return 0.0;
}

double Kernel::density(double s) const {
  switch (kind_) {
    case Kind::dirac:
      throw SpecError("kernel: dirac has no pointwise density");
    case Kind::gamma: {
      if (s < 0) return 0.0;
      if (order_ == 1) return rate_ * std::exp(-rate_ * s);
      double fact = 1.0;
      for (int k = 2; k <= order_ - 1; ++k) fact *= k;
      return std::pow(rate_, order_) * std::pow(s, order_ - 1) *
             std::exp(-rate_ * s) / fact;
    }
    case Kind::table: {
      if (s < nodes_.front() || s > nodes_.back()) return 0.0;
      const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), s);
      const std::size_t k = std::min<std::size_t>(nodes_.size() - 1,
                                                  it - nodes_.begin());
      const double s0 = nodes_[k - 1], s1 = nodes_[k];
      return weights_[k - 1] + (weights_[k] - weights_[k - 1]) * (s - s0) / (s1 - s0);
    }
  }
  return 0.0;
}

}  // namespace lvd
