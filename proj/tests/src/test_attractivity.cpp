#include <doctest.h>

#include <lvdelay/attractivity.hpp>
#include <lvdelay/config.hpp>
#include <lvdelay/fixtures.hpp>

using namespace lvd;

TEST_CASE("fixture verdicts") {
  auto id = [](const char* name) {
    return verdict(fixture_spec(name).spec).theorem;
  };
  CHECK(id("ex2_1") == TheoremId::T3_2_positive);
  CHECK(id("ex2_2") == TheoremId::none_applicable);
  CHECK(id("ex5_1_uncontrolled") == TheoremId::none_applicable);
  CHECK(id("ex5_1_controlled") == TheoremId::T3_1);
  CHECK(id("ex5_2_a1") == TheoremId::T4_3);
  CHECK(id("ex5_2_controlled") == TheoremId::T4_3);
  CHECK(id("ex5_3_uncontrolled") == TheoremId::T3_1);
  CHECK(id("ex5_3_controlled") == TheoremId::T3_2_positive);
}

TEST_CASE("dominance certificate is independent of the control gain") {
  for (const double gain : {0.1, 0.3, 0.6, 2.0, 10.0}) {
    SystemSpec spec = fixture_spec("ex5_1_uncontrolled").spec;
    spec.c[0] = gain;  // d = e = 1, so c1 d1/e1 = gain
    const AttractivityVerdict v = verdict(spec);
    CHECK(v.theorem == TheoremId::T3_1);
    REQUIRE(v.equilibrium.has_value());
    CHECK(v.equilibrium->x_star[0] ==
          doctest::Approx(1.0 / (1.5 + gain)).epsilon(1e-12));
    CHECK(v.equilibrium->x_star[1] == 0.0);
    CHECK(v.globally_attractive);
    REQUIRE(v.eta_q_cert.has_value());
    CHECK(v.eta_q_cert->epsilon > 0.0);
    CHECK(v.eta_q_cert->epsilon <= 1.0);
    CHECK(v.eta_q_cert->slack.minCoeff() > 0.0);
  }
}

TEST_CASE("extinction certificate for the competition fixture") {
  const SystemSpec spec = fixture_spec("ex5_2_a1").spec;
  const auto cert = find_alpha(spec, {0}, 1);
  REQUIRE(cert.has_value());
  CHECK(cert->q == 1);
  CHECK(cert->alpha.size() == 1);
  CHECK(cert->alpha[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(cert->eta_rate == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  // constraint margins: first row is the strict rate row
  CHECK(cert->slacks[0] == doctest::Approx(cert->eta_rate).epsilon(1e-9));

  const AttractivityVerdict v = verdict(spec);
  REQUIRE(v.theorem == TheoremId::T4_3);
  REQUIRE(v.cascade_rates.count(1) == 1);
  CHECK(v.cascade_rates.at(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(v.globally_attractive);
}

TEST_CASE("controlled recovery has a positive equilibrium") {
  const SystemSpec spec = fixture_spec("ex5_3_controlled").spec;
  const AttractivityVerdict v = verdict(spec);
  REQUIRE(v.theorem == TheoremId::T3_2_positive);
  REQUIRE(v.equilibrium.has_value());
  // x_2* = alpha_1 / (3 det M) with alpha_1 = alpha_2 = 1/2
  MatrixXd M(2, 2);
  M << 2.0, 0.125, 0.5, 2.0;
  const double expected = 0.5 / (3.0 * M.determinant());
  CHECK(v.equilibrium->x_star[1] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("trivial equilibrium route") {
  // all growth rates negative, weak interactions: everything dies out
  SystemSpec spec = fixture_spec("ex2_1").spec;
  spec.b = VectorXd::Constant(2, -1.0);
  spec.validate();
  const AttractivityVerdict v = verdict(spec);
  CHECK(v.theorem == TheoremId::T2_2i_trivial);
  REQUIRE(v.equilibrium.has_value());
  CHECK(v.equilibrium->x_star.isZero());
  CHECK(v.globally_attractive);
}

TEST_CASE("cascade route with a dominant survivor") {
  // species 1 logistic and dominant; species 2 and 3 suppressed by it
  SystemSpec spec;
  spec.n = 3;
  spec.b = VectorXd(3);
  spec.b << 1.0, 0.2, 0.1;
  spec.mu = VectorXd::Constant(3, 1.0);
  spec.a = MatrixXd::Zero(3, 3);
  spec.a(1, 0) = 1.0;  // b_2 - a_21 x_1* = 0.2 - 1.0 < 0
  spec.a(2, 0) = 0.8;
  spec.a(2, 1) = -0.1;
  spec.c = VectorXd::Zero(3);
  spec.d = VectorXd::Constant(3, 1.0);
  spec.e = VectorXd::Constant(3, 1.0);
  spec.K.assign(3, std::vector<Kernel>(3, Kernel::dirac(1.0)));
  spec.G.assign(3, Kernel::dirac(1.0));
  spec.validate();
  const auto v = check_theorem_4_4(spec);
  REQUIRE(v.has_value());
  CHECK(v->theorem == TheoremId::T4_4_cascade);
  CHECK(v->cascade_rates.size() == 2);
  // survivor settles at b_1 / (lambda_1 + a_11) = 1
  REQUIRE(v->equilibrium.has_value());
  CHECK(v->equilibrium->x_star[0] == doctest::Approx(1.0));
  CHECK(v->globally_attractive);  // mu_1 > |a_11| = 0
}

TEST_CASE("time-varying coefficients collapse to their envelope") {
  NonAutonomousBounds nb;
  nb.n = 1;
  nb.beta = {[](double t) { return 1.0 + 0.25 * std::sin(t); }};
  nb.m = {[](double t) { return 2.0 + 0.5 * std::cos(t); }};
  nb.alpha = {{[](double) { return 0.3; }}};
  nb.k = {[](double) { return 0.0; }};
  nb.delta = {[](double) { return 1.0; }};
  nb.eps = {[](double) { return 1.0; }};
  nb.K = {{Kernel::dirac(1.0)}};
  nb.G = {Kernel::dirac(1.0)};
  const SystemSpec env = nonautonomous_envelope(nb);
  CHECK(env.b[0] == doctest::Approx(1.25).epsilon(1e-4));
  CHECK(env.mu[0] == doctest::Approx(1.5).epsilon(1e-4));
  CHECK(env.a(0, 0) == doctest::Approx(0.3));
  CHECK(verdict(env).theorem == TheoremId::T3_2_positive);
}
