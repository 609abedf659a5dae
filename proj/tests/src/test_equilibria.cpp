#include <doctest.h>

#include <lvdelay/equilibria.hpp>
#include <lvdelay/fixtures.hpp>

using namespace lvd;

TEST_CASE("predator-prey equilibrium enumeration") {
  const SystemSpec spec = fixture_spec("ex5_1_uncontrolled").spec;
  const auto eqs = enumerate_equilibria(spec);
  CHECK(eqs.size() == 4);  // trivial + {1} + {2} + {1,2}

  const SaturatedResult sat = saturated_equilibrium(spec);
  REQUIRE(sat.status == SaturatedResult::Status::unique);
  CHECK(sat.uniqueness_guaranteed);
  const EquilibriumCandidate& eq = sat.candidates.front();
  CHECK(eq.support == std::vector<int>{0, 1});
  CHECK(eq.x_star[0] == doctest::Approx(53.0 / 80.0).epsilon(1e-12));
  CHECK(eq.x_star[1] == doctest::Approx(1.0 / 20.0).epsilon(1e-12));
  CHECK(eq.u_star[0] == doctest::Approx(53.0 / 80.0).epsilon(1e-12));
}

TEST_CASE("strong cooperation yields two saturated points") {
  const SystemSpec spec = fixture_spec("ex2_2").spec;
  std::vector<std::vector<int>> saturated_supports;
  for (const auto& eq : enumerate_equilibria(spec))
    if (eq.saturated) saturated_supports.push_back(eq.support);
  REQUIRE(saturated_supports.size() == 2);
  CHECK(saturated_supports[0] == std::vector<int>{});
  CHECK(saturated_supports[1] == std::vector<int>{0, 1});

  const SaturatedResult sat = saturated_equilibrium(spec);
  CHECK(sat.status == SaturatedResult::Status::multiple);
  CHECK_FALSE(sat.uniqueness_guaranteed);
  CHECK(sat.m_verdict.cls == MatrixClass::not_P);
}

TEST_CASE("degenerate candidates collapse onto the smallest support") {
  // with the control gain 0.1 the boundary point (5/8, 0) is degenerate:
  // the off-support margin of species 2 is exactly zero
  const SystemSpec spec = fixture_spec("ex5_1_controlled").spec;
  const SaturatedResult sat = saturated_equilibrium(spec);
  REQUIRE(sat.status == SaturatedResult::Status::unique);
  const EquilibriumCandidate& eq = sat.candidates.front();
  CHECK(eq.support == std::vector<int>{0});
  CHECK(eq.x_star[0] == doctest::Approx(0.625).epsilon(1e-12));
  CHECK(eq.x_star[1] == 0.0);
  CHECK(eq.degenerate);
}

TEST_CASE("bordered determinant identity") {
  const SystemSpec spec = fixture_spec("ex5_1_controlled").spec;
  for (const std::vector<int>& support :
       {std::vector<int>{0}, std::vector<int>{1}}) {
    const CramerTable ct = cramer_table(spec, support);
    CHECK(ct.identity_error <= 1e-12);
    // Cramer ratio matches the direct support solve
    const VectorXd lam = spec.lambda();
    const int i = support[0];
    const double direct = spec.b[i] / (lam[i] + spec.a(i, i));
    CHECK(ct.Ri[0] / ct.R0 == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("saturation margins use the controlled matrix") {
  const SystemSpec spec = fixture_spec("ex5_2_a1").spec;
  const SaturatedResult sat = saturated_equilibrium(spec);
  REQUIRE(sat.status == SaturatedResult::Status::unique);
  const EquilibriumCandidate& eq = sat.candidates.front();
  CHECK(eq.support == std::vector<int>{0});
  CHECK(eq.x_star[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  // margin of species 2: a_21 x_1* - b_2 = 2 * 2/3 - 1 = 1/3
  REQUIRE(eq.margins.count(1) == 1);
  CHECK(eq.margins.at(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}
