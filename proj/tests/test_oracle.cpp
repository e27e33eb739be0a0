#include <catch2/catch.hpp>

#include "test_support.hpp"

using namespace qbt;

TEST_CASE("time-ordered integration", "[oracle]") {
  SECTION("identity at tau = 0") {
    const Unitary8 u = integrate_u({1.0, 6.0}, {0.2, 0.5, 0.0}, 0.0);
    CHECK(max_abs(u - Matrix8cd::Identity()) < 1e-15);
  }
  SECTION("step bound enforced") {
    CHECK_THROWS_AS(integrate_u({1.0, 6.0}, {0.0, 0.0, 0.0}, 1.0, {0.02}),
                    StepTooLarge);
    CHECK_THROWS_AS(integrate_u({1.0, 6.0}, {0.0, 0.0, 0.0}, 1.0, {-1.0}),
                    StepTooLarge);
  }
  SECTION("matches the analytic propagator on branch-2 fields") {
    const OptimalPlan plan = optimal_fields_b2(6.0, 1.0, B2Branch::Branch2);
    const IntegrationResult r =
        integrate_u_with_error({1.0, 6.0}, plan.fields.front(), 1.0, {1e-4});
    CHECK(max_abs(r.u - u_opt({1.0, 6.0}, plan.fields.front(), 1.0)) < 1e-8);
    CHECK(r.error_estimate < 1e-8);
  }
  SECTION("halving the step quarters the midpoint error") {
    const ChainParams p{1.59, 6.0};
    const FieldParams f{0.4, 1.5, 0.2};
    const Unitary8 exact = u_opt(p, f, 0.8);
    const double e1 =
        max_abs(detail::integrate_midpoint(p, f, 0.8, 200) - exact);
    const double e2 =
        max_abs(detail::integrate_midpoint(p, f, 0.8, 400) - exact);
    CHECK(e1 / e2 == Approx(4.0).margin(0.5));
  }
  SECTION("agreement across random tuples") {
    for (const auto& t : qbtest::random_tuples(4, 51)) {
      const Unitary8 numeric = integrate_u(t.chain, t.field, 0.7, {2e-4});
      CHECK(max_abs(numeric - u_opt(t.chain, t.field, 0.7)) < 1e-8);
    }
  }
}

TEST_CASE("tangle maximization", "[oracle]") {
  SECTION("bounds validation") {
    CHECK_THROWS_AS(
        maximize_tau13(StateClass::GHZ, 14.0, 1.0, {0.0, 5.0, 64, 32, 64}),
        EmptyBounds);
    CHECK_THROWS_AS(
        maximize_tau13(StateClass::GHZ, 14.0, 1.0, {1.0, -0.5, 64, 32, 64}),
        EmptyBounds);
    CHECK_THROWS_AS(
        maximize_tau13(StateClass::GHZ, 14.0, 1.0, {1.0, 5.0, 1, 32, 64}),
        EmptyBounds);
  }
  SECTION("GHZ optimum at omega^2 = 14, K = 1") {
    const double tau_star = std::sqrt(2.0) * M_PI / 8.0;
    const SearchBounds b{2.5 * tau_star, 2.0 * std::sqrt(14.0) + 1.0, 64, 32, 64};
    const SearchResult r = maximize_tau13(StateClass::GHZ, 14.0, 1.0, b);
    CHECK_FALSE(r.flat);
    CHECK(r.value_best == Approx(1.0).margin(1e-8));
    CHECK(r.tau_best == Approx(tau_star).margin(1e-6));
  }
  SECTION("B2 optimum at omega^2 = 6, K = 1.59") {
    const double tau_star = M_PI / std::sqrt(2.82);
    const SearchBounds b{2.5 * tau_star, 2.0 * std::sqrt(6.0) + 1.0, 64, 32, 64};
    const SearchResult r = maximize_tau13(StateClass::B2, 6.0, 1.59, b);
    CHECK_FALSE(r.flat);
    CHECK(r.value_best == Approx(1.0).margin(1e-8));
    CHECK(r.tau_best == Approx(tau_star).margin(1e-6));
    // definition-chain cross-check at the located optimum
    const FieldParams fb{r.phi_best, r.omega_big_best, 0.0};
    const PureState3 psi = evolve_class(StateClass::B2, {1.59, 6.0}, fb, r.tau_best);
    CHECK(two_tangle_13(psi) == Approx(r.value_best).margin(1e-10));
  }
  SECTION("flat trajectory at equal couplings") {
    const SearchBounds b{2.0, 2.0 * std::sqrt(6.0) + 1.0, 64, 32, 64};
    const SearchResult r = maximize_tau13(StateClass::B2, 6.0, 1.0, b);
    CHECK(r.flat);
    CHECK(r.value_best == Approx(1.0).margin(1e-9));
  }
  SECTION("deterministic repeat") {
    const SearchBounds b{1.4, 2.0 * std::sqrt(14.0) + 1.0, 48, 24, 48};
    const SearchResult r1 = maximize_tau13(StateClass::GHZ, 14.0, 1.59, b);
    const SearchResult r2 = maximize_tau13(StateClass::GHZ, 14.0, 1.59, b);
    CHECK(r1.tau_best == r2.tau_best);
    CHECK(r1.phi_best == r2.phi_best);
    CHECK(r1.omega_big_best == r2.omega_big_best);
    CHECK(r1.value_best == r2.value_best);
    CHECK(r1.evaluations == r2.evaluations);
  }
  SECTION("zero-tangle classes never rise") {
    const SearchBounds b{2.0, 4.0, 16, 8, 16};
    for (const StateClass c : {StateClass::S, StateClass::B1, StateClass::B3}) {
      const SearchResult r =
          maximize_tau13(c, 6.0, 1.3, b, TanglePath::DefinitionChain);
      CHECK(r.value_best < 1e-12);
    }
  }
}

TEST_CASE("stationarity diagnostics", "[oracle]") {
  SECTION("GHZ plan point is a stationary maximum along tau") {
    const OptimalPlan plan = optimal_fields_ghz(14.0, 1.0);
    const ChainParams p{1.0, 14.0};
    const Eigen::Vector3d g =
        gradient_at(StateClass::GHZ, p, plan.fields.front(), plan.tau_star);
    CHECK(g.norm() < 1e-6);
    const Eigen::Matrix3d h =
        hessian_at(StateClass::GHZ, p, plan.fields.front(), plan.tau_star);
    CHECK(h(0, 0) < -1.0);  // strict maximum along tau
  }
  SECTION("flat trajectory has a vanishing hessian") {
    const Eigen::Matrix3d h =
        hessian_at(StateClass::B2, {1.0, 6.0}, {0.0, 0.0, 0.0}, 0.8);
    CHECK(h.cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("verification report", "[oracle]") {
  SECTION("single quick scenario") {
    const std::vector<Scenario> scenarios = {
        {"ghz_w14_k1", StateClass::GHZ, 14.0, 1.0, false}};
    const VerificationReport report = verify_report(scenarios);
    REQUIRE(report.scenarios.size() == 1);
    CHECK(report.all_pass());
    bool saw_propagator = false, saw_search = false;
    for (const CheckResult& c : report.scenarios.front().checks) {
      if (c.name == "propagator_agreement") {
        saw_propagator = true;
        CHECK(c.status == CheckStatus::Pass);
        CHECK(c.measured < 1e-8);
      }
      if (c.name == "search_tau_star") {
        saw_search = true;
        CHECK(c.status == CheckStatus::Pass);
        CHECK(c.measured < 1e-6);
      }
    }
    CHECK(saw_propagator);
    CHECK(saw_search);
    // global notes are always present
    bool saw_k2 = false, saw_denominator = false, saw_branch1 = false;
    for (const CheckResult& c : report.notes) {
      if (c.name == "k2_minus_printed_vs_formula") saw_k2 = true;
      if (c.name == "b2_branch2_denominator_resolution") saw_denominator = true;
      if (c.name == "b2_branch1_bz_radicand_w6_k2") saw_branch1 = true;
    }
    CHECK(saw_k2);
    CHECK(saw_denominator);
    CHECK(saw_branch1);
  }
  SECTION("default scenario list") {
    const std::vector<Scenario> defaults = default_scenarios();
    REQUIRE(defaults.size() == 5);
    CHECK(defaults.back().known_formula_conflict);
  }
}
