#include <catch2/catch.hpp>

#include "test_support.hpp"

using namespace qbt;

TEST_CASE("energy constraint fixes the field magnitude", "[model]") {
  CHECK(omega_k_sq({1.0, 6.0}) == Approx(4.0).margin(1e-15));
  CHECK(omega_k_sq({1.0, 2.0}) == Approx(0.0).margin(1e-15));
  CHECK(omega_k_sq({2.0, 14.0}) == Approx(9.0).margin(1e-15));
  CHECK_THROWS_AS(omega_k_sq({2.0, 4.0}), InsufficientEnergy);
}

TEST_CASE("mode constants", "[model]") {
  SECTION("GHZ-optimal fields at omega^2=14, K=1") {
    // Bz = 2 sqrt(2), Omega = 2 Bz, so beta_1 = 2, beta_4 = -2
    const ChainParams p{1.0, 14.0};
    const double bz = 2.0 * std::sqrt(2.0);
    const double phi = std::atan2(bz, 2.0);
    const ModeConstants m = mode_constants(p, {phi, 2.0 * bz, 0.0});
    CHECK(m.beta[0] == Approx(2.0).margin(1e-12));
    CHECK(m.beta[3] == Approx(-2.0).margin(1e-12));
    CHECK(m.omega[0] == Approx(2.0 * std::sqrt(2.0)).margin(1e-12));
    CHECK(m.omega[3] == Approx(2.0 * std::sqrt(2.0)).margin(1e-12));
  }
  SECTION("equal couplings zero out the middle modes") {
    const ModeConstants m = mode_constants({1.0, 6.0}, {0.0, 0.0, 0.0});
    CHECK(m.beta[1] == 0.0);
    CHECK(m.beta[2] == 0.0);
  }
  SECTION("K=1.59 at omega^2=6") {
    const ModeConstants m = mode_constants({1.59, 6.0}, {0.0, 0.0, 0.0});
    CHECK(m.beta[1] == Approx(-0.59).margin(1e-12));
    CHECK(m.beta[2] == Approx(0.59).margin(1e-12));
    CHECK(m.omega[1] == Approx(std::sqrt(6.0 - 2.0 * 1.59)).margin(1e-12));
    CHECK(m.omega[2] == Approx(std::sqrt(6.0 - 2.0 * 1.59)).margin(1e-12));
  }
  SECTION("sector structure") {
    for (const auto& t : qbtest::random_tuples(50, 11)) {
      const ModeConstants m = mode_constants(t.chain, t.field);
      CHECK(m.beta[0] - m.beta[3] ==
            Approx(2.0 * (1.0 + t.chain.k_ratio)).margin(1e-12));
      CHECK(m.beta[1] - m.beta[2] ==
            Approx(2.0 * (1.0 - t.chain.k_ratio)).margin(1e-12));
      for (int i = 0; i < 4; ++i) CHECK(m.omega[i] >= std::abs(m.b0));
    }
  }
}

TEST_CASE("mode functions", "[model]") {
  const ModeConstants m = mode_constants({1.0, 6.0}, {0.0, 0.0, 0.0});
  SECTION("identity at tau = 0") {
    for (int i = 0; i < 4; ++i) {
      const ModeFunctions mf = mode_functions(m, i, 0.0);
      CHECK(mf.s == 0.0);
      CHECK(mf.c == 1.0);
      CHECK(mf.a == cplx(1.0, 0.0));
    }
  }
  SECTION("quarter-period of a beta-free mode") {
    // omega_2 = B0 = 2 at these parameters, beta_2 = 0
    const ModeFunctions mf = mode_functions(m, 1, M_PI / 4.0);
    CHECK(mf.s == Approx(0.5).margin(1e-15));
    CHECK(mf.c == Approx(0.0).margin(1e-15));
    CHECK(std::abs(mf.a) == Approx(0.0).margin(1e-15));
    CHECK(std::norm(mf.a) + 4.0 * mf.s * mf.s == Approx(1.0).margin(1e-12));
  }
  SECTION("series limit near omega = 0") {
    ModeConstants tiny;
    tiny.beta = {1e-9, 0, 0, 0};
    tiny.omega = {1e-9, 0, 0, 0};
    tiny.b0 = 0.0;
    const ModeFunctions mf = mode_functions(tiny, 0, 1.0);
    CHECK(mf.s == Approx(1.0).margin(1e-12));
  }
  SECTION("mode-level unitarity across a parameter sweep") {
    for (const auto& t : qbtest::random_tuples(30, 12)) {
      const ModeConstants mc = mode_constants(t.chain, t.field);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j <= 16; ++j) {
          const double tau = 3.0 * j / 16.0;
          const ModeFunctions mf = mode_functions(mc, i, tau);
          CHECK(std::norm(mf.a) + mc.b0 * mc.b0 * mf.s * mf.s ==
                Approx(1.0).margin(1e-12));
        }
    }
  }
}

TEST_CASE("energy check vanishes by construction", "[model]") {
  int tuples = 0;
  for (const auto& t : qbtest::random_tuples(110, 13)) {
    ++tuples;
    for (const double tau : {0.0, 0.37, 1.9}) {
      CHECK(std::abs(energy_check(t.chain, t.field, tau)) < 1e-12);
    }
  }
  CHECK(tuples >= 100);
  CHECK(std::abs(energy_check({1.0, 2.0}, {0.4, 0.0, 0.0})) < 1e-12);
  CHECK(std::abs(energy_check({1.59, 14.0}, {0.7, 2.0, 0.1}, 0.5)) < 1e-12);
}
