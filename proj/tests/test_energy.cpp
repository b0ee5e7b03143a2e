#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlsnorm/bubble.hpp"
#include "nlsnorm/energy.hpp"
#include "nlsnorm/errors.hpp"

using namespace nlsnorm;
namespace nums = std::numbers;

TEST_CASE("problem parameter validation") {
  auto p = ProblemParams::make(4, 1.0, 2.5, 1.0);
  CHECK(p.two_star() == doctest::Approx(4.0));
  CHECK(p.gamma_q() == doctest::Approx(0.4));
  CHECK_THROWS_AS(ProblemParams::make(4, 1.0, 2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ProblemParams::make(4, 1.0, 3.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ProblemParams::make(4, -1.0, 2.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ProblemParams::make(2, 1.0, 2.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ProblemParams::make(4, 1.0, 2.5, 0.0), std::invalid_argument);
  // gamma_q in (0,1), q gamma_q in (0,2) across admissible q
  for (int N : {3, 4, 5, 6}) {
    for (double f : {0.05, 0.5, 0.95}) {
      auto pp = ProblemParams::make(N, 1.0, 2.0 + f * 4.0 / N, 1.0);
      CHECK(pp.gamma_q() > 0.0);
      CHECK(pp.gamma_q() < 1.0);
      CHECK(pp.q * pp.gamma_q() < 2.0);
    }
  }
}

TEST_CASE("lp norms: zero and unit-ball volume in R^4") {
  auto g = make_grid(4, 1.0, 512);
  CHECK(lp_norm_pow(sample(g, [](double) { return 0.0; }), 2.0) == 0.0);
  CHECK(lp_norm_pow(sample(g, [](double) { return 1.0; }), 2.0) ==
        doctest::Approx(nums::pi * nums::pi / 2.0).epsilon(1e-12));
  CHECK_THROWS_AS(lp_norm_pow(sample(g, [](double) { return 1.0; }), 0.5),
                  std::invalid_argument);
}

TEST_CASE("gradient norm: constant and cone") {
  auto g = make_grid(3, 2.0, 2000);
  CHECK(grad_norm_sq(sample(g, [](double) { return 2.0; })) == 0.0);
  // u = max(1-r, 0) is P1 with a node at r = 1: the form is exact
  auto cone = sample(g, [](double r) { return std::max(1.0 - r, 0.0); });
  CHECK(grad_norm_sq(cone) ==
        doctest::Approx(4.0 * nums::pi / 3.0).epsilon(1e-12));
}

TEST_CASE("untruncated bubble reaches S^{N/2} on a large grid") {
  const auto p = ProblemParams::make(4, 1.0, 2.5, 1.0);
  const double S = sobolev_constant_closed_form(4);
  const double eps = 0.01;
  auto g = make_grid(4, 40.0, 16384, GridStretch::graded, 4.0);
  auto u = aubin_talenti(eps, g, p);
  CHECK(lp_norm_pow(u, 4.0) == doctest::Approx(S * S).epsilon(5e-3));
  CHECK(grad_norm_sq(u) == doctest::Approx(S * S).epsilon(5e-3));
}

TEST_CASE("energy and Pohozaev arithmetic") {
  const auto p = ProblemParams::make(4, 1.0, 2.5, 1.0);
  auto g = make_grid(4, 10.0, 2048);
  auto u = sample(g, [](double r) { return std::exp(-r * r); });

  const double A = grad_norm_sq(u);
  const double B = lp_norm_pow(u, p.q);
  const double C = lp_norm_pow(u, 4.0);
  CHECK(energy_F(u, p) ==
        doctest::Approx(0.5 * A - p.mu / p.q * B - 0.25 * C).epsilon(1e-14));
  CHECK(pohozaev_Q(u, p) ==
        doctest::Approx(A - p.mu * 0.4 * B - C).epsilon(1e-14));

  // mu = 0 is outside the parameter domain; the term drop is pure algebra
  const double F_no_q = 0.5 * A - 0.25 * C;
  CHECK(energy_F(u, p) == doctest::Approx(F_no_q - p.mu / p.q * B).epsilon(1e-14));

  // forced arithmetic example: norms (1, 1, 0.6) with gamma_q = 0.4
  CHECK(1.0 - 0.4 * 1.0 - 0.6 == doctest::Approx(0.0));
}

TEST_CASE("rescale: identity, mass invariance, scaling laws") {
  const auto p = ProblemParams::make(4, 1.0, 2.5, 1.0);
  auto g = make_grid(4, 24.0, 16384, GridStretch::graded, 2.0);
  auto u = sample(g, [](double r) { return std::exp(-0.5 * r * r); });

  auto id = rescale(u, 1.0);
  for (std::size_t k = 0; k < g->size(); ++k)
    CHECK(id.values[k] == doctest::Approx(u.values[k]).epsilon(1e-12));

  const double m0 = mass_sq(u), A0 = grad_norm_sq(u);
  const double B0 = lp_norm_pow(u, p.q), C0 = lp_norm_pow(u, 4.0);
  for (double s : {0.5, 2.0}) {
    auto us = rescale(u, s);
    CHECK(mass_sq(us) == doctest::Approx(m0).epsilon(1e-4));
    CHECK(grad_norm_sq(us) == doctest::Approx(s * s * A0).epsilon(1e-4));
    CHECK(lp_norm_pow(us, p.q) ==
          doctest::Approx(std::pow(s, p.q * p.gamma_q()) * B0).epsilon(1e-4));
    CHECK(lp_norm_pow(us, 4.0) ==
          doctest::Approx(std::pow(s, 4.0) * C0).epsilon(1e-4));
  }
  CHECK_THROWS_AS(rescale(u, -1.0), std::invalid_argument);
}

TEST_CASE("Lagrange multiplier formula") {
  const auto p = ProblemParams::make(4, 1.0, 2.5, 1.0);
  auto g = make_grid(4, 12.0, 4096);
  auto u = sample(g, [](double r) { return std::exp(-r); });
  const double lam = lagrange_multiplier(u, p);
  const double expect = (grad_norm_sq(u) - p.mu * lp_norm_pow(u, p.q) -
                         lp_norm_pow(u, 4.0)) /
                        mass_sq(u);
  CHECK(lam == doctest::Approx(expect).epsilon(1e-14));
  CHECK_THROWS_AS(
      lagrange_multiplier(sample(g, [](double) { return 0.0; }), p),
      std::invalid_argument);
}

TEST_CASE("Sobolev constant: closed form values and cross-check") {
  CHECK(sobolev_constant_closed_form(4) ==
        doctest::Approx(8.0 * nums::pi / std::sqrt(6.0)).epsilon(1e-14));
  CHECK(sobolev_constant(4) == doctest::Approx(10.2610).epsilon(1e-4));
  CHECK(sobolev_constant(3) == doctest::Approx(5.4784).epsilon(1e-4));
  CHECK(sobolev_constant(4) * sobolev_constant(4) ==
        doctest::Approx(105.29).epsilon(1e-3));
  CHECK_THROWS_AS(sobolev_constant(2), std::invalid_argument);
}

TEST_CASE("Rayleigh quotient is scale invariant") {
  const double r1 = sobolev_rayleigh_quotient(4, 0.1);
  const double r2 = sobolev_rayleigh_quotient(4, 0.01);
  CHECK(std::abs(r1 / r2 - 1.0) < 1e-3);
}

TEST_CASE("Sobolev inequality holds numerically on test profiles") {
  const int N = 4;
  const double S = sobolev_constant(N);
  // 1/(1+r^2) is the equality case; the grid must carry its slow gradient
  // tail for the 1e-3 slack to absorb truncation
  auto g = make_grid(N, 150.0, 16384, GridStretch::graded, 3.0);
  const auto p = ProblemParams::make(N, 1.0, 2.5, 1.0);
  auto profiles = {
      sample(g, [](double r) { return std::exp(-r * r); }),
      sample(g, [](double r) { return std::exp(-r); }),
      sample(g, [](double r) { return 1.0 / (1.0 + r * r); }),
      truncated_bubble(0.3, g, p),
  };
  for (const auto& u : profiles) {
    const double lhs = S * std::pow(lp_norm_pow(u, p.two_star()),
                                    2.0 / p.two_star());
    CHECK(lhs <= (1.0 + 1e-3) * grad_norm_sq(u));
  }
}

TEST_CASE("coercivity helper: window exists for small mass, closes for large") {
  const auto p = ProblemParams::make(4, 1.0, 2.5, 1.0);
  const double rho0 = propose_rho0(p);
  CHECK(rho0 > 0.0);
  CHECK(coercivity_margin(p, rho0) > 0.0);

  const auto p_small = ProblemParams::make(4, 1.0, 2.5, 0.01);
  CHECK(coercivity_margin(p_small, propose_rho0(p_small)) >
        coercivity_margin(p, rho0));

  CHECK_THROWS_AS(propose_rho0(ProblemParams::make(4, 1.0, 2.5, 500.0)),
                  no_local_geometry);
}
