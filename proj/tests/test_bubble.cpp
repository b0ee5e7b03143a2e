#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlsnorm/bubble.hpp"
#include "nlsnorm/errors.hpp"

using namespace nlsnorm;

TEST_CASE("cutoff is a C1 non-increasing smoothstep") {
  CHECK(cutoff_xi(0.0) == 1.0);
  CHECK(cutoff_xi(1.0) == 1.0);
  CHECK(cutoff_xi(2.0) == 0.0);
  CHECK(cutoff_xi(3.0) == 0.0);
  CHECK(cutoff_xi(1.5) == doctest::Approx(0.5));
  double prev = 1.0;
  for (double r = 0.0; r <= 2.5; r += 0.01) {
    CHECK(cutoff_xi(r) <= prev + 1e-15);
    prev = cutoff_xi(r);
  }
  // C1 at the junctions
  CHECK(cutoff_xi_prime(1.0) == 0.0);
  CHECK(cutoff_xi_prime(2.0) == 0.0);
  const double h = 1e-6;
  for (double r : {1.2, 1.5, 1.9})
    CHECK(cutoff_xi_prime(r) ==
          doctest::Approx((cutoff_xi(r + h) - cutoff_xi(r - h)) / (2 * h))
              .epsilon(1e-6));
}

TEST_CASE("extremal profile closed-form values") {
  const auto p = ProblemParams::make(4, 1.0, 2.5, 1.0);
  // u_eps(0) = [N(N-2)]^{(N-2)/4} eps^{-(N-2)/2}
  for (double eps : {0.5, 1.0, 2.0})
    CHECK(aubin_talenti_value(4, eps, 0.0) ==
          doctest::Approx(std::pow(8.0, 0.5) / eps).epsilon(1e-14));
  // N = 4, eps = 1, r = 1: sqrt(8)/2
  CHECK(aubin_talenti_value(4, 1.0, 1.0) ==
        doctest::Approx(std::sqrt(8.0) / 2.0).epsilon(1e-14));
  // prefactor scaling between eps and 2 eps at the origin
  for (int N : {3, 4, 5})
    CHECK(aubin_talenti_value(N, 1.0, 0.0) / aubin_talenti_value(N, 2.0, 0.0) ==
          doctest::Approx(std::pow(2.0, 0.5 * (N - 2))).epsilon(1e-13));
  auto g = make_grid(4, 4.0, 256);
  auto u = aubin_talenti(0.7, g, p);
  CHECK(u.values[0] == doctest::Approx(aubin_talenti_value(4, 0.7, 0.0)));
}

TEST_CASE("truncated bubble: equality inside B1, zero outside B2") {
  const auto p = ProblemParams::make(4, 1.0, 2.5, 1.0);
  auto g = make_grid(4, 4.0, 512);
  auto U = truncated_bubble(0.3, g, p);
  auto u = aubin_talenti(0.3, g, p);
  for (std::size_t k = 0; k < g->size(); ++k) {
    if (g->r[k] <= 1.0) CHECK(U.values[k] == doctest::Approx(u.values[k]));
    if (g->r[k] >= 2.0) CHECK(U.values[k] == 0.0);
  }
  auto small = make_grid(4, 1.5, 128);
  CHECK_THROWS_AS(truncated_bubble(0.3, small, p), std::invalid_argument);
}

TEST_CASE("bubble norms agree with the grid-sampled route") {
  const auto p = ProblemParams::make(4, 1.0, 2.5, 1.0);
  const double eps = 0.1;
  const auto bn = bubble_norms(eps, p);
  auto g = make_grid(4, 2.0, 32768, GridStretch::graded, 4.0);
  auto U = truncated_bubble(eps, g, p);
  CHECK(grad_norm_sq(U) == doctest::Approx(bn.grad_sq).epsilon(2e-5));
  CHECK(lp_norm_pow(U, 2.0) == doctest::Approx(bn.mass_sq).epsilon(2e-5));
  CHECK(lp_norm_pow(U, p.q) == doctest::Approx(bn.lq_pow).epsilon(2e-5));
  CHECK(lp_norm_pow(U, 4.0) == doctest::Approx(bn.crit_pow).epsilon(2e-5));
  CHECK_THROWS_AS(bubble_norms(0.7, p), std::invalid_argument);
}

TEST_CASE("critical norm approaches S^{N/2}") {
  const auto p = ProblemParams::make(4, 1.0, 2.5, 1.0);
  const double S = sobolev_constant_closed_form(4);
  const auto bn = bubble_norms(1e-3, p);
  CHECK(bn.crit_pow == doctest::Approx(S * S).epsilon(1e-2));
  CHECK(bn.grad_sq == doctest::Approx(S * S).epsilon(1e-2));
}

TEST_CASE("deficits match the cancellation-prone difference at moderate eps") {
  const auto p = ProblemParams::make(4, 1.0, 2.5, 1.0);
  const double S2 = std::pow(sobolev_constant_closed_form(4), 2.0);
  for (double eps : {0.25, 0.1}) {
    const auto bn = bubble_norms(eps, p);
    const auto dd = bubble_deficits(eps, p);
    CHECK(dd.grad_deficit ==
          doctest::Approx(bn.grad_sq - S2).epsilon(1e-4));
    CHECK(dd.crit_deficit ==
          doctest::Approx(S2 - bn.crit_pow).epsilon(1e-4));
    CHECK(dd.crit_deficit > 0.0);
  }
}

TEST_CASE("Rayleigh quotient of the truncated bubble approaches S from above") {
  const auto p = ProblemParams::make(4, 1.0, 2.5, 1.0);
  const double S = sobolev_constant_closed_form(4);
  double prev = 1e300;
  for (double eps : {0.4, 0.2, 0.1, 0.05}) {
    const auto bn = bubble_norms(eps, p);
    const double rq = bn.grad_sq / std::pow(bn.crit_pow, 0.5);
    CHECK(rq >= S - 1e-9);
    CHECK(rq <= prev + 1e-12);
    prev = rq;
  }
}

TEST_CASE("the three-case exponent table") {
  // N/(N-2) splits the behaviour of ||U_eps||_q^q
  CHECK(lq_norm_case(5, 3.0).exponent == doctest::Approx(0.5));
  CHECK_FALSE(lq_norm_case(5, 3.0).log_factor);
  CHECK(lq_norm_case(4, 2.0).log_factor);
  CHECK(lq_norm_case(4, 2.0).exponent == doctest::Approx(2.0));
  CHECK(lq_norm_case(3, 1.5).exponent == doctest::Approx(0.75));
  CHECK_FALSE(lq_norm_case(3, 1.5).log_factor);
}

TEST_CASE("fitted exponents reproduce the table for N = 4, q = 2.5") {
  const auto p = ProblemParams::make(4, 1.0, 2.5, 1.0);
  std::vector<double> eps;
  for (int k = 4; k <= 12; ++k) eps.push_back(std::pow(2.0, -k));
  const auto rep = asymptotic_exponents(eps, p);
  CHECK(std::abs(rep.grad_deficit_fit.exponent - 2.0) < 0.1);   // N - 2
  CHECK(std::abs(rep.crit_deficit_fit.exponent - 4.0) < 0.1);   // N
  CHECK(std::abs(rep.lq_fit.exponent - 1.5) < 0.05);            // 4 - q
  CHECK_FALSE(rep.lq_fit.log_detected);
  CHECK(rep.mass_fit.log_detected);                              // omega eps^2 |log eps|
  CHECK(std::abs(rep.mass_fit.exponent - 2.0) < 0.1);
  // norms vanish monotonically as eps -> 0
  for (std::size_t i = 1; i < rep.norms.size(); ++i)
    CHECK(rep.norms[i].mass_sq < rep.norms[i - 1].mass_sq);
}

TEST_CASE("asymptotic_exponents input validation") {
  const auto p = ProblemParams::make(4, 1.0, 2.5, 1.0);
  CHECK_THROWS_AS(asymptotic_exponents({0.1, 0.05, 0.01}, p),
                  std::invalid_argument);
  CHECK_THROWS_AS(asymptotic_exponents({0.1, 0.09, 0.08, 0.07, 0.06}, p),
                  std::invalid_argument);
  CHECK_THROWS_AS(asymptotic_exponents({0.1, 0.2, 0.05, 0.01, 0.001}, p),
                  std::invalid_argument);
}
