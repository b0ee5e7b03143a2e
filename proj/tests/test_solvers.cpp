#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlsnorm/errors.hpp"
#include "nlsnorm/fibermap.hpp"
#include "nlsnorm/solvers.hpp"

using namespace nlsnorm;

namespace {

GridPtr ground_grid(const ProblemParams& p, int m = 2048) {
  return recommended_ground_grid(p, m, 4.0);
}

}  // namespace

TEST_CASE("ground state at N=4, mu=1, q=2.5") {
  const auto p = ProblemParams::make(4, 1.0, 2.5, 0.5);
  auto gs = solve_ground_state(p, ground_grid(p));
  const auto& cert = gs.certificate;

  CHECK(gs.converged);
  CHECK(gs.m_of_c < 0.0);
  CHECK(cert.multiplier < 0.0);
  CHECK(cert.classification == Branch::lambda_minus);
  CHECK(std::abs(cert.mass_defect) <= 1e-6 * p.c);
  CHECK(std::abs(cert.pohozaev_defect) <= 1e-6 * cert.grad_sq);
  CHECK(cert.equation_residual <= 1e-5);
  CHECK(cert.valid(p));

  // positive, radially non-increasing profile
  const auto& v = cert.profile.values;
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    CHECK(v[k] >= -1e-10);
    CHECK(v[k + 1] <= v[k] + 1e-8);
  }
  CHECK(v.back() == 0.0);

  // lambda c = -mu (1 - gamma_q) ||u||_q^q via the Pohozaev identity
  const double B = lp_norm_pow(cert.profile, p.q);
  CHECK(cert.multiplier * p.c ==
        doctest::Approx(-p.mu * (1.0 - p.gamma_q()) * B).epsilon(1e-6));

  // on Lambda(c): N F_mu(u) = ||grad u||^2 - (N mu / q)(1 - q gamma_q / 2*) B
  const double rhs = cert.grad_sq -
                     p.N * p.mu / p.q *
                         (1.0 - p.q * p.gamma_q() / p.two_star()) * B;
  CHECK(p.N * cert.energy == doctest::Approx(rhs).epsilon(1e-6));
}

TEST_CASE("initialization independence and grid-refinement stability") {
  const auto p = ProblemParams::make(4, 1.0, 2.5, 0.8);
  auto grid = ground_grid(p);
  auto a = solve_ground_state(p, grid);
  auto wide = sample(grid, [&](double r) {
    const double w = grid->rmax() / 8.0;
    return std::exp(-r * r / (2 * w * w));
  });
  auto b = solve_ground_state(p, grid, {}, &wide);
  CHECK(std::abs(a.m_of_c - b.m_of_c) <= 1e-6 * std::abs(a.m_of_c));

  auto fine = ground_grid(p, 4096);
  auto c = solve_ground_state(p, fine);
  CHECK(std::abs(a.m_of_c - c.m_of_c) <= 1e-4 * std::abs(a.m_of_c));
}

TEST_CASE("overlarge mass is rejected by the coercivity gate") {
  const auto p = ProblemParams::make(4, 1.0, 2.5, 300.0);
  auto any_grid = make_grid(4, 60.0, 1024, GridStretch::graded, 3.0);
  CHECK_THROWS_AS(solve_ground_state(p, any_grid), no_local_geometry);
}

TEST_CASE("m_curve is non-increasing with m -> 0") {
  const auto base = ProblemParams::make(4, 1.0, 2.5, 1.0);
  const double cs[5] = {0.1, 0.25, 0.5, 0.9, 1.4};
  // box sized for the most dilute (smallest) mass on the curve
  auto grid = ground_grid(ProblemParams::make(4, 1.0, 2.5, cs[0]), 4096);
  auto mc = m_curve(base, cs, grid);
  REQUIRE(mc.points.size() == 5);
  for (std::size_t i = 0; i < mc.points.size(); ++i) {
    CHECK(mc.points[i].m < 0.0);
    CHECK(mc.points[i].lambda < 0.0);
    if (i > 0) CHECK(mc.points[i].m <= mc.points[i - 1].m + 1e-8);
  }
  CHECK(mc.lipschitz_d > 0.0);
  // the Lipschitz bound m(c - alpha) <= m(c) + d alpha across sampled pairs
  for (std::size_t i = 0; i < mc.points.size(); ++i)
    for (std::size_t j = i + 1; j < mc.points.size(); ++j)
      CHECK(mc.points[i].m <= mc.points[j].m +
                                  mc.lipschitz_d *
                                      (mc.points[j].c - mc.points[i].c) +
                                  1e-12);
  // m -> 0 trend
  CHECK(std::abs(mc.points.front().m) < 0.5 * std::abs(mc.points.back().m));
}

TEST_CASE("mountain pass: ordering, gap, certificate branch") {
  const auto p = ProblemParams::make(4, 1.0, 2.5, 0.5);
  auto grid = ground_grid(p, 131072);
  auto gs = solve_ground_state(p, grid);
  auto mp = solve_mountain_pass(p, grid, {}, &gs);

  CHECK(mp.converged);
  CHECK(mp.level > 0.0);
  CHECK(mp.m_of_c < 0.0);
  CHECK(mp.gap_to_bound > 0.0);
  CHECK(mp.certificate.classification == Branch::lambda_plus);
  CHECK(mp.certificate.multiplier < 0.0);
  CHECK(std::abs(mp.certificate.pohozaev_defect) <=
        1e-6 * mp.certificate.grad_sq);
  CHECK(std::abs(mp.certificate.mass_defect) <= 1e-6 * p.c);

  // level dominates the coercivity minorant on the well boundary
  const double rho0 = propose_rho0(p);
  CHECK(mp.level >= coercivity_margin(p, rho0) - 1e-12);

  // distinct from the ground state: F(v_c) > 0 > F(u_c)
  CHECK(mp.level > 0.0);
  CHECK(gs.m_of_c < 0.0);

  // the fiber maximum of v_c sits at s = 1
  const auto cp = critical_points(FiberCoeffs::of(mp.certificate.profile, p), p);
  CHECK(cp.s_plus == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("asymptotic sweep rows trend toward the bubble limits") {
  const auto base = ProblemParams::make(4, 1.0, 2.5, 0.5);
  const double values[3] = {0.5, 0.3, 0.18};
  auto grid = ground_grid(ProblemParams::make(4, 1.0, 2.5, values[2]), 131072);
  auto rows = asymptotic_sweep(SweepMode::c_to_zero, base, values, grid);
  REQUIRE(rows.size() == 3);
  const double S = sobolev_constant(4);
  for (const auto& row : rows) {
    REQUIRE(row.ok);
    CHECK(row.level > 0.0);
    CHECK(row.grad_sq > 0.0);
  }
  // levels increase toward S^2/4 as c decreases
  CHECK(rows[2].level > rows[0].level);
  CHECK(std::abs(rows[2].level - S * S / 4.0) <
        std::abs(rows[0].level - S * S / 4.0));
}
