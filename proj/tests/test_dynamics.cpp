#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "nlsnorm/dynamics.hpp"
#include "nlsnorm/errors.hpp"
#include "nlsnorm/solvers.hpp"

using namespace nlsnorm;

namespace {

GridPtr dyn_grid(int m = 2048) {
  static GridPtr g = recommended_ground_grid(
      ProblemParams::make(4, 1.0, 2.5, 0.5), 2048, 4.0);
  if (m == 2048) return g;
  return make_grid(4, g->rmax(), m, GridStretch::graded, 4.0);
}

GroundStateResult& shared_ground() {
  static GroundStateResult gs = [] {
    const auto p = ProblemParams::make(4, 1.0, 2.5, 0.5);
    return solve_ground_state(p, dyn_grid());
  }();
  return gs;
}

}  // namespace

TEST_CASE("mass is conserved to rounding by the split steps") {
  const auto p = ProblemParams::make(4, 1.0, 2.5, 0.5);
  const auto& u = shared_ground().certificate.profile;
  EvolveOptions o;
  o.T = 1.0;
  o.dt = 1e-3;
  o.record_stride = 100;
  auto st = evolve(ComplexField::from_real(u), p, o);
  auto rep = conservation_check(st);
  CHECK(rep.mass_drift_rate <= 1e-10);
  CHECK_FALSE(st.blowup_detected);
  CHECK(st.variance0 > 0.0);  // |x| phi0 in L^2

  // linear-only run: both nonlinear terms off
  EvolveOptions lin = o;
  lin.disable_critical = lin.disable_q = true;
  auto stl = evolve(ComplexField::from_real(u), p, lin);
  CHECK(conservation_check(stl).mass_drift_rate <= 1e-10);
}

TEST_CASE("energy drift shrinks at second order in dt") {
  // a breathing (rescaled) datum so the splitting error dominates the drift
  const auto p = ProblemParams::make(4, 5.0, 2.5, 4.0);
  auto grid = recommended_ground_grid(p, 2048, 4.0);
  auto gs = solve_ground_state(p, grid);
  auto datum = rescale(gs.certificate.profile, 1.2);
  auto drift = [&](double dt) {
    EvolveOptions o;
    o.T = 0.5;
    o.dt = dt;
    o.record_stride = std::max(1, int(0.05 / dt));
    auto st = evolve(ComplexField::from_real(datum), p, o);
    double dmax = 0.0;
    for (double e : st.energy)
      dmax = std::max(dmax, std::abs(e - st.energy.front()));
    return dmax / std::abs(st.energy.front());
  };
  const double d1 = drift(2e-3), d2 = drift(1e-3);
  const double ratio = d1 / std::max(d2, 1e-300);
  CHECK(ratio > 2.0);   // second order: ~4, allow a factor 2
  CHECK(ratio < 8.0);
}

TEST_CASE("phase covariance is exact") {
  const auto p = ProblemParams::make(4, 1.0, 2.5, 0.5);
  const auto& u = shared_ground().certificate.profile;
  EvolveOptions o;
  o.T = 0.05;
  o.dt = 1e-3;
  o.record_stride = 1000000;  // only endpoints
  ComplexField a = ComplexField::from_real(u);
  ComplexField b = a;
  const std::complex<double> rot = std::polar(1.0, 0.7312);
  for (auto& v : b.values) v *= rot;

  ComplexField phi_a, phi_b;
  EvolveOptions oa = o, ob = o;
  oa.observer = [&](double, const ComplexField& f) { phi_a = f; };
  ob.observer = [&](double, const ComplexField& f) { phi_b = f; };
  evolve(a, p, oa);
  evolve(b, p, ob);
  for (std::size_t k = 0; k < phi_a.values.size(); ++k)
    CHECK(std::abs(phi_b.values[k] - rot * phi_a.values[k]) < 1e-12);
}

TEST_CASE("standing wave: modulus invariance over one period") {
  // compact soliton (|lambda| ~ 0.8) so one phase period is a short horizon
  const auto p = ProblemParams::make(4, 5.0, 2.5, 4.0);
  auto grid = recommended_ground_grid(p, 512, 4.0);
  auto seed = solve_ground_state(p, grid);
  auto u = dynamics_eigenstate(seed.certificate.profile, p);
  const double lambda = lagrange_multiplier(u, p);
  REQUIRE(lambda < 0.0);
  const double period = 2.0 * std::numbers::pi / std::abs(lambda);

  double amp0 = 0.0;
  for (double v : u.values) amp0 = std::max(amp0, std::abs(v));
  EvolveOptions o;
  o.T = period;
  o.dt = 5e-5;
  o.record_stride = 20000;
  double worst = 0.0;
  o.observer = [&](double, const ComplexField& phi) {
    for (std::size_t k = 0; k < phi.values.size(); ++k)
      worst = std::max(worst,
                       std::abs(std::abs(phi.values[k]) - u.values[k]));
  };
  evolve(ComplexField::from_real(u), p, o);
  CHECK(worst / amp0 <= 1e-6);
}

TEST_CASE("standing-wave residual against e^{-i lambda t} u_c") {
  const auto p = ProblemParams::make(4, 1.0, 2.5, 0.5);
  auto grid = dyn_grid(4096);
  auto gs = solve_ground_state(p, grid);
  const auto& u = gs.certificate.profile;
  const double lambda = gs.certificate.multiplier;

  EvolveOptions o;
  o.T = 1.0;
  o.dt = 2e-4;
  o.record_stride = 1000000;
  ComplexField at_t;
  o.observer = [&](double, const ComplexField& f) { at_t = f; };
  evolve(ComplexField::from_real(u), p, o);

  const std::complex<double> phase = std::polar(1.0, -lambda * 1.0);
  double err2 = 0.0;
  const RadialGrid& g = *grid;
  for (std::size_t k = 0; k < g.size(); ++k)
    err2 += g.w[k] * std::norm(at_t.values[k] - phase * u.values[k]);
  CHECK(std::sqrt(g.sphere_area * err2) <= 1e-4);
}

TEST_CASE("ground state stays near itself in H1 modulo phase") {
  const auto p = ProblemParams::make(4, 1.0, 2.5, 0.5);
  const auto& u = shared_ground().certificate.profile;
  EvolveOptions o;
  o.dt = 5e-4;
  o.record_stride = 200;
  auto rep = ground_state_proximity(p, u, 3.0, o);
  CHECK(rep.max_h1_distance <= 0.05 * rep.h1_norm0);
}

TEST_CASE("dilated mountain-pass data blow up in finite time") {
  const auto p = ProblemParams::make(4, 1.0, 2.5, 0.5);
  auto grid = dyn_grid(16384);
  auto mp = solve_mountain_pass(p, grid);
  const auto& v = mp.certificate.profile;

  // the dilated datum drops below the mountain-pass level and has s^+ < 1
  auto datum = rescale(v, 1.3);
  CHECK(energy_F(datum, p) < mp.level);

  EvolveOptions o;
  o.T = 20.0;
  o.dt = 2e-4;
  o.record_stride = 50;
  o.absorber = true;
  auto rows = instability_experiment(p, v, {1.3}, o);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].blew_up);
  CHECK(rows[0].blowup_time > 0.0);
  CHECK(rows[0].s_plus0 == doctest::Approx(1.0 / 1.3).epsilon(1e-3));
  CHECK(rows[0].energy0 < mp.level);

  CHECK_THROWS_AS(
      instability_experiment(p, v, {0.9}, o), std::invalid_argument);
}
