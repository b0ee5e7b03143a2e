#pragma once

#include <span>
#include <string>
#include <vector>

#include "nlsnorm/energy.hpp"
#include "nlsnorm/radial.hpp"

namespace nlsnorm {

struct SolverOptions {
  Tolerances tol;
  int max_iters = 40000;
  double rho0 = 0.0;            // 0: propose from the coercivity minorant
  double tau0 = 0.5;            // initial gradient-flow step
  double descent_switch = 0.02; // relative residual at which Newton takes over
  double bubble_eps = 0.0;      // mountain-pass seed bubble scale; 0: auto
  unsigned long long seed = 1;
};

struct GroundStateResult {
  SolutionCertificate certificate;
  double m_of_c = 0.0;  // F_mu(u_c) < 0
  int iterations = 0;
  bool converged = false;
};

// Local minimizer of F_mu in V(c): semi-implicit gradient flow on S(c) with
// a rho0 trust region, finished by a bordered Newton iteration that pins the
// quadrature mass (and, when needed, the measured Pohozaev defect) while
// keeping the equation residual at rounding level.
GroundStateResult solve_ground_state(const ProblemParams& p, GridPtr grid,
                                     const SolverOptions& opts = {},
                                     const RadialFunction* init = nullptr);

// Ground states can be very dilute (|lambda| ~ mu^2 sqrt(c) is small at desk
// masses), so the truncation radius must follow the measured multiplier. A
// cheap scout solve iterates the box until the profile is contained, then
// returns a production grid with rmax ~ 18 / sqrt(|lambda|).
GridPtr recommended_ground_grid(const ProblemParams& p, int intervals = 4096,
                                double grade = 4.0);
// The scout's multiplier estimate (also used to seed the production solve).
double estimate_multiplier(const ProblemParams& p);

struct MCurvePoint {
  double c = 0.0, m = 0.0, lambda = 0.0;
};

struct MCurveResult {
  std::vector<MCurvePoint> points;
  double lipschitz_d = 0.0;    // max secant slope of c -> m(c)
  double fitted_exponent = 0.0;  // slope of log|m| vs log c
};

// Ground states along an increasing mass list, warm-started; verifies that
// m(c) is non-increasing (1e-8 slack).
MCurveResult m_curve(const ProblemParams& base, std::span<const double> cs,
                     GridPtr grid, const SolverOptions& opts = {});

struct MountainPassResult {
  SolutionCertificate certificate;
  double level = 0.0;         // F_mu(v_c) > 0
  double m_of_c = 0.0;        // ground-state level used for the bound
  double gap_to_bound = 0.0;  // m(c) + S^{N/2}/N - level
  int iterations = 0;
  bool converged = false;
};

// Minimizer of F_mu over Lambda^+(c): descent on u -> F_mu(u_{s_u^+}) with a
// fiber projection each sweep, started from ground state + small bubble,
// finished by the same Newton machinery. For N >= 4 the double inequality
// 0 < F_mu(v_c) < m(c) + S^{N/2}/N is enforced (check_failure otherwise).
MountainPassResult solve_mountain_pass(const ProblemParams& p, GridPtr grid,
                                       const SolverOptions& opts = {},
                                       const GroundStateResult* ground = nullptr,
                                       const RadialFunction* init = nullptr);

enum class SweepMode { c_to_zero, mu_to_zero };

struct SweepRow {
  double parameter = 0.0;
  double grad_sq = 0.0;      // ||grad v_c||^2, trending to S^{N/2}
  double level = 0.0;        // F_mu(v_c), trending to S^{N/2}/N
  double mu_lq = 0.0;        // mu ||v_c||_q^q, vanishing along mu sweeps
  bool ok = false;
  std::string error;
};

// Mountain-pass solutions along a decreasing c or mu list; instance failures
// are recorded and the sweep continues.
std::vector<SweepRow> asymptotic_sweep(SweepMode mode, const ProblemParams& base,
                                       std::span<const double> values,
                                       GridPtr grid,
                                       const SolverOptions& opts = {});

}  // namespace nlsnorm
