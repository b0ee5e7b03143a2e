#pragma once

#include "nlsnorm/radial.hpp"

namespace nlsnorm {

// Standing assumptions: N >= 3, mu > 0, 2 < q < 2 + 4/N, c > 0. Then
// gamma_q in (0,1) and q gamma_q in (0,2); both are asserted at construction.
struct ProblemParams {
  int N = 4;
  double mu = 1.0;
  double q = 2.5;
  double c = 1.0;

  double two_star() const { return 2.0 * N / (N - 2.0); }
  double gamma_q() const { return N * (q - 2.0) / (2.0 * q); }

  static ProblemParams make(int N, double mu, double q, double c);
};

struct Tolerances {
  double tol_q = 1e-6;  // |Q_mu| <= tol_q * grad_sq
  double tol_m = 1e-6;  // |mass - c| <= tol_m * c
  double tol_e = 1e-5;  // equation residual in the weighted L2 norm
};

// ||u||_p^p over R^N.
double lp_norm_pow(const RadialFunction& u, double p);
// ||u||_2^2.
double mass_sq(const RadialFunction& u);
// ||grad u||_2^2; exact Dirichlet energy of the P1 interpolant, so it is
// nonnegative and second-order accurate for smooth profiles.
double grad_norm_sq(const RadialFunction& u);

// F_mu(u) = 1/2 ||grad u||^2 - mu/q ||u||_q^q - 1/2* ||u||_{2*}^{2*}.
double energy_F(const RadialFunction& u, const ProblemParams& p);
// Q_mu(u) = ||grad u||^2 - mu gamma_q ||u||_q^q - ||u||_{2*}^{2*}.
double pohozaev_Q(const RadialFunction& u, const ProblemParams& p);

// Mass-preserving dilation u_s(x) = s^{N/2} u(s x), resampled on u's grid;
// values beyond rmax are treated as 0.
RadialFunction rescale(const RadialFunction& u, double s);

// lambda = (||grad u||^2 - mu ||u||_q^q - ||u||_{2*}^{2*}) / ||u||_2^2.
double lagrange_multiplier(const RadialFunction& u, const ProblemParams& p);

// Best Sobolev constant S = pi N(N-2) (Gamma(N/2)/Gamma(N))^{2/N}.
double sobolev_constant_closed_form(int N);
// Same value cross-checked against the Rayleigh quotient of the extremal
// profile by quadrature; throws numeric_error if the two disagree by > 0.5%.
double sobolev_constant(int N);
// The quadrature Rayleigh quotient ||grad u_eps||^2 / ||u_eps||_{2*}^2 itself.
double sobolev_rayleigh_quotient(int N, double eps);

// Coercivity minorant h(rho) = rho/2 - a rho^{q gamma_q / 2} - b rho^{2*/2}
// built from the interpolation (non-sharp) Gagliardo-Nirenberg constant and
// S; F_mu >= h(||grad u||^2) on S(c). propose_rho0 returns its maximizer,
// coercivity_margin the value there (positive iff the local well is
// certified at this mass).
double propose_rho0(const ProblemParams& p);
double coercivity_margin(const ProblemParams& p, double rho0);

enum class Branch { lambda_minus, lambda_plus };

struct SolutionCertificate {
  RadialFunction profile;
  double energy = 0.0;
  double pohozaev_defect = 0.0;
  double multiplier = 0.0;
  double equation_residual = 0.0;
  double mass_defect = 0.0;
  double grad_sq = 0.0;
  Branch classification = Branch::lambda_minus;

  bool valid(const ProblemParams& p, const Tolerances& tol = {}) const;
};

// Re-measures every certificate field for an arbitrary profile.
SolutionCertificate certify(const RadialFunction& u, const ProblemParams& p);

// Weighted L2 norm of -Lap u - lambda u - mu |u|^{q-2}u - |u|^{2*-2}u.
double equation_residual(const RadialFunction& u, double lambda,
                         const ProblemParams& p);

}  // namespace nlsnorm
