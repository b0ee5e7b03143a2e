#pragma once

#include <vector>

#include "nlsnorm/energy.hpp"
#include "nlsnorm/radial.hpp"

namespace nlsnorm {

// C^1 smoothstep cutoff: 1 on [0,1], 0 on [2,inf), radially non-increasing.
double cutoff_xi(double r);
double cutoff_xi_prime(double r);

// Extremal of the Sobolev inequality,
//   u_eps(x) = [N(N-2) eps^2]^{(N-2)/4} / (eps^2 + |x|^2)^{(N-2)/2}.
double aubin_talenti_value(int N, double eps, double r);
double aubin_talenti_deriv(int N, double eps, double r);
RadialFunction aubin_talenti(double eps, GridPtr grid, const ProblemParams& p);

// U_eps = xi u_eps; requires grid rmax >= 2.
RadialFunction truncated_bubble(double eps, GridPtr grid,
                                const ProblemParams& p);

struct BubbleNorms {
  double grad_sq = 0.0;   // ||grad U_eps||_2^2
  double mass_sq = 0.0;   // ||U_eps||_2^2
  double lq_pow = 0.0;    // ||U_eps||_q^q
  double crit_pow = 0.0;  // ||U_eps||_{2*}^{2*}
};

// All four norms by quadrature of the closed-form integrand on panels graded
// toward the core; relative accuracy well below 1e-6 (verified internally).
BubbleNorms bubble_norms(double eps, const ProblemParams& p);

// The deficits grad_sq - S^{N/2} and S^{N/2} - crit_pow computed directly
// from difference integrands over [1,2] and the exterior, so their size is
// O(eps^{N-2}) / O(eps^N) without catastrophic cancellation.
struct BubbleDeficits {
  double grad_deficit = 0.0;  // ||grad U||^2 - S^{N/2}
  double crit_deficit = 0.0;  // S^{N/2} - ||U||_{2*}^{2*} (> 0)
};
BubbleDeficits bubble_deficits(double eps, const ProblemParams& p);

struct ExponentFit {
  double exponent = 0.0;        // power of eps
  double log_coeff = 0.0;       // coefficient on log|log eps|
  bool log_detected = false;    // log_coeff > 0.5
};

struct AsymptoticReport {
  std::vector<double> eps;
  std::vector<BubbleNorms> norms;
  std::vector<BubbleDeficits> deficits;
  ExponentFit grad_deficit_fit;  // expected exponent N-2
  ExponentFit crit_deficit_fit;  // expected exponent N
  ExponentFit mass_fit;          // the three-case table at q = 2
  ExponentFit lq_fit;            // the three-case table at q
};

// Least-squares fit of log y = a + b log eps + c log|log eps| per quantity;
// requires >= 5 scales spanning >= 2 decades and monotone data.
AsymptoticReport asymptotic_exponents(const std::vector<double>& eps_list,
                                      const ProblemParams& p);

// The predicted case of ||U_eps||_q^q from the cutoff-bubble estimates:
// exponent of eps and whether a |log eps| factor is present.
struct NormCase {
  double exponent;
  bool log_factor;
};
NormCase lq_norm_case(int N, double q);

}  // namespace nlsnorm
