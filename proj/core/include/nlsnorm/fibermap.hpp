#pragma once

#include "nlsnorm/energy.hpp"
#include "nlsnorm/radial.hpp"

namespace nlsnorm {

// The three coefficients driving the fiber map psi_u(s):
//   A = ||grad u||_2^2, B = ||u||_q^q, C = ||u||_{2*}^{2*}.
struct FiberCoeffs {
  double grad_sq = 0.0;  // A > 0 for u != 0
  double lq_pow = 0.0;   // B >= 0
  double crit_pow = 0.0; // C > 0 for u != 0

  static FiberCoeffs of(const RadialFunction& u, const ProblemParams& p);
};

struct FiberEval {
  double psi, dpsi, d2psi;
};

// psi(s) = s^2/2 A - mu/q s^{q gamma_q} B - s^{2*}/2* C and derivatives.
FiberEval fiber_eval(const FiberCoeffs& co, double s, const ProblemParams& p);

// The exactly-two critical points of psi: a local minimum s_minus and the
// global maximum s_plus (psi''(s_plus) < 0).
struct FiberCriticalPoints {
  double s_minus = 0.0;
  double s_plus = 0.0;
  double psi_at_minus = 0.0;
  double psi_at_plus = 0.0;
  double second_deriv_at_plus = 0.0;
};

// Brackets the unique maximizer s* of theta(s) = psi'(s)/s in closed form,
// then bisects theta on each side in log s (relative tolerance 1e-10).
// Throws no_local_geometry when theta(s*) <= 0 or B == 0 (single-root regime).
FiberCriticalPoints critical_points(const FiberCoeffs& co,
                                    const ProblemParams& p);

enum class LambdaSet { none, minus, plus };

struct SetMembership {
  bool in_V = false;          // ||grad u||^2 < rho0
  bool in_W = false;          // s_u^+ > 1
  LambdaSet on_lambda = LambdaSet::none;
  bool lambda_sign_ambiguous = false;  // |Q| small but |F| below resolution
};

SetMembership classify(const RadialFunction& u, const ProblemParams& p,
                       double rho0, const Tolerances& tol = {});

}  // namespace nlsnorm
