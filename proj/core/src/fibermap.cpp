#include "nlsnorm/fibermap.hpp"

#include <cmath>
#include <stdexcept>

#include "nlsnorm/errors.hpp"
#include "nlsnorm/quad.hpp"

namespace nlsnorm {

FiberCoeffs FiberCoeffs::of(const RadialFunction& u, const ProblemParams& p) {
  return {grad_norm_sq(u), lp_norm_pow(u, p.q), lp_norm_pow(u, p.two_star())};
}

FiberEval fiber_eval(const FiberCoeffs& co, double s, const ProblemParams& p) {
  if (!(s > 0.0)) throw std::invalid_argument("fiber_eval: s > 0 required");
  const double gq = p.gamma_q();
  const double qg = p.q * gq;
  const double ts = p.two_star();
  const double A = co.grad_sq, B = co.lq_pow, C = co.crit_pow;
  FiberEval e;
  e.psi = 0.5 * s * s * A - p.mu / p.q * std::pow(s, qg) * B -
          std::pow(s, ts) / ts * C;
  e.dpsi = s * A - p.mu * gq * std::pow(s, qg - 1.0) * B -
           std::pow(s, ts - 1.0) * C;
  e.d2psi = A - p.mu * gq * (qg - 1.0) * std::pow(s, qg - 2.0) * B -
            (ts - 1.0) * std::pow(s, ts - 2.0) * C;
  return e;
}

FiberCriticalPoints critical_points(const FiberCoeffs& co,
                                    const ProblemParams& p) {
  const double A = co.grad_sq, B = co.lq_pow, C = co.crit_pow;
  if (!(A > 0.0) || !(C > 0.0) || B < 0.0 || !std::isfinite(A + B + C))
    throw std::invalid_argument("critical_points: coefficients of a nontrivial u required");
  const double gq = p.gamma_q();
  const double qg = p.q * gq;
  const double ts = p.two_star();
  if (B == 0.0)
    throw no_local_geometry("critical_points: B = 0, theta decreasing (single root)");

  // theta(s) = psi'(s)/s = A - mu gq B s^{qg-2} - C s^{2*-2}; theta' vanishes
  // only at s*, in closed form since qg < 2 < 2*.
  auto theta_log = [&](double tau) {
    return A - p.mu * gq * B * std::exp((qg - 2.0) * tau) -
           C * std::exp((ts - 2.0) * tau);
  };
  const double tau_star =
      std::log(p.mu * gq * (2.0 - qg) * B / ((ts - 2.0) * C)) / (ts - qg);
  if (!(theta_log(tau_star) > 0.0))
    throw no_local_geometry("critical_points: theta <= 0 at its maximizer (outside two-root regime)");

  auto bracket_down = [&](double tau0) {
    double step = 1.0, lo = tau0 - step;
    while (theta_log(lo) > 0.0) {
      step *= 2.0;
      lo = tau0 - step;
      if (step > 1e6) throw numeric_error("critical_points: left root underflow");
    }
    return lo;
  };
  auto bracket_up = [&](double tau0) {
    double step = 1.0, hi = tau0 + step;
    while (theta_log(hi) > 0.0) {
      step *= 2.0;
      hi = tau0 + step;
      if (step > 1e6) throw numeric_error("critical_points: right root overflow");
    }
    return hi;
  };
  // log-space bisection: absolute width 1e-12 in tau is relative 1e-12 in s
  const double tau_minus =
      bisect(theta_log, bracket_down(tau_star), tau_star, 1e-12, 200);
  const double tau_plus =
      bisect(theta_log, tau_star, bracket_up(tau_star), 1e-12, 200);

  FiberCriticalPoints cp;
  cp.s_minus = std::exp(tau_minus);
  cp.s_plus = std::exp(tau_plus);
  cp.psi_at_minus = fiber_eval(co, cp.s_minus, p).psi;
  const FiberEval at_plus = fiber_eval(co, cp.s_plus, p);
  cp.psi_at_plus = at_plus.psi;
  cp.second_deriv_at_plus = at_plus.d2psi;
  if (!(cp.second_deriv_at_plus < 0.0))
    throw numeric_error("critical_points: psi'' at s_plus not negative");
  return cp;
}

SetMembership classify(const RadialFunction& u, const ProblemParams& p,
                       double rho0, const Tolerances& tol) {
  const double m = mass_sq(u);
  if (std::abs(m - p.c) > tol.tol_m * p.c)
    throw std::invalid_argument("classify: mass defect exceeds tolerance");
  SetMembership s;
  const FiberCoeffs co = FiberCoeffs::of(u, p);
  s.in_V = co.grad_sq < rho0;
  const FiberCriticalPoints cp = critical_points(co, p);
  s.in_W = cp.s_plus > 1.0;
  const double Q = co.grad_sq - p.mu * p.gamma_q() * co.lq_pow - co.crit_pow;
  if (std::abs(Q) <= tol.tol_q * co.grad_sq) {
    const double F = 0.5 * co.grad_sq - p.mu / p.q * co.lq_pow -
                     co.crit_pow / p.two_star();
    const double f_floor = 1e-10 * co.grad_sq;
    if (std::abs(F) <= f_floor) {
      s.on_lambda = LambdaSet::none;  // Q = 0 but F indistinguishable from 0
      s.lambda_sign_ambiguous = true;
    } else {
      s.on_lambda = F < 0.0 ? LambdaSet::minus : LambdaSet::plus;
    }
  }
  return s;
}

}  // namespace nlsnorm
