#include "nlsnorm/energy.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "nlsnorm/errors.hpp"
#include "nlsnorm/quad.hpp"

namespace nlsnorm {

ProblemParams ProblemParams::make(int N, double mu, double q, double c) {
  if (N < 3) throw std::invalid_argument("ProblemParams: N >= 3 required");
  if (!(mu > 0.0)) throw std::invalid_argument("ProblemParams: mu > 0 required");
  if (!(q > 2.0 && q < 2.0 + 4.0 / N))
    throw std::invalid_argument("ProblemParams: need 2 < q < 2 + 4/N");
  if (!(c > 0.0)) throw std::invalid_argument("ProblemParams: c > 0 required");
  ProblemParams p{N, mu, q, c};
  const double gq = p.gamma_q();
  if (!(gq > 0.0 && gq < 1.0 && q * gq < 2.0))
    throw std::invalid_argument("ProblemParams: exponent sanity failed");
  return p;
}

double lp_norm_pow(const RadialFunction& u, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm_pow: p >= 1 required");
  const RadialGrid& g = *u.grid;
  double s = 0.0;
  if (p == 2.0) {
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double v = u.values[k];
      if (std::isnan(v)) throw numeric_error("lp_norm_pow: NaN sample");
      s += g.w[k] * v * v;
    }
  } else {
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double v = u.values[k];
      if (std::isnan(v)) throw numeric_error("lp_norm_pow: NaN sample");
      s += g.w[k] * std::pow(std::abs(v), p);
    }
  }
  return g.sphere_area * s;
}

double mass_sq(const RadialFunction& u) { return lp_norm_pow(u, 2.0); }

double grad_norm_sq(const RadialFunction& u) {
  const RadialGrid& g = *u.grid;
  double s = 0.0;
  for (int k = 0; k < g.intervals(); ++k) {
    const double du = u.values[k + 1] - u.values[k];
    if (std::isnan(du)) throw numeric_error("grad_norm_sq: NaN sample");
    const double h = g.r[k + 1] - g.r[k];
    s += g.iw[k] * (du / h) * (du / h);
  }
  return g.sphere_area * s;
}

double energy_F(const RadialFunction& u, const ProblemParams& p) {
  return 0.5 * grad_norm_sq(u) - p.mu / p.q * lp_norm_pow(u, p.q) -
         lp_norm_pow(u, p.two_star()) / p.two_star();
}

double pohozaev_Q(const RadialFunction& u, const ProblemParams& p) {
  return grad_norm_sq(u) - p.mu * p.gamma_q() * lp_norm_pow(u, p.q) -
         lp_norm_pow(u, p.two_star());
}

RadialFunction rescale(const RadialFunction& u, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("rescale: s > 0 required");
  RadialInterpolant interp(u);
  const double amp = std::pow(s, 0.5 * u.grid->dim);
  RadialFunction out(u.grid);
  for (std::size_t k = 0; k < u.grid->size(); ++k)
    out.values[k] = amp * interp(s * u.grid->r[k]);
  return out;
}

double lagrange_multiplier(const RadialFunction& u, const ProblemParams& p) {
  const double m = mass_sq(u);
  if (!(m > 0.0)) throw std::invalid_argument("lagrange_multiplier: zero mass");
  return (grad_norm_sq(u) - p.mu * lp_norm_pow(u, p.q) -
          lp_norm_pow(u, p.two_star())) /
         m;
}

double sobolev_constant_closed_form(int N) {
  if (N < 3) throw std::invalid_argument("sobolev_constant: N >= 3 required");
  const double lg = std::lgamma(0.5 * N) - std::lgamma(double(N));
  return std::numbers::pi * N * (N - 2.0) * std::exp(2.0 * lg / N);
}

double sobolev_rayleigh_quotient(int N, double eps) {
  // Untruncated extremal, closed forms of u and u' integrated with
  // geometric panels toward the core plus an inverted tail.
  const double pref = std::pow(double(N) * (N - 2.0) * eps * eps, 0.25 * (N - 2.0));
  auto u = [&](double r) {
    return pref * std::pow(eps * eps + r * r, -0.5 * (N - 2.0));
  };
  auto du = [&](double r) {
    return -pref * (N - 2.0) * r * std::pow(eps * eps + r * r, -0.5 * N);
  };
  const double omega = 2.0 * std::pow(std::numbers::pi, 0.5 * N) /
                       std::tgamma(0.5 * N);
  const double two_star = 2.0 * N / (N - 2.0);
  const double R = 2e4 * eps;
  auto grad_int = [&](double r) {
    const double d = du(r);
    return d * d * std::pow(r, N - 1);
  };
  auto crit_int = [&](double r) {
    return std::pow(u(r), two_star) * std::pow(r, N - 1);
  };
  double A = panel_integrate(grad_int, 0.0, R, eps / 8.0);
  double C = panel_integrate(crit_int, 0.0, R, eps / 8.0);
  // tail r in [R, inf): substitute r = R/x
  auto tail = [&](const std::function<double(double)>& f) {
    return gl_integrate([&](double x) { return f(R / x) * R / (x * x); },
                        1e-12, 1.0, 64);
  };
  A = (A + tail(grad_int)) * omega;
  C = (C + tail(crit_int)) * omega;
  return A / std::pow(C, 2.0 / two_star);
}

double sobolev_constant(int N) {
  static std::map<int, double> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(N);
  if (it != cache.end()) return it->second;
  const double closed = sobolev_constant_closed_form(N);
  const double quad = sobolev_rayleigh_quotient(N, 1.0);
  if (std::abs(quad / closed - 1.0) > 5e-3)
    throw numeric_error("sobolev_constant: quadrature cross-check failed");
  cache.emplace(N, closed);
  return closed;
}

namespace {

struct Minorant {
  double a, b, k1, k2;  // h(rho) = rho/2 - a rho^{k1} - b rho^{k2}
  double value(double rho) const {
    return 0.5 * rho - a * std::pow(rho, k1) - b * std::pow(rho, k2);
  }
  double deriv(double rho) const {
    return 0.5 - a * k1 * std::pow(rho, k1 - 1.0) -
           b * k2 * std::pow(rho, k2 - 1.0);
  }
};

Minorant make_minorant(const ProblemParams& p) {
  const double S = sobolev_constant_closed_form(p.N);
  const double gq = p.gamma_q();
  // Interpolation between L2 and L2* gives ||u||_q <= S^{-gamma_q/2}
  // ||grad u||^{gamma_q} ||u||_2^{1-gamma_q}, a non-sharp GN constant.
  const double a = p.mu / p.q * std::pow(S, -0.5 * p.q * gq) *
                   std::pow(p.c, 0.5 * p.q * (1.0 - gq));
  const double ts = p.two_star();
  const double b = 1.0 / ts * std::pow(S, -0.5 * ts);
  return Minorant{a, b, 0.5 * p.q * gq, 0.5 * ts};
}

}  // namespace

double propose_rho0(const ProblemParams& p) {
  const Minorant h = make_minorant(p);
  // h' rises then falls; its peak solves a k1(1-k1) rho^{k1-2} = b k2(k2-1)
  // rho^{k2-2} in closed form. The maximizer of h is the larger root of h'.
  const double peak =
      std::pow(h.a * h.k1 * (1.0 - h.k1) / (h.b * h.k2 * (h.k2 - 1.0)),
               1.0 / (h.k2 - h.k1));
  if (!(h.deriv(peak) > 0.0))
    throw no_local_geometry("propose_rho0: no positive coercivity window (c too large)");
  double hi = peak;
  while (h.deriv(hi) > 0.0) hi *= 2.0;
  return bisect([&](double rho) { return h.deriv(rho); }, peak, hi, 1e-12);
}

double coercivity_margin(const ProblemParams& p, double rho0) {
  return make_minorant(p).value(rho0);
}

double equation_residual(const RadialFunction& u, double lambda,
                         const ProblemParams& p) {
  RadialFunction lap = radial_laplacian(u);
  const double ts = p.two_star();
  // The node at rmax carries the Dirichlet truncation condition, not an
  // equation row, so the defect is measured over k < M.
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < u.grid->size(); ++k) {
    const double v = u.values[k];
    const double av = std::abs(v);
    const double res = -lap.values[k] - lambda * v -
                       p.mu * std::pow(av, p.q - 2.0) * v -
                       std::pow(av, ts - 2.0) * v;
    s += u.grid->w[k] * res * res;
  }
  return std::sqrt(u.grid->sphere_area * s);
}

SolutionCertificate certify(const RadialFunction& u, const ProblemParams& p) {
  SolutionCertificate cert;
  cert.profile = u;
  cert.grad_sq = grad_norm_sq(u);
  cert.energy = energy_F(u, p);
  cert.pohozaev_defect = pohozaev_Q(u, p);
  cert.multiplier = lagrange_multiplier(u, p);
  cert.mass_defect = mass_sq(u) - p.c;
  cert.equation_residual = equation_residual(u, cert.multiplier, p);
  cert.classification =
      cert.energy < 0.0 ? Branch::lambda_minus : Branch::lambda_plus;
  return cert;
}

bool SolutionCertificate::valid(const ProblemParams& p,
                                const Tolerances& tol) const {
  return std::abs(pohozaev_defect) <= tol.tol_q * grad_sq &&
         std::abs(mass_defect) <= tol.tol_m * p.c &&
         equation_residual <= tol.tol_e && multiplier < 0.0;
}

}  // namespace nlsnorm
