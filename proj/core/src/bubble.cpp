#include "nlsnorm/bubble.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "nlsnorm/errors.hpp"
#include "nlsnorm/quad.hpp"

namespace nlsnorm {

double cutoff_xi(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double x = r - 1.0;
  return 1.0 - x * x * (3.0 - 2.0 * x);
}

double cutoff_xi_prime(double r) {
  if (r <= 1.0 || r >= 2.0) return 0.0;
  const double x = r - 1.0;
  return -6.0 * x * (1.0 - x);
}

double aubin_talenti_value(int N, double eps, double r) {
  const double pref = std::pow(N * (N - 2.0) * eps * eps, 0.25 * (N - 2.0));
  return pref * std::pow(eps * eps + r * r, -0.5 * (N - 2.0));
}

double aubin_talenti_deriv(int N, double eps, double r) {
  const double pref = std::pow(N * (N - 2.0) * eps * eps, 0.25 * (N - 2.0));
  return -pref * (N - 2.0) * r * std::pow(eps * eps + r * r, -0.5 * N);
}

RadialFunction aubin_talenti(double eps, GridPtr grid, const ProblemParams& p) {
  if (!(eps > 0.0)) throw std::invalid_argument("aubin_talenti: eps > 0 required");
  return sample(grid, [&](double r) { return aubin_talenti_value(p.N, eps, r); });
}

RadialFunction truncated_bubble(double eps, GridPtr grid,
                                const ProblemParams& p) {
  if (!(eps > 0.0)) throw std::invalid_argument("truncated_bubble: eps > 0 required");
  if (grid->rmax() < 2.0)
    throw std::invalid_argument("truncated_bubble: grid R_max >= 2 required");
  return sample(grid, [&](double r) {
    return cutoff_xi(r) * aubin_talenti_value(p.N, eps, r);
  });
}

namespace {

// The integrands are analytic except for curvature jumps of the cutoff at
// r = 1 and r = 2, so panels are aligned with those breakpoints.
double core_quadrature(const std::function<double(double)>& f, double eps,
                       int n_per_panel) {
  return panel_integrate(f, 0.0, 1.0, eps / 8.0, n_per_panel) +
         gl_integrate(f, 1.0, 2.0, 2 * n_per_panel);
}

}  // namespace

BubbleNorms bubble_norms(double eps, const ProblemParams& p) {
  if (!(eps > 0.0 && eps <= 0.5))
    throw std::invalid_argument("bubble_norms: need 0 < eps <= 0.5");
  if (eps < 1e-9)
    throw numeric_error("bubble_norms: core below quadrature resolution");
  const int N = p.N;
  const double ts = p.two_star();
  const double omega = 2.0 * std::pow(std::numbers::pi, 0.5 * N) /
                       std::tgamma(0.5 * N);
  auto U = [&](double r) { return cutoff_xi(r) * aubin_talenti_value(N, eps, r); };
  auto dU = [&](double r) {
    return cutoff_xi_prime(r) * aubin_talenti_value(N, eps, r) +
           cutoff_xi(r) * aubin_talenti_deriv(N, eps, r);
  };
  auto rpow = [&](double r) { return std::pow(r, N - 1); };

  std::array<std::function<double(double)>, 4> integrands = {
      [&](double r) { const double d = dU(r); return d * d * rpow(r); },
      [&](double r) { const double u = U(r); return u * u * rpow(r); },
      [&](double r) { return std::pow(U(r), p.q) * rpow(r); },
      [&](double r) { return std::pow(U(r), ts) * rpow(r); }};

  std::array<double, 4> vals{}, check{};
  for (int i = 0; i < 4; ++i) {
    vals[i] = omega * core_quadrature(integrands[i], eps, 24);
    check[i] = omega * core_quadrature(integrands[i], eps, 16);
    if (std::abs(vals[i] - check[i]) > 1e-6 * std::abs(vals[i]))
      throw numeric_error("bubble_norms: quadrature did not converge");
  }
  return {vals[0], vals[1], vals[2], vals[3]};
}

BubbleDeficits bubble_deficits(double eps, const ProblemParams& p) {
  if (!(eps > 0.0 && eps <= 0.5))
    throw std::invalid_argument("bubble_deficits: need 0 < eps <= 0.5");
  const int N = p.N;
  const double ts = p.two_star();
  const double omega = 2.0 * std::pow(std::numbers::pi, 0.5 * N) /
                       std::tgamma(0.5 * N);
  auto u = [&](double r) { return aubin_talenti_value(N, eps, r); };
  auto du = [&](double r) { return aubin_talenti_deriv(N, eps, r); };
  auto rpow = [&](double r) { return std::pow(r, N - 1); };

  // ||grad U||^2 - ||grad u||^2 restricted to [1,2], then minus the tail of
  // ||grad u||^2 over [2, inf); ||grad u||^2 = S^{N/2} exactly.
  auto grad_band = [&](double r) {
    const double g = cutoff_xi_prime(r) * u(r) + cutoff_xi(r) * du(r);
    const double g0 = du(r);
    return (g * g - g0 * g0) * rpow(r);
  };
  auto grad_tail = [&](double r) {
    const double g0 = du(r);
    return g0 * g0 * rpow(r);
  };
  auto crit_band = [&](double r) {
    return (1.0 - std::pow(cutoff_xi(r), ts)) * std::pow(u(r), ts) * rpow(r);
  };
  auto crit_tail = [&](double r) { return std::pow(u(r), ts) * rpow(r); };

  // exterior integral via r = 2/x
  auto tail = [&](const std::function<double(double)>& f) {
    return gl_integrate(
        [&](double x) { return f(2.0 / x) * 2.0 / (x * x); }, 1e-14, 1.0, 64);
  };

  BubbleDeficits d;
  d.grad_deficit =
      omega * (gl_integrate(grad_band, 1.0, 2.0, 64) - tail(grad_tail));
  d.crit_deficit =
      omega * (gl_integrate(crit_band, 1.0, 2.0, 64) + tail(crit_tail));
  return d;
}

NormCase lq_norm_case(int N, double q) {
  const double q_split = double(N) / (N - 2.0);
  if (q > q_split) return {N - 0.5 * (N - 2.0) * q, false};
  if (q == q_split) return {0.5 * N, true};
  return {0.5 * (N - 2.0) * q, false};
}

namespace {

ExponentFit fit_power_log(const std::vector<double>& eps,
                          const std::vector<double>& y) {
  // log y = a + b log eps + c log|log eps|
  const std::size_t n = eps.size();
  double M[3][3] = {};
  double rhs[3] = {};
  for (std::size_t i = 0; i < n; ++i) {
    const double le = std::log(eps[i]);
    const double x[3] = {1.0, le, std::log(std::abs(le))};
    const double ly = std::log(std::abs(y[i]));
    for (int a = 0; a < 3; ++a) {
      rhs[a] += x[a] * ly;
      for (int b = 0; b < 3; ++b) M[a][b] += x[a] * x[b];
    }
  }
  // 3x3 Gaussian elimination with partial pivoting
  int piv[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int best = col;
    for (int row = col + 1; row < 3; ++row)
      if (std::abs(M[row][col]) > std::abs(M[best][col])) best = row;
    std::swap(M[col], M[best]);
    std::swap(rhs[col], rhs[best]);
    std::swap(piv[col], piv[best]);
    for (int row = col + 1; row < 3; ++row) {
      const double f = M[row][col] / M[col][col];
      for (int k = col; k < 3; ++k) M[row][k] -= f * M[col][k];
      rhs[row] -= f * rhs[col];
    }
  }
  double sol[3];
  for (int row = 2; row >= 0; --row) {
    double s = rhs[row];
    for (int k = row + 1; k < 3; ++k) s -= M[row][k] * sol[k];
    sol[row] = s / M[row][row];
  }
  ExponentFit fit;
  fit.exponent = sol[1];
  fit.log_coeff = sol[2];
  fit.log_detected = sol[2] > 0.5;
  return fit;
}

void require_monotone(const std::vector<double>& y, const char* what) {
  bool inc = true, dec = true;
  for (std::size_t i = 1; i < y.size(); ++i) {
    if (std::abs(y[i]) > std::abs(y[i - 1])) dec = false;
    if (std::abs(y[i]) < std::abs(y[i - 1])) inc = false;
  }
  if (!inc && !dec)
    throw numeric_error(std::string("asymptotic_exponents: non-monotone data for ") + what);
}

}  // namespace

AsymptoticReport asymptotic_exponents(const std::vector<double>& eps_list,
                                      const ProblemParams& p) {
  if (eps_list.size() < 5)
    throw std::invalid_argument("asymptotic_exponents: need >= 5 scales");
  for (std::size_t i = 1; i < eps_list.size(); ++i)
    if (!(eps_list[i] < eps_list[i - 1]))
      throw std::invalid_argument("asymptotic_exponents: eps must decrease");
  if (eps_list.front() / eps_list.back() < 100.0)
    throw std::invalid_argument("asymptotic_exponents: need >= 2 decades");

  AsymptoticReport rep;
  rep.eps = eps_list;
  rep.norms.resize(eps_list.size());
  rep.deficits.resize(eps_list.size());
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    rep.norms[i] = bubble_norms(eps_list[i], p);
    rep.deficits[i] = bubble_deficits(eps_list[i], p);
  }

  auto col = [&](auto proj) {
    std::vector<double> y(eps_list.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = proj(i);
    return y;
  };
  const auto grad_d = col([&](std::size_t i) { return rep.deficits[i].grad_deficit; });
  const auto crit_d = col([&](std::size_t i) { return rep.deficits[i].crit_deficit; });
  const auto mass = col([&](std::size_t i) { return rep.norms[i].mass_sq; });
  const auto lq = col([&](std::size_t i) { return rep.norms[i].lq_pow; });
  require_monotone(grad_d, "grad deficit");
  require_monotone(crit_d, "crit deficit");
  require_monotone(mass, "mass");
  require_monotone(lq, "lq");

  rep.grad_deficit_fit = fit_power_log(eps_list, grad_d);
  rep.crit_deficit_fit = fit_power_log(eps_list, crit_d);
  rep.mass_fit = fit_power_log(eps_list, mass);
  rep.lq_fit = fit_power_log(eps_list, lq);
  return rep;
}

}  // namespace nlsnorm
