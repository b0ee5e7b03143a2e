#include "nlsnorm/pathlab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlsnorm/errors.hpp"
#include "nlsnorm/parallel.hpp"
#include "nlsnorm/quad.hpp"

namespace nlsnorm {

namespace {

double sphere_area_nm2(int N) {
  // area of the unit (N-2)-sphere, the azimuthal factor of the reduction
  return 2.0 * std::pow(std::numbers::pi, 0.5 * (N - 1)) /
         std::tgamma(0.5 * (N - 1));
}

struct AngularRule {
  std::vector<double> cosines;
  std::vector<double> weights;  // GL weight * sin^{N-2} theta
};

AngularRule angular_rule(int N, int nodes) {
  if (nodes < 16)
    throw std::invalid_argument("two_center: angular_nodes >= 16 required");
  const GaussRule& gl = gauss_legendre(nodes);
  AngularRule rule;
  rule.cosines.resize(nodes);
  rule.weights.resize(nodes);
  const double half = 0.5 * std::numbers::pi;
  for (int j = 0; j < nodes; ++j) {
    const double theta = half * (1.0 + gl.x[j]);
    rule.cosines[j] = std::cos(theta);
    rule.weights[j] = half * gl.w[j] * std::pow(std::sin(theta), N - 2);
  }
  return rule;
}

double other_center_radius(double r, double d, double cosine) {
  // |x - y| with |x| = r, |y| = d, angle theta between them
  const double diff = r - d;
  const double s2 = 0.5 * (1.0 - cosine);  // sin^2(theta/2)
  return std::sqrt(diff * diff + 4.0 * r * d * s2);
}

template <class Kernel>
double reduce_two_center(const Kernel& K, const RadialGrid& rg, double d,
                         int angular_nodes) {
  const AngularRule ang = angular_rule(rg.dim, angular_nodes);
  const AngularRule ang_half = angular_rule(rg.dim, angular_nodes / 2);
  double full = 0.0, half = 0.0;
  for (std::size_t k = 0; k < rg.size(); ++k) {
    const double r = rg.r[k];
    if (rg.w[k] == 0.0) continue;
    double af = 0.0;
    for (std::size_t j = 0; j < ang.cosines.size(); ++j)
      af += ang.weights[j] * K(r, other_center_radius(r, d, ang.cosines[j]),
                               ang.cosines[j]);
    double ah = 0.0;
    for (std::size_t j = 0; j < ang_half.cosines.size(); ++j)
      ah += ang_half.weights[j] *
            K(r, other_center_radius(r, d, ang_half.cosines[j]),
              ang_half.cosines[j]);
    full += rg.w[k] * af;
    half += rg.w[k] * ah;
  }
  const double scale = sphere_area_nm2(rg.dim);
  if (std::abs(full - half) > 1e-5 * std::max(std::abs(full), 1e-300) + 1e-14)
    throw numeric_error("two_center: angular refinement estimate above tolerance");
  if (std::isnan(full)) throw numeric_error("two_center: NaN integrand");
  return scale * full;
}

}  // namespace

double two_center_integral(const std::function<double(double, double)>& K,
                           const RadialFunction& f, const RadialFunction& g,
                           const TwoCenterConfig& cfg) {
  if (f.grid->dim != g.grid->dim)
    throw std::invalid_argument("two_center: dimension mismatch");
  if (cfg.separation < 0.0)
    throw std::invalid_argument("two_center: separation >= 0 required");
  RadialInterpolant fi(f);
  RadialInterpolant gi(g);
  return reduce_two_center(
      [&](double r, double rho, double) { return K(fi(rho), gi(r)); },
      *g.grid, cfg.separation, cfg.angular_nodes);
}

double two_center_grad_dot(const RadialFunction& f, const RadialFunction& g,
                           const TwoCenterConfig& cfg) {
  if (f.grid->dim != g.grid->dim)
    throw std::invalid_argument("two_center: dimension mismatch");
  RadialFunction df(f.grid, radial_derivative(f));
  RadialFunction dg(g.grid, radial_derivative(g));
  RadialInterpolant dfi(df);
  RadialInterpolant dgi(dg);
  const double d = cfg.separation;
  // grad f(x-y) . grad g(x) = f'(rho) g'(r) (r - d cos theta) / rho
  return reduce_two_center(
      [&](double r, double rho, double cosine) {
        if (rho < 1e-300) return 0.0;
        return dfi(rho) * dgi(r) * (r - d * cosine) / rho;
      },
      *g.grid, d, cfg.angular_nodes);
}

PathThresholds thresholds_t0_t1(double interaction_bound,
                                const BubbleNorms& bubble, double m_c,
                                const ProblemParams& p) {
  if (!(interaction_bound <= 1.0))
    throw std::invalid_argument("thresholds: interaction bound must be <= 1");
  if (!(m_c < 0.0)) throw std::invalid_argument("thresholds: m(c) < 0 required");
  const double S = sobolev_constant(p.N);
  const double target0 = std::pow(S, 0.5 * p.N) / (2.0 * p.N);
  const double A = bubble.grad_sq, C = bubble.crit_pow;
  const double ts = p.two_star();
  const double ib = interaction_bound;

  auto ub2 = [&](double t) { return t * ib + 0.5 * t * t * A; };
  auto ub3 = [&](double t) {
    return ub2(t) - std::pow(t, ts) / ts * C;
  };

  PathThresholds th;
  th.interaction_bound = ib;
  // ub2 is increasing from 0
  double hi = 1.0;
  while (ub2(hi) < target0) hi *= 2.0;
  th.t0 = bisect([&](double t) { return ub2(t) - target0; }, 0.0, hi, 1e-12);

  // ub3 eventually decreases to -inf; find its peak, then the crossing
  double peak = std::pow(A / C, 1.0 / (ts - 2.0));  // peak of the two-term part
  while (ub3(peak * 2.0) > ub3(peak)) peak *= 2.0;
  double t_hi = peak;
  double cap = 1e6;
  while (ub3(t_hi) > 2.0 * m_c) {
    t_hi *= 2.0;
    if (t_hi > cap) throw search_failure("thresholds: no t1 below cap");
  }
  th.t1 = bisect([&](double t) { return ub3(t) - 2.0 * m_c; }, peak, t_hi, 1e-12);
  if (!(th.t0 > 0.0 && th.t1 > th.t0))
    throw search_failure("thresholds: t0 < t1 ordering failed");
  return th;
}

TranslationResult find_translation(const RadialFunction& u_c,
                                   const RadialFunction& U_eps, double t1,
                                   const ProblemParams& p, int angular_nodes,
                                   double d_cap) {
  if (!(t1 > 0.0)) throw std::invalid_argument("find_translation: t1 > 0");
  if (u_c.grid->dim != p.N)
    throw std::invalid_argument("find_translation: dimension mismatch");
  const double mass_u = lp_norm_pow(U_eps, 2.0);
  if (d_cap <= 0.0) d_cap = u_c.grid->rmax() + 2.0 + 1.0;
  auto overlap = [&](double d) {
    TwoCenterConfig cfg{d, angular_nodes};
    TranslationResult r;
    r.separation = d;
    r.mass_overlap = two_center_integral(
        [](double a, double b) { return a * b; }, u_c, U_eps, cfg);
    r.grad_overlap = two_center_grad_dot(u_c, U_eps, cfg);
    return r;
  };
  for (double d = 2.5; d <= d_cap; d *= 1.2) {
    auto r = overlap(d);
    if (2.0 * r.mass_overlap <= t1 * mass_u && r.grad_overlap <= mass_u)
      return r;
  }
  throw search_failure("find_translation: no admissible separation below cap");
}

PathReport build_and_check_path(const ProblemParams& p, double eps,
                                GridPtr solver_grid, const SolverOptions& sopts,
                                int angular_nodes, int t_samples) {
  PathReport rep;
  rep.eps = eps;
  const double S = sobolev_constant(p.N);
  const double sn2 = std::pow(S, 0.5 * p.N);

  // ground state at the full mass, thresholds from the limiting bounds
  auto gs_c = solve_ground_state(p, solver_grid, sopts);
  rep.m_c = gs_c.m_of_c;
  const BubbleNorms un = bubble_norms(eps, p);
  const auto th = thresholds_t0_t1(1.0, un, rep.m_c, p);
  rep.t0 = th.t0;
  rep.t1 = th.t1;

  // the reduced mass c_n = c - 2 t1^2 ||U||_2^2 must stay in [c/2, c)
  const double c_n = p.c - 2.0 * th.t1 * th.t1 * un.mass_sq;
  if (!(c_n >= 0.5 * p.c && c_n < p.c))
    throw search_failure("build_and_check_path: eps too large, c_n left [c/2, c)");
  rep.c_n = c_n;

  // the reduced-mass soliton is slightly wider, so its box is re-derived
  const auto p_n = ProblemParams::make(p.N, p.mu, p.q, c_n);
  auto grid_n = recommended_ground_grid(p_n, solver_grid->intervals(), 4.0);
  auto gs_cn =
      solve_ground_state(p_n, grid_n, sopts, &gs_c.certificate.profile);
  rep.m_cn = gs_cn.m_of_c;
  const RadialFunction& ucn = gs_cn.certificate.profile;

  // bubble on its own core-resolving grid, which also carries the 2D radial
  // quadrature (the integrands below vanish where U does)
  auto bub_grid = make_grid(p.N, 2.0, 8192, GridStretch::graded, 4.0);
  RadialFunction U = truncated_bubble(eps, bub_grid, p);
  const double a_u = grad_norm_sq(U);
  const double b_u = lp_norm_pow(U, p.q);
  const double c_u = lp_norm_pow(U, p.two_star());
  const double mass_u = lp_norm_pow(U, 2.0);

  const auto tr = find_translation(ucn, U, th.t1, p, angular_nodes);
  rep.separation = tr.separation;

  const double a_ucn = grad_norm_sq(ucn);
  const double b_ucn = lp_norm_pow(ucn, p.q);
  const double c_ucn = lp_norm_pow(ucn, p.two_star());
  const double ts = p.two_star();

  // Chebyshev nodes on [0, t1]
  rep.t_nodes.resize(t_samples);
  for (int j = 0; j < t_samples; ++j)
    rep.t_nodes[j] =
        0.5 * th.t1 * (1.0 - std::cos(std::numbers::pi * j / (t_samples - 1)));

  TwoCenterConfig cfg{tr.separation, angular_nodes};
  auto delta_pow = [&](double t, double pw) {
    // int |u(x-y) + t U|^pw - |u(x-y)|^pw over the bubble support
    return two_center_integral(
        [t, pw](double a, double b) {
          if (b == 0.0) return 0.0;
          return std::pow(std::abs(a + t * b), pw) - std::pow(std::abs(a), pw);
        },
        ucn, U, cfg);
  };
  auto exact_energy = [&](double t) {
    const double A = a_ucn + 2.0 * t * tr.grad_overlap + t * t * a_u;
    const double B = b_ucn + delta_pow(t, p.q);
    const double C = c_ucn + delta_pow(t, ts);
    return 0.5 * A - p.mu / p.q * B - C / ts;
  };

  rep.energies.resize(t_samples);
  rep.masses.resize(t_samples);
  rep.superadditive_bound.resize(t_samples);
  parallel_for(t_samples, [&](int j) {
    const double t = rep.t_nodes[j];
    rep.energies[j] = exact_energy(t);
    rep.masses[j] = c_n + 2.0 * t * tr.mass_overlap + t * t * mass_u;
    rep.superadditive_bound[j] = rep.m_cn + t * tr.grad_overlap +
                                 0.5 * t * t * a_u -
                                 p.mu / p.q * std::pow(t, p.q) * b_u -
                                 std::pow(t, ts) / ts * c_u;
  });

  // mass window along the whole path
  const double mass_tol = 1e-6 * p.c + 1e-4 * (p.c - c_n);
  for (int j = 0; j < t_samples; ++j)
    if (rep.masses[j] < c_n - mass_tol || rep.masses[j] > p.c + mass_tol)
      throw check_failure("build_and_check_path: mass window violated");

  int jmax = 0;
  for (int j = 1; j < t_samples; ++j)
    if (rep.energies[j] > rep.energies[jmax]) jmax = j;

  // golden-section refinement around the discrete argmax
  double lo = rep.t_nodes[std::max(0, jmax - 1)];
  double hi = rep.t_nodes[std::min(t_samples - 1, jmax + 1)];
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = exact_energy(x1), f2 = exact_energy(x2);
  for (int it = 0; it < 40 && hi - lo > 1e-7 * th.t1; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = exact_energy(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = exact_energy(x1);
    }
  }
  rep.argmax_t = 0.5 * (lo + hi);
  rep.max_energy = std::max({rep.energies[jmax], f1, f2});

  rep.bound = rep.m_c + sn2 / p.N;
  rep.gap = rep.bound - rep.max_energy;
  rep.below_bound = rep.gap > 0.0;
  return rep;
}

BattleReport exponent_battle(const ProblemParams& p,
                             const std::vector<double>& eps_list,
                             GridPtr solver_grid, const SolverOptions& sopts) {
  if (p.N < 3 || p.N > 6)
    throw std::invalid_argument("exponent_battle: N in {3,...,6} expected");
  if (eps_list.size() < 3 ||
      eps_list.front() / eps_list.back() < 100.0)
    throw std::invalid_argument("exponent_battle: eps list must span >= 2 decades");

  BattleReport rep;
  const double S = sobolev_constant(p.N);
  const double sn2 = std::pow(S, 0.5 * p.N);

  // Lipschitz constant of c -> m(c) from a three-point curve; the box is
  // re-derived for the most dilute point
  const double cs[3] = {0.5 * p.c, 0.75 * p.c, p.c};
  auto mgrid = recommended_ground_grid(
      ProblemParams::make(p.N, p.mu, p.q, cs[0]), solver_grid->intervals(), 4.0);
  auto mc = m_curve(p, std::span<const double>(cs, 3), mgrid, sopts);
  rep.lipschitz_d = mc.lipschitz_d;
  const double m_c = mc.points.back().m;

  // thresholds from the limiting bubble (A, C -> S^{N/2})
  BubbleNorms limit{sn2, 0.0, 0.0, sn2};
  const auto th = thresholds_t0_t1(1.0, limit, m_c, p);
  rep.t0 = th.t0;
  rep.t1 = th.t1;

  rep.rows.resize(eps_list.size());
  parallel_for(static_cast<int>(eps_list.size()), [&](int i) {
    const double eps = eps_list[i];
    BattleRow row;
    row.eps = eps;
    const BubbleNorms un = bubble_norms(eps, p);
    const BubbleDeficits dd = bubble_deficits(eps, p);
    row.mass_term =
        (2.0 * th.t1 * th.t1 * rep.lipschitz_d + th.t1) * un.mass_sq;
    row.lq_term = p.mu * std::pow(th.t0, p.q) / p.q * un.lq_pow;
    // max_t [t^2/2 A - t^{2*}/2* C] = A^{N/2} C^{-(N-2)/2} / N; its deviation
    // from S^{N/2}/N is evaluated cancellation-free from the deficits.
    const double a = dd.grad_deficit / sn2;
    const double b = dd.crit_deficit / sn2;
    row.grad_term = sn2 / p.N *
                    std::expm1(0.5 * p.N * std::log1p(a) -
                               0.5 * (p.N - 2.0) * std::log1p(-b));
    row.combination = row.mass_term - row.lq_term + row.grad_term;
    rep.rows[i] = row;
  });

  // largest eps below which every sampled combination is negative
  int first_bad = -1;  // smallest index (largest eps) of the negative run
  for (int i = static_cast<int>(rep.rows.size()) - 1; i >= 0; --i) {
    if (rep.rows[i].combination < 0.0)
      first_bad = i;
    else
      break;
  }
  if (first_bad < 0)
    throw check_failure(
        "exponent_battle: combination never negative in range (no crossover)");
  rep.crossover_eps = rep.rows[first_bad].eps;
  return rep;
}

}  // namespace nlsnorm
