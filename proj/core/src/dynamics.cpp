#include "nlsnorm/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "nlsnorm/errors.hpp"
#include "nlsnorm/fibermap.hpp"
#include "nlsnorm/tridiag.hpp"
#include "operators.hpp"

namespace nlsnorm {

ComplexField ComplexField::from_real(const RadialFunction& u) {
  ComplexField phi(u.grid);
  for (std::size_t k = 0; k < u.values.size(); ++k) phi.values[k] = u.values[k];
  return phi;
}

double field_mass(const ComplexField& phi) {
  const RadialGrid& g = *phi.grid;
  double s = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k)
    s += g.w[k] * std::norm(phi.values[k]);
  return g.sphere_area * s;
}

double field_grad_sq(const ComplexField& phi) {
  const RadialGrid& g = *phi.grid;
  double s = 0.0;
  for (int k = 0; k < g.intervals(); ++k) {
    const double h = g.r[k + 1] - g.r[k];
    s += g.iw[k] * std::norm(phi.values[k + 1] - phi.values[k]) / (h * h);
  }
  return g.sphere_area * s;
}

static double field_lp_pow(const ComplexField& phi, double p) {
  const RadialGrid& g = *phi.grid;
  double s = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k)
    s += g.w[k] * std::pow(std::abs(phi.values[k]), p);
  return g.sphere_area * s;
}

double field_energy(const ComplexField& phi, const ProblemParams& p) {
  return 0.5 * field_grad_sq(phi) - p.mu / p.q * field_lp_pow(phi, p.q) -
         field_lp_pow(phi, p.two_star()) / p.two_star();
}

namespace {

struct CnStepper {
  // (I - i dt/2 L) phi^{n+1} = (I + i dt/2 L) phi^n on the Dirichlet
  // subspace; L is symmetric in the w-inner product, so the step is unitary
  // there and the quadrature mass is conserved to rounding.
  std::vector<std::complex<double>> lo, di, up;  // left matrix
  Tridiag L;
  double half_dt;
  std::size_t n;

  CnStepper(const RadialGrid& g, double dt)
      : L(detail::laplacian_sym(g)), half_dt(0.5 * dt), n(g.size() - 1) {
    lo.resize(n);
    di.resize(n);
    up.resize(n);
    const std::complex<double> ihalf(0.0, half_dt);
    for (std::size_t k = 0; k < n; ++k) {
      lo[k] = -ihalf * L.lo[k];
      di[k] = 1.0 - ihalf * L.di[k];
      up[k] = (k + 1 < n) ? -ihalf * L.up[k] : 0.0;
    }
  }

  void step(std::vector<std::complex<double>>& phi) const {
    const std::complex<double> ihalf(0.0, half_dt);
    std::vector<std::complex<double>> rhs(n);
    for (std::size_t k = 0; k < n; ++k) {
      std::complex<double> lphi = L.di[k] * phi[k];
      if (k > 0) lphi += L.lo[k] * phi[k - 1];
      if (k + 1 < n) lphi += L.up[k] * phi[k + 1];
      rhs[k] = phi[k] + ihalf * lphi;
    }
    auto out = solve_tridiag_cplx(lo, di, up, std::move(rhs));
    for (std::size_t k = 0; k < n; ++k) phi[k] = out[k];
    phi[n] = 0.0;
  }
};

}  // namespace

TrajectoryStats evolve(const ComplexField& phi0, const ProblemParams& p,
                       const EvolveOptions& o) {
  if (!(o.dt > 0.0) || !(o.T > 0.0))
    throw std::invalid_argument("evolve: T > 0 and dt > 0 required");
  const RadialGrid& g = *phi0.grid;
  const double ts = p.two_star();
  const double mu = o.disable_q ? 0.0 : p.mu;

  std::vector<double> absorb(g.size(), 0.0);
  if (o.absorber) {
    const double r0 = g.rmax() * (1.0 - o.absorber_width);
    for (std::size_t k = 0; k < g.size(); ++k)
      if (g.r[k] > r0) {
        const double x = (g.r[k] - r0) / (g.rmax() - r0);
        absorb[k] = o.absorber_strength * x * x;
      }
  }

  auto half_nonlinear = [&](std::vector<std::complex<double>>& v, double dth) {
    for (std::size_t k = 0; k < v.size(); ++k) {
      const double a = std::abs(v[k]);
      double pot = 0.0;
      if (a > 0.0) {
        if (mu > 0.0) pot += mu * std::pow(a, p.q - 2.0);
        if (!o.disable_critical) pot += std::pow(a, ts - 2.0);
      }
      v[k] *= std::polar(std::exp(-dth * absorb[k]), dth * pot);
    }
  };

  CnStepper cn(g, o.dt);
  ComplexField phi = phi0;

  TrajectoryStats st;
  {
    double s = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
      s += g.w[k] * g.r[k] * g.r[k] * std::norm(phi.values[k]);
    st.variance0 = g.sphere_area * s;
  }
  const double grad0 = field_grad_sq(phi);
  double amp0 = 0.0;
  for (auto& v : phi.values) amp0 = std::max(amp0, std::abs(v));

  const long steps = std::lround(o.T / o.dt);
  auto record = [&](double t) {
    st.times.push_back(t);
    st.mass.push_back(field_mass(phi));
    st.energy.push_back(field_energy(phi, p));
    st.grad_sq.push_back(field_grad_sq(phi));
    double amp = 0.0;
    for (auto& v : phi.values) amp = std::max(amp, std::abs(v));
    st.sup_amp.push_back(amp);
    if (o.observer) o.observer(t, phi);
    return amp;
  };
  record(0.0);

  for (long n = 0; n < steps; ++n) {
    half_nonlinear(phi.values, 0.5 * o.dt);
    cn.step(phi.values);
    half_nonlinear(phi.values, 0.5 * o.dt);
    const double t = (n + 1) * o.dt;
    if ((n + 1) % o.record_stride == 0 || n + 1 == steps) {
      const double amp = record(t);
      const double gs = st.grad_sq.back();
      if (std::isnan(gs) || std::isnan(amp)) {
        if (amp > o.blowup_amp_factor * amp0 ||
            gs > o.blowup_grad_factor * grad0 || std::isnan(gs)) {
          st.blowup_detected = true;
          st.blowup_time = t;
          break;
        }
        throw numeric_error("evolve: NaN without blow-up detection");
      }
      if (gs >= o.blowup_grad_factor * grad0 ||
          amp >= o.blowup_amp_factor * amp0) {
        st.blowup_detected = true;
        st.blowup_time = t;
        break;
      }
    }
  }
  return st;
}

ConservationReport conservation_check(const TrajectoryStats& s) {
  ConservationReport rep;
  // post-blow-up frames are excluded by construction: recording stops at
  // detection, and the detection frame itself is dropped here
  std::size_t n = s.times.size();
  if (s.blowup_detected && n > 0) --n;
  rep.samples = static_cast<int>(n);
  for (std::size_t i = 1; i < n; ++i) {
    const double t = s.times[i];
    if (t <= 0.0) continue;
    rep.mass_drift_rate = std::max(
        rep.mass_drift_rate, std::abs(s.mass[i] / s.mass[0] - 1.0) / t);
    rep.energy_drift_rate =
        std::max(rep.energy_drift_rate,
                 std::abs((s.energy[i] - s.energy[0]) /
                          std::max(std::abs(s.energy[0]), 1e-300)) /
                     t);
  }
  return rep;
}

std::vector<InstabilityRow> instability_experiment(
    const ProblemParams& p, const RadialFunction& v_c,
    const std::vector<double>& dilations, const EvolveOptions& base) {
  const double level = energy_F(v_c, p);
  if (!(level > 0.0))
    throw std::invalid_argument(
        "instability_experiment: v_c must sit on the positive-energy branch");
  std::vector<InstabilityRow> rows(dilations.size());
  std::string offending;
  for (std::size_t i = 0; i < dilations.size(); ++i) {
    const double t = dilations[i];
    if (!(t > 1.0))
      throw std::invalid_argument("instability_experiment: dilations must be > 1");
    InstabilityRow& row = rows[i];
    row.dilation = t;
    RadialFunction datum = rescale(v_c, t);
    row.energy0 = energy_F(datum, p);
    row.s_plus0 = critical_points(FiberCoeffs::of(datum, p), p).s_plus;
    auto st = evolve(ComplexField::from_real(datum), p, base);
    row.blew_up = st.blowup_detected;
    row.blowup_time = st.blowup_time;
    if (!row.blew_up && offending.empty())
      offending = std::to_string(t);
  }
  if (!offending.empty())
    throw check_failure("instability_experiment: no blow-up before T_max at dilation " +
                        offending);
  return rows;
}

StabilityReport ground_state_proximity(const ProblemParams& p,
                                       const RadialFunction& u_c, double T,
                                       EvolveOptions o) {
  const RadialGrid& g = *u_c.grid;
  StabilityReport rep;
  rep.horizon = T;
  rep.h1_norm0 = std::sqrt(mass_sq(u_c) + grad_norm_sq(u_c));
  o.T = T;
  o.observer = [&](double t, const ComplexField& phi) {
    if (t == 0.0) return;
    // phase minimizing the L2 distance
    std::complex<double> inner = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
      inner += g.w[k] * phi.values[k] * u_c.values[k];
    const double theta = std::arg(inner);
    const std::complex<double> rot = std::polar(1.0, -theta);
    double l2 = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
      l2 += g.w[k] * std::norm(rot * phi.values[k] - u_c.values[k]);
    double h1 = 0.0;
    for (int k = 0; k < g.intervals(); ++k) {
      const double h = g.r[k + 1] - g.r[k];
      const std::complex<double> dphi =
          rot * (phi.values[k + 1] - phi.values[k]);
      const double dref = u_c.values[k + 1] - u_c.values[k];
      h1 += g.iw[k] * std::norm(dphi - dref) / (h * h);
    }
    const double dist = std::sqrt(g.sphere_area * (l2 + h1));
    rep.max_h1_distance = std::max(rep.max_h1_distance, dist);
  };
  evolve(ComplexField::from_real(u_c), p, o);
  return rep;
}

RadialFunction dynamics_eigenstate(const RadialFunction& u0,
                                   const ProblemParams& p) {
  // bordered Newton on the weighted-symmetric operator with the mass pinned
  const RadialGrid& g = *u0.grid;
  const std::size_t n = g.size();
  const Tridiag L = detail::laplacian_sym(g);
  const double ts = p.two_star();
  RadialFunction u = u0;
  double lambda = lagrange_multiplier(u, p);

  auto residual = [&](const RadialFunction& v, double lam) {
    auto f = L.apply(v.values);
    std::vector<double> F(n);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double a = std::abs(v.values[k]);
      F[k] = -f[k] - lam * v.values[k] -
             p.mu * std::copysign(std::pow(a, p.q - 1.0), v.values[k]) -
             std::copysign(std::pow(a, ts - 1.0), v.values[k]);
    }
    F[n - 1] = v.values[n - 1];
    return F;
  };
  auto norm_of = [&](const std::vector<double>& F, double mres) {
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) s += g.w[k] * F[k] * F[k];
    return std::sqrt(g.sphere_area * s) + std::abs(mres) / p.c;
  };

  for (int it = 0; it < 50; ++it) {
    auto F = residual(u, lambda);
    const double mres = mass_sq(u) - p.c;
    const double m0 = norm_of(F, mres);
    if (m0 < 1e-12) break;
    Tridiag J(n);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      J.lo[k] = -L.lo[k];
      J.up[k] = -L.up[k];
      const double a = std::abs(u.values[k]);
      J.di[k] = -L.di[k] - lambda - p.mu * (p.q - 1.0) * std::pow(a, p.q - 2.0) -
                (ts - 1.0) * std::pow(a, ts - 2.0);
    }
    J.di[n - 1] = 1.0;
    std::vector<double> negF(n);
    for (std::size_t k = 0; k < n; ++k) negF[k] = -F[k];
    auto y1 = solve_tridiag(J, negF);
    auto ucol = u.values;
    ucol[n - 1] = 0.0;
    auto y2 = solve_tridiag(J, ucol);
    double num = -mres, den = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double gk = 2.0 * g.sphere_area * g.w[k] * u.values[k];
      num -= gk * y1[k];
      den += gk * y2[k];
    }
    const double dlam = num / den;
    double alpha = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 30; ++bt) {
      RadialFunction trial = u;
      for (std::size_t k = 0; k < n; ++k)
        trial.values[k] += alpha * (y1[k] + dlam * y2[k]);
      auto Ft = residual(trial, lambda + alpha * dlam);
      if (norm_of(Ft, mass_sq(trial) - p.c) < m0) {
        u = trial;
        lambda += alpha * dlam;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;  // rounding floor reached
  }
  return u;
}

}  // namespace nlsnorm
