#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "nlsnorm/energy.hpp"
#include "nlsnorm/radial.hpp"

namespace nlsnorm {

struct ComplexField {
  GridPtr grid;
  std::vector<std::complex<double>> values;

  ComplexField() = default;
  explicit ComplexField(GridPtr g) : grid(std::move(g)), values(grid->size()) {}
  static ComplexField from_real(const RadialFunction& u);
};

double field_mass(const ComplexField& phi);
double field_grad_sq(const ComplexField& phi);
double field_energy(const ComplexField& phi, const ProblemParams& p);

struct EvolveOptions {
  double T = 10.0;
  double dt = 2e-4;
  int record_stride = 50;  // steps between recorded samples
  bool absorber = false;   // complex absorbing layer near rmax
  double absorber_width = 0.15;    // fraction of rmax
  double absorber_strength = 5.0;
  double blowup_grad_factor = 10.0;
  double blowup_amp_factor = 1e3;
  bool disable_critical = false;  // drop the |phi|^{2*-2} term
  bool disable_q = false;         // drop the mu |phi|^{q-2} term
  std::function<void(double, const ComplexField&)> observer;
};

struct TrajectoryStats {
  std::vector<double> times, mass, energy, grad_sq, sup_amp;
  bool blowup_detected = false;
  double blowup_time = -1.0;
  double variance0 = 0.0;  // || |x| phi0 ||_2^2, the virial hypothesis
};

// Strang splitting: half nonlinear phase rotation, Crank-Nicolson linear
// step on the weighted-symmetric Laplacian (exactly mass conserving), half
// nonlinear rotation. Halts early when the blow-up detector fires.
TrajectoryStats evolve(const ComplexField& phi0, const ProblemParams& p,
                       const EvolveOptions& o);

struct ConservationReport {
  double mass_drift_rate = 0.0;    // max relative drift per unit time
  double energy_drift_rate = 0.0;
  int samples = 0;                 // pre-blow-up window size
};
ConservationReport conservation_check(const TrajectoryStats& s);

struct InstabilityRow {
  double dilation = 0.0;
  double energy0 = 0.0;   // F_mu of the dilated datum, below F_mu(v_c)
  double s_plus0 = 0.0;   // fiber maximum of the datum, 1/dilation
  bool blew_up = false;
  double blowup_time = -1.0;
};

// Evolves (v_c)_t for each dilation t > 1 and requires blow-up detection for
// every entry (check_failure otherwise, with the offending dilation).
std::vector<InstabilityRow> instability_experiment(
    const ProblemParams& p, const RadialFunction& v_c,
    const std::vector<double>& dilations, const EvolveOptions& base);

struct StabilityReport {
  double max_h1_distance = 0.0;  // sup_t min_theta ||phi - e^{i theta} u||_H1
  double h1_norm0 = 0.0;
  double horizon = 0.0;
};

// Evolves the ground state and tracks the phase-minimized H1 distance to it.
StabilityReport ground_state_proximity(const ProblemParams& p,
                                       const RadialFunction& u_c, double T,
                                       EvolveOptions o = {});

// Newton-polishes a profile into a discrete standing wave of the dynamics
// operator (used to test modulus invariance without operator-mismatch bias).
RadialFunction dynamics_eigenstate(const RadialFunction& u0,
                                   const ProblemParams& p);

}  // namespace nlsnorm
