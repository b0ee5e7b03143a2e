#pragma once

#include <functional>
#include <vector>

#include "nlsnorm/bubble.hpp"
#include "nlsnorm/energy.hpp"
#include "nlsnorm/radial.hpp"
#include "nlsnorm/solvers.hpp"

namespace nlsnorm {

struct TwoCenterConfig {
  double separation = 0.0;  // d = |y| between the two centers
  int angular_nodes = 48;   // polar quadrature order, >= 16
};

// int_{R^N} K(f(|x - y|), g(|x|)) dx by reduction to an (r, theta) quadrature
// with the (N-2)-sphere factor. The radial rule is g's grid (so g's core
// must be resolved there); f is evaluated by cubic interpolation.
double two_center_integral(const std::function<double(double, double)>& K,
                           const RadialFunction& f, const RadialFunction& g,
                           const TwoCenterConfig& cfg);

// int_{R^N} grad f(x - y) . grad g(x) dx for radial f, g.
double two_center_grad_dot(const RadialFunction& f, const RadialFunction& g,
                           const TwoCenterConfig& cfg);

// The explicit one-variable bounds of the path construction:
//   t0: largest t below which t ib + t^2/2 ||grad U||^2 stays under
//       S^{N/2} / (2N),
//   t1: smallest t past which t ib + t^2/2 ||grad U||^2 - t^{2*}/2* ||U||^{2*}
//       has dropped below 2 m(c) (and stays below).
struct PathThresholds {
  double t0 = 0.0, t1 = 0.0;
  double interaction_bound = 1.0;
};
PathThresholds thresholds_t0_t1(double interaction_bound,
                                const BubbleNorms& bubble, double m_c,
                                const ProblemParams& p);

// Smallest sampled separation making both interaction integrals admissible:
//   2 int u(x-y) U(x) dx <= t1 ||U||_2^2  and  int grad u . grad U <= ||U||_2^2.
struct TranslationResult {
  double separation = 0.0;
  double mass_overlap = 0.0;  // int u(x-y) U(x) dx at the returned d
  double grad_overlap = 0.0;  // int grad u(x-y) . grad U(x) dx
};
TranslationResult find_translation(const RadialFunction& u_c,
                                   const RadialFunction& U_eps, double t1,
                                   const ProblemParams& p,
                                   int angular_nodes = 48,
                                   double d_cap = 0.0);

struct PathReport {
  double eps = 0.0;
  double t0 = 0.0, t1 = 0.0;
  double c_n = 0.0;
  double separation = 0.0;
  double m_c = 0.0, m_cn = 0.0;
  std::vector<double> t_nodes;
  std::vector<double> energies;              // F_mu(gamma(t)), exact
  std::vector<double> masses;                // ||gamma(t)||_2^2
  std::vector<double> superadditive_bound;   // the one-sided comparison
  double max_energy = 0.0;
  double argmax_t = 0.0;
  double bound = 0.0;  // m(c) + S^{N/2}/N
  double gap = 0.0;    // bound - max_energy
  bool below_bound = false;
};

// Assembles gamma(t) = u_{c_n}(. - y) + t U_eps on [0, t1], evaluates
// F_mu(gamma(t)) exactly (all cross terms through the two-center quadrature),
// verifies the mass window c_n <= ||gamma(t)||^2 <= c, and reports the peak
// against m(c) + S^{N/2}/N.
PathReport build_and_check_path(const ProblemParams& p, double eps,
                                GridPtr solver_grid,
                                const SolverOptions& sopts = {},
                                int angular_nodes = 48,
                                int t_samples = 64);

struct BattleRow {
  double eps = 0.0;
  double mass_term = 0.0;      // (2 t1^2 d + t1) ||U||_2^2
  double lq_term = 0.0;        // (mu t0^q / q) ||U||_q^q
  double grad_term = 0.0;      // max_t [t^2/2 A - t^{2*}/2* C] - S^{N/2}/N
  double combination = 0.0;    // mass_term - lq_term + grad_term
};

struct BattleReport {
  double t0 = 0.0, t1 = 0.0;
  double lipschitz_d = 0.0;
  std::vector<BattleRow> rows;
  double crossover_eps = 0.0;  // largest eps below which all rows are negative
};

// The competition of Cases 1-2: mass term against the q-term plus the
// gradient deficit, per eps. check_failure when the combination never turns
// negative in range (the N = 3 situation).
BattleReport exponent_battle(const ProblemParams& p,
                             const std::vector<double>& eps_list,
                             GridPtr solver_grid,
                             const SolverOptions& sopts = {});

}  // namespace nlsnorm
