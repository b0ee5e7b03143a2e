#pragma once

#include <functional>
#include <vector>

namespace nlsnorm {

struct GaussRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

// Gauss-Legendre nodes/weights; cached per n.
const GaussRule& gauss_legendre(int n);

// Gauss-Legendre on [a, b].
double gl_integrate(const std::function<double(double)>& f, double a, double b,
                    int n = 32);

// Composite Gauss-Legendre on [a, b] with geometric panels refined toward a,
// starting at width ~ scale. Resolves integrands whose variation length is
// ~ scale near the left endpoint; machine accuracy for analytic integrands.
double panel_integrate(const std::function<double(double)>& f, double a,
                       double b, double scale, int n_per_panel = 24);

// One-dimensional bisection for a continuous function with f(lo) f(hi) < 0.
// Tolerance is relative on the bracket width.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol_rel = 1e-12, int max_iter = 200);

}  // namespace nlsnorm
