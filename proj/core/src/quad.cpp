#include "nlsnorm/quad.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "nlsnorm/errors.hpp"

namespace nlsnorm {

static GaussRule compute_gauss(int n) {
  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  // Newton iteration on P_n with the Chebyshev initial guess.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    rule.x[i] = -z;
    rule.x[n - 1 - i] = z;
    rule.w[i] = rule.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return rule;
}

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1");
  static std::map<int, GaussRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss(n)).first;
  return it->second;
}

double gl_integrate(const std::function<double(double)>& f, double a, double b,
                    int n) {
  const GaussRule& g = gauss_legendre(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += g.w[i] * f(mid + half * g.x[i]);
  return half * s;
}

double panel_integrate(const std::function<double(double)>& f, double a,
                       double b, double scale, int n_per_panel) {
  if (!(b > a)) return 0.0;
  if (!(scale > 0.0)) throw std::invalid_argument("panel_integrate: scale > 0");
  double s = 0.0;
  double left = a;
  double width = std::min(scale, b - a);
  while (left < b) {
    double right = std::min(left + width, b);
    s += gl_integrate(f, left, right, n_per_panel);
    left = right;
    width *= 2.0;
  }
  return s;
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol_rel, int max_iter) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) throw numeric_error("bisect: root not bracketed");
  for (int i = 0; i < max_iter; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
    if (hi - lo <= tol_rel * std::max({1.0, std::abs(lo), std::abs(hi)})) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace nlsnorm
