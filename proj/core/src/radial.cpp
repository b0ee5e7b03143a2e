#include "nlsnorm/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nlsnorm/errors.hpp"

namespace nlsnorm {

namespace {

// Lagrange parabola through (x0,y0),(x1,y1),(x2,y2) via divided differences.
struct Parabola {
  double x0, x1, d1, d2;
  Parabola(double a, double fa, double b, double fb, double c, double fc)
      : x0(a), x1(b) {
    d1 = (fb - fa) / (b - a);
    d2 = ((fc - fb) / (c - b) - d1) / (c - a);
  }
  double deriv(double x) const { return d1 + d2 * (2.0 * x - x0 - x1); }
  double second() const { return 2.0 * d2; }
};

}  // namespace

GridPtr make_grid(int dim, double rmax, int intervals, GridStretch stretch,
                  double grade) {
  if (dim < 3) throw std::invalid_argument("make_grid: dimension must be >= 3");
  if (!(rmax > 0.0)) throw std::invalid_argument("make_grid: R_max must be positive");
  if (intervals < 2) throw std::invalid_argument("make_grid: need at least 2 intervals");
  const double p = (stretch == GridStretch::uniform) ? 1.0 : grade;
  if (!(p >= 1.0)) throw std::invalid_argument("make_grid: grade must be >= 1");

  auto g = std::make_shared<RadialGrid>();
  g->dim = dim;
  g->sphere_area = 2.0 * std::pow(std::numbers::pi, 0.5 * dim) /
                   std::tgamma(0.5 * dim);

  const int m = intervals;
  g->r.resize(m + 1);
  g->w.assign(m + 1, 0.0);
  g->iw.assign(m, 0.0);
  for (int k = 0; k <= m; ++k)
    g->r[k] = rmax * std::pow(double(k) / double(m), p);
  g->r[0] = 0.0;
  g->r[m] = rmax;

  // Product-trapezoid weights: integrate the P1 hat functions against
  // r^{N-1} dr exactly. With r = a + h x the two contributions are
  //   left  = h sum_j C(N-1,j) a^{N-1-j} h^j / ((j+1)(j+2)),
  //   right = h sum_j C(N-1,j) a^{N-1-j} h^j / (j+2),
  // all terms positive, so no cancellation on fine grids.
  const int n = dim;
  std::vector<double> binom(n);  // C(N-1, j)
  binom[0] = 1.0;
  for (int j = 1; j < n; ++j) binom[j] = binom[j - 1] * double(n - j) / double(j);

  for (int k = 0; k < m; ++k) {
    const double a = g->r[k];
    const double h = g->r[k + 1] - a;
    double left = 0.0, right = 0.0;
    double apow = std::pow(a, n - 1);  // a^{N-1-j} * h^j accumulated below
    double term = apow;
    if (a == 0.0) {
      // only j = N-1 survives
      const double hn = std::pow(h, n - 1);
      left = h * hn / (double(n) * double(n + 1));
      right = h * hn / double(n + 1);
    } else {
      const double ratio = h / a;
      for (int j = 0; j < n; ++j) {
        const double c = binom[j] * term;
        left += c / (double(j + 1) * double(j + 2));
        right += c / double(j + 2);
        term *= ratio;
      }
      left *= h;
      right *= h;
    }
    g->w[k] += left;
    g->w[k + 1] += right;
    g->iw[k] = left + right;
  }
  return g;
}

double integrate(const RadialFunction& f) {
  const RadialGrid& g = *f.grid;
  double s = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double v = f.values[k];
    if (std::isnan(v)) throw numeric_error("integrate: NaN sample");
    s += g.w[k] * v;
  }
  return g.sphere_area * s;
}

std::vector<double> radial_derivative(const RadialFunction& u) {
  const auto& r = u.grid->r;
  const auto& y = u.values;
  const int m = u.grid->intervals();
  std::vector<double> d(m + 1);
  d[0] = Parabola(r[0], y[0], r[1], y[1], r[2], y[2]).deriv(r[0]);
  for (int k = 1; k < m; ++k)
    d[k] = Parabola(r[k - 1], y[k - 1], r[k], y[k], r[k + 1], y[k + 1]).deriv(r[k]);
  d[m] = Parabola(r[m - 2], y[m - 2], r[m - 1], y[m - 1], r[m], y[m]).deriv(r[m]);
  return d;
}

RadialFunction radial_laplacian(const RadialFunction& u) {
  const auto& r = u.grid->r;
  const auto& y = u.values;
  const int m = u.grid->intervals();
  if (m < 2) throw std::invalid_argument("radial_laplacian: need >= 3 nodes");
  const double nm1 = u.grid->dim - 1;

  RadialFunction out(u.grid);
  for (int k = 0; k <= m; ++k)
    if (std::isnan(y[k])) throw numeric_error("radial_laplacian: NaN sample");

  // r = 0: lim (u'' + (N-1) u'/r) = N u''(0), u''(0) from the even extension.
  out.values[0] = 2.0 * u.grid->dim * (y[1] - y[0]) / (r[1] * r[1]);
  for (int k = 1; k < m; ++k) {
    Parabola p(r[k - 1], y[k - 1], r[k], y[k], r[k + 1], y[k + 1]);
    out.values[k] = p.second() + nm1 / r[k] * p.deriv(r[k]);
  }
  Parabola p(r[m - 2], y[m - 2], r[m - 1], y[m - 1], r[m], y[m]);
  out.values[m] = p.second() + nm1 / r[m] * p.deriv(r[m]);
  return out;
}

RadialInterpolant::RadialInterpolant(const RadialFunction& u)
    : x_(u.grid->r), y_(u.values), rmax_(u.grid->rmax()) {}

double RadialInterpolant::operator()(double r) const {
  if (r >= rmax_ || x_.size() < 4) return r >= rmax_ ? 0.0 : y_.front();
  if (r <= 0.0) return y_.front();
  auto it = std::upper_bound(x_.begin(), x_.end(), r);
  std::size_t j = static_cast<std::size_t>(it - x_.begin());  // x_[j-1] <= r < x_[j]
  std::size_t i0 = (j >= 2) ? j - 2 : 0;
  if (i0 + 3 >= x_.size()) i0 = x_.size() - 4;
  // 4-point Lagrange
  double s = 0.0;
  for (std::size_t a = 0; a < 4; ++a) {
    double l = 1.0;
    for (std::size_t b = 0; b < 4; ++b)
      if (b != a) l *= (r - x_[i0 + b]) / (x_[i0 + a] - x_[i0 + b]);
    s += l * y_[i0 + a];
  }
  return s;
}

}  // namespace nlsnorm
