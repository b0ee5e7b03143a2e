#include "nlsnorm/tridiag.hpp"

#include <cmath>
#include <stdexcept>

#include "nlsnorm/errors.hpp"

namespace nlsnorm {

std::vector<double> Tridiag::apply(const std::vector<double>& u) const {
  const std::size_t n = size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = di[i] * u[i];
    if (i > 0) s += lo[i] * u[i - 1];
    if (i + 1 < n) s += up[i] * u[i + 1];
    y[i] = s;
  }
  return y;
}

std::vector<double> solve_tridiag(const Tridiag& t, std::vector<double> rhs) {
  const std::size_t n = t.size();
  if (rhs.size() != n) throw std::invalid_argument("solve_tridiag: size mismatch");
  if (n == 0) return rhs;
  // Working bands; pivoting introduces one extra superdiagonal d2.
  std::vector<double> a = t.lo, b = t.di, c = t.up, d2(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(b[i]) >= std::abs(a[i + 1])) {
      if (b[i] == 0.0) throw numeric_error("solve_tridiag: singular matrix");
      const double m = a[i + 1] / b[i];
      b[i + 1] -= m * c[i];
      if (i + 2 < n) c[i + 1] -= m * d2[i];
      rhs[i + 1] -= m * rhs[i];
    } else {
      // swap rows i and i+1, then eliminate
      const double m = b[i] / a[i + 1];
      const double b_next = b[i + 1];
      const double c_next = (i + 2 < n) ? c[i + 1] : 0.0;
      const double c_i = c[i];
      const double d2_i = d2[i];
      b[i] = a[i + 1];
      c[i] = b_next;
      d2[i] = c_next;
      b[i + 1] = c_i - m * b_next;
      if (i + 2 < n) c[i + 1] = d2_i - m * c_next;
      std::swap(rhs[i], rhs[i + 1]);
      rhs[i + 1] -= m * rhs[i];
    }
  }
  if (b[n - 1] == 0.0) throw numeric_error("solve_tridiag: singular matrix");
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / b[n - 1];
  if (n >= 2) x[n - 2] = (rhs[n - 2] - c[n - 2] * x[n - 1]) / b[n - 2];
  for (std::size_t ii = n; ii >= 3; --ii) {
    const std::size_t i = ii - 3;
    x[i] = (rhs[i] - c[i] * x[i + 1] - d2[i] * x[i + 2]) / b[i];
  }
  return x;
}

std::vector<std::complex<double>> solve_tridiag_cplx(
    const std::vector<std::complex<double>>& lo,
    const std::vector<std::complex<double>>& di,
    const std::vector<std::complex<double>>& up,
    std::vector<std::complex<double>> rhs) {
  const std::size_t n = di.size();
  std::vector<std::complex<double>> c(n), x(n);
  std::complex<double> beta = di[0];
  x[0] = rhs[0] / beta;
  for (std::size_t i = 1; i < n; ++i) {
    c[i] = up[i - 1] / beta;
    beta = di[i] - lo[i] * c[i];
    x[i] = (rhs[i] - lo[i] * x[i - 1]) / beta;
  }
  for (std::size_t ii = n - 1; ii >= 1; --ii)
    x[ii - 1] -= c[ii] * x[ii];
  return x;
}

}  // namespace nlsnorm
