#pragma once

#include "nlsnorm/radial.hpp"
#include "nlsnorm/tridiag.hpp"

namespace nlsnorm::detail {

// Pointwise finite-difference radial Laplacian rows (same stencil as
// radial_laplacian). Row M is left zero; callers install the Dirichlet row.
inline Tridiag laplacian_fd(const RadialGrid& g) {
  const int m = g.intervals();
  const double nm1 = g.dim - 1;
  Tridiag t(m + 1);
  t.di[0] = -2.0 * g.dim / (g.r[1] * g.r[1]);
  t.up[0] = 2.0 * g.dim / (g.r[1] * g.r[1]);
  for (int k = 1; k < m; ++k) {
    const double h1 = g.r[k] - g.r[k - 1];
    const double h2 = g.r[k + 1] - g.r[k];
    const double denom = h1 * h2 * (h1 + h2);
    const double d1 = nm1 / g.r[k];
    t.lo[k] = 2.0 * h2 / denom - d1 * h2 * h2 / denom;
    t.di[k] = -2.0 * (h1 + h2) / denom + d1 * (h2 * h2 - h1 * h1) / denom;
    t.up[k] = 2.0 * h1 / denom + d1 * h1 * h1 / denom;
  }
  return t;
}

// Weighted-symmetric (lumped stiffness) Laplacian: <L u, v>_w = -a(u, v)
// with a the P1 Dirichlet form, so Crank-Nicolson built on it conserves the
// quadrature mass exactly. Row M left zero (Dirichlet subspace).
inline Tridiag laplacian_sym(const RadialGrid& g) {
  const int m = g.intervals();
  Tridiag t(m + 1);
  for (int k = 0; k < m; ++k) {
    const double h = g.r[k + 1] - g.r[k];
    const double s = g.iw[k] / (h * h);
    // interval k couples nodes k and k+1
    t.di[k] -= s / g.w[k];
    t.up[k] += s / g.w[k];
    if (k + 1 < m) {  // row m stays zero
      t.di[k + 1] -= s / g.w[k + 1];
      t.lo[k + 1] += s / g.w[k + 1];
    }
  }
  return t;
}

}  // namespace nlsnorm::detail
