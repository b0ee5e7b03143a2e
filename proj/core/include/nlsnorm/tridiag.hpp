#pragma once

#include <complex>
#include <vector>

namespace nlsnorm {

// Tridiagonal matrix rows: lo[i] u_{i-1} + di[i] u_i + up[i] u_{i+1}.
struct Tridiag {
  std::vector<double> lo, di, up;
  explicit Tridiag(std::size_t n = 0) : lo(n, 0.0), di(n, 0.0), up(n, 0.0) {}
  std::size_t size() const { return di.size(); }
  std::vector<double> apply(const std::vector<double>& u) const;
};

// Gaussian elimination with partial pivoting (dgtsv-style); handles
// indefinite systems from Newton linearizations.
std::vector<double> solve_tridiag(const Tridiag& t, std::vector<double> rhs);

// Plain Thomas for strictly diagonally dominant complex systems
// (Crank-Nicolson steps).
std::vector<std::complex<double>> solve_tridiag_cplx(
    const std::vector<std::complex<double>>& lo,
    const std::vector<std::complex<double>>& di,
    const std::vector<std::complex<double>>& up,
    std::vector<std::complex<double>> rhs);

}  // namespace nlsnorm
