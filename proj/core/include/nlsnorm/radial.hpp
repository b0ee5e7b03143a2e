#pragma once

#include <memory>
#include <vector>

namespace nlsnorm {

enum class GridStretch { uniform, graded };

// Nodes and quadrature weights for integrals of radial functions over R^N,
//   integral = sphere_area * sum_k w[k] * f(r[k])  ~  int_{R^N} f(|x|) dx.
// Weights integrate the piecewise-linear interpolant against r^{N-1} dr
// exactly, so f == 1 reproduces rmax^N / N to rounding error and all weights
// are nonnegative.
struct RadialGrid {
  std::vector<double> r;   // r[0] = 0 < r[1] < ... < r[M] = rmax
  std::vector<double> w;   // nodal weights for int_0^rmax f(r) r^{N-1} dr
  std::vector<double> iw;  // per-interval measure: int_{r[k]}^{r[k+1]} r^{N-1} dr
  int dim = 3;
  double sphere_area = 0.0;  // omega = 2 pi^{N/2} / Gamma(N/2)

  int intervals() const { return static_cast<int>(r.size()) - 1; }
  std::size_t size() const { return r.size(); }
  double rmax() const { return r.back(); }
};

using GridPtr = std::shared_ptr<const RadialGrid>;

// grade = 1 gives uniform spacing, grade > 1 clusters nodes near r = 0
// (node k sits at rmax * (k/M)^grade).
GridPtr make_grid(int dim, double rmax, int intervals,
                  GridStretch stretch = GridStretch::uniform,
                  double grade = 1.0);

// Samples of a radial profile on a grid. Profiles produced by the solvers
// vanish at r = rmax (compact-support truncation).
struct RadialFunction {
  GridPtr grid;
  std::vector<double> values;

  RadialFunction() = default;
  explicit RadialFunction(GridPtr g)
      : grid(std::move(g)), values(grid->size(), 0.0) {}
  RadialFunction(GridPtr g, std::vector<double> v)
      : grid(std::move(g)), values(std::move(v)) {}
};

template <class F>
RadialFunction sample(GridPtr grid, F&& f) {
  RadialFunction u(grid);
  for (std::size_t k = 0; k < grid->size(); ++k) u.values[k] = f(grid->r[k]);
  return u;
}

// omega * sum w f; throws numeric_error on NaN samples.
double integrate(const RadialFunction& f);

// Nodal du/dr by the three-point stencil (one-sided at both ends).
std::vector<double> radial_derivative(const RadialFunction& u);

// u'' + (N-1)/r u' by the three-point stencil; at r = 0 the regular-center
// limit N u''(0) with u''(0) from the even extension.
RadialFunction radial_laplacian(const RadialFunction& u);

// Cubic (4-point Lagrange) evaluation of a sampled profile; 0 beyond rmax.
class RadialInterpolant {
 public:
  RadialInterpolant() = default;
  explicit RadialInterpolant(const RadialFunction& u);
  double operator()(double r) const;
  double rmax() const { return rmax_; }

 private:
  std::vector<double> x_, y_;
  double rmax_ = 0.0;
};

}  // namespace nlsnorm
