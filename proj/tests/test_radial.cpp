#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlsnorm/errors.hpp"
#include "nlsnorm/radial.hpp"

using namespace nlsnorm;
namespace nums = std::numbers;

TEST_CASE("uniform grid nodes are k/M") {
  auto g = make_grid(3, 1.0, 100);
  REQUIRE(g->size() == 101);
  for (int k = 0; k <= 100; ++k)
    CHECK(g->r[k] == doctest::Approx(k / 100.0).epsilon(1e-14));
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(make_grid(3, -1.0, 100), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(3, 0.0, 100), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(3, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(2, 1.0, 100), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(4, 1.0, 100, GridStretch::graded, 0.5),
                  std::invalid_argument);
}

TEST_CASE("weights reproduce int r^{N-1} exactly") {
  // f == 1 over [0, 2] in N = 4: 2^4/4 = 4
  auto g = make_grid(4, 2.0, 128);
  double s = 0.0;
  for (double w : g->w) s += w;
  CHECK(s == doctest::Approx(4.0).epsilon(1e-12));

  // graded grids too, and weights stay nonnegative
  auto gg = make_grid(5, 3.0, 777, GridStretch::graded, 4.0);
  s = 0.0;
  for (double w : gg->w) {
    CHECK(w >= 0.0);
    s += w;
  }
  CHECK(s == doctest::Approx(std::pow(3.0, 5) / 5.0).epsilon(1e-12));
  for (std::size_t k = 1; k < gg->size(); ++k) CHECK(gg->r[k] > gg->r[k - 1]);
}

TEST_CASE("quadrature exactness for r^j up to the rule order") {
  auto g = make_grid(4, 1.7, 513, GridStretch::graded, 2.0);
  const int N = 4;
  for (int j = 0; j <= 1; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < g->size(); ++k)
      s += g->w[k] * std::pow(g->r[k], j);
    const double exact = std::pow(1.7, N + j) / (N + j);
    CHECK(s == doctest::Approx(exact).epsilon(1e-10));
  }
}

TEST_CASE("Gaussian moment oracle: int_0^inf r^2 e^{-r^2} dr = sqrt(pi)/4") {
  auto g = make_grid(3, 8.0, 1000000);
  double s = 0.0;
  for (std::size_t k = 0; k < g->size(); ++k)
    s += g->w[k] * std::exp(-g->r[k] * g->r[k]);
  CHECK(s == doctest::Approx(std::sqrt(nums::pi) / 4.0).epsilon(1e-8));
}

TEST_CASE("integrate: constants, zero, exponential oracle") {
  auto g4 = make_grid(4, 1.0, 256);
  CHECK(integrate(sample(g4, [](double) { return 1.0; })) ==
        doctest::Approx(nums::pi * nums::pi / 2.0).epsilon(1e-12));
  CHECK(integrate(sample(g4, [](double) { return 0.0; })) == 0.0);

  // f = e^{-r} in N = 3: omega Gamma(3) = 8 pi
  auto g3 = make_grid(3, 40.0, 20000);
  CHECK(integrate(sample(g3, [](double r) { return std::exp(-r); })) ==
        doctest::Approx(8.0 * nums::pi).epsilon(1e-6));
}

TEST_CASE("integrate rejects NaN") {
  auto g = make_grid(3, 1.0, 64);
  RadialFunction f(g);
  f.values[10] = std::nan("");
  CHECK_THROWS_AS(integrate(f), numeric_error);
}

TEST_CASE("integrate is linear") {
  auto g = make_grid(5, 2.0, 301, GridStretch::graded, 3.0);
  auto f = sample(g, [](double r) { return std::cos(r); });
  auto h = sample(g, [](double r) { return r * std::exp(-r); });
  const double a = 1.7, b = -0.3;
  RadialFunction combo(g);
  for (std::size_t k = 0; k < g->size(); ++k)
    combo.values[k] = a * f.values[k] + b * h.values[k];
  CHECK(integrate(combo) ==
        doctest::Approx(a * integrate(f) + b * integrate(h)).epsilon(1e-13));
}

TEST_CASE("radial laplacian on r^2 is 2N at interior nodes") {
  auto g = make_grid(3, 2.0, 400, GridStretch::graded, 2.0);
  auto u = sample(g, [](double r) { return r * r; });
  auto lap = radial_laplacian(u);
  for (int k = 0; k < g->intervals(); ++k)
    CHECK(lap.values[k] == doctest::Approx(6.0).epsilon(1e-8));
}

TEST_CASE("radial laplacian of a constant vanishes") {
  auto g = make_grid(4, 2.0, 128);
  auto u = sample(g, [](double) { return 3.25; });
  auto lap = radial_laplacian(u);
  for (double v : lap.values) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("regular center stencil: Gaussian in N = 4 has Lap u(0) = -4") {
  auto g = make_grid(4, 6.0, 4000);
  auto u = sample(g, [](double r) { return std::exp(-0.5 * r * r); });
  auto lap = radial_laplacian(u);
  CHECK(lap.values[0] == doctest::Approx(-4.0).epsilon(1e-5));
}

TEST_CASE("laplacian converges at second order") {
  auto err = [](int m) {
    auto g = make_grid(3, 3.0, m);
    auto u = sample(g, [](double r) { return std::exp(-0.5 * r * r); });
    auto lap = radial_laplacian(u);
    double e = 0.0;
    for (int k = 0; k < g->intervals(); ++k) {
      const double r = g->r[k];
      const double exact = (r * r - 3.0) * std::exp(-0.5 * r * r);
      e = std::max(e, std::abs(lap.values[k] - exact));
    }
    return e;
  };
  const double order = std::log2(err(200) / err(400));
  CHECK(order >= 1.8);
}

TEST_CASE("interpolant: cubic accuracy and zero beyond rmax") {
  auto g = make_grid(3, 5.0, 2000);
  auto u = sample(g, [](double r) { return std::sin(r); });
  RadialInterpolant it(u);
  for (double r : {0.123, 1.77, 3.1415, 4.9}) {
    CHECK(it(r) == doctest::Approx(std::sin(r)).epsilon(1e-9));
  }
  CHECK(it(5.0) == 0.0);
  CHECK(it(7.2) == 0.0);
}
