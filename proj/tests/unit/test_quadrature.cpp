#include <doctest.h>

#include <cmath>

#include "qgliss/quadrature.hpp"
#include "qgliss/spectral.hpp"

using namespace qgliss;

TEST_CASE("moment quadrature of the flat function is -1/6") {
  const double m = moment_quadrature([](double) { return 1.0; }, 64);
  CHECK(m == doctest::Approx(-1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("moment quadrature matches the analytic cosine integral") {
  // g = sqrt(2) cos(pi xi): integral is -1/6 - 1/(2 pi^2).
  const double expected = -1.0 / 6.0 - 1.0 / (2.0 * M_PI * M_PI);
  const double m =
      moment_quadrature([](double xi) { return std::sqrt(2.0) * std::cos(M_PI * xi); }, 64);
  CHECK(m == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("doubling the quadrature order is converged") {
  auto g = [](double xi) { return std::cos(17.3 * xi + 0.4); };
  const double a = moment_quadrature(g, 64);
  const double b = moment_quadrature(g, 128);
  CHECK(std::abs(a - b) < 1e-13);
}

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  GaussLegendre gl(8);
  const double v = gl.integrate([](double x) { return x * x * x * x * x * x; }, -1.0, 1.0);
  CHECK(v == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
  double wsum = 0.0;
  for (double w : gl.weights()) wsum += w;
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("composite Simpson total and prefix are consistent") {
  const int n = 64;
  const auto grid = uniform_grid(0.0, 1.0, n);
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) f[i] = std::sin(3.0 * grid[i]) + grid[i];
  const double h = 1.0 / n;
  const double total = simpson_total(f, h);
  const auto acc = simpson_prefix(f, h);
  CHECK(acc.front() == 0.0);
  CHECK(acc.back() == doctest::Approx(total).epsilon(1e-15));
  const double exact = (1.0 - std::cos(3.0)) / 3.0 + 0.5;
  CHECK(total == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("Simpson prefix is exact on quadratics") {
  const int n = 8;
  const auto grid = uniform_grid(0.0, 2.0, n);
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) f[i] = 3.0 * grid[i] * grid[i] - grid[i] + 1.0;
  const auto acc = simpson_prefix(f, 2.0 / n);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    const double exact = x * x * x - 0.5 * x * x + x;
    CHECK(acc[i] == doctest::Approx(exact).epsilon(1e-13));
  }
}
