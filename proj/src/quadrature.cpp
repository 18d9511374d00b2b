#include "qgliss/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace qgliss {

GaussLegendre::GaussLegendre(int order) {
  if (order < 1) throw std::invalid_argument("GaussLegendre order must be >= 1");
  const int n = order;
  nodes_.resize(static_cast<std::size_t>(n));
  weights_.resize(static_cast<std::size_t>(n));
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes_[static_cast<std::size_t>(i)] = -x;
    nodes_[static_cast<std::size_t>(n - 1 - i)] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    weights_[static_cast<std::size_t>(i)] = w;
    weights_[static_cast<std::size_t>(n - 1 - i)] = w;
  }
}

double GaussLegendre::integrate(const std::function<double(double)>& f, double a, double b) const {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f(mid + half * nodes_[i]);
  return half * s;
}

double simpson_total(std::span<const double> values, double step) {
  const std::size_t n = values.size();
  if (n < 3 || n % 2 == 0)
    throw std::invalid_argument("simpson_total needs an even number of intervals");
  double s = values.front() + values.back();
  for (std::size_t i = 1; i + 1 < n; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * values[i];
  return s * step / 3.0;
}

std::vector<double> simpson_prefix(std::span<const double> values, double step) {
  const std::size_t n = values.size();
  if (n < 3 || n % 2 == 0)
    throw std::invalid_argument("simpson_prefix needs an even number of intervals");
  std::vector<double> acc(n, 0.0);
  for (std::size_t i = 0; i + 2 < n; i += 2) {
    const double f0 = values[i], f1 = values[i + 1], f2 = values[i + 2];
    acc[i + 1] = acc[i] + step * (5.0 * f0 + 8.0 * f1 - f2) / 12.0;
    acc[i + 2] = acc[i] + step * (f0 + 4.0 * f1 + f2) / 3.0;
  }
  return acc;
}

std::vector<double> uniform_grid(double a, double b, int n_intervals) {
  if (n_intervals < 1) throw std::invalid_argument("uniform_grid needs n_intervals >= 1");
  std::vector<double> g(static_cast<std::size_t>(n_intervals) + 1);
  for (int i = 0; i <= n_intervals; ++i)
    g[static_cast<std::size_t>(i)] = a + (b - a) * static_cast<double>(i) / n_intervals;
  g.back() = b;
  return g;
}

}  // namespace qgliss
