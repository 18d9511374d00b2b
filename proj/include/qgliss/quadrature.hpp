#pragma once

#include <functional>
#include <span>
#include <vector>

namespace qgliss {

/// Gauss-Legendre rule on [-1, 1]; nodes/weights computed once by Newton
/// iteration on the Legendre polynomial.
class GaussLegendre {
public:
  explicit GaussLegendre(int order);

  int order() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  double integrate(const std::function<double(double)>& f, double a, double b) const;

private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Composite Simpson total over a uniform grid of values; the number of
/// intervals (values.size() - 1) must be even and >= 2.
double simpson_total(std::span<const double> values, double step);

/// Accumulated integral at every grid node, consistent with simpson_total
/// at even nodes: each pair of intervals is integrated with the standard
/// Simpson weights and the midpoint gets the half-pair value of the same
/// quadratic interpolant, h (5 f0 + 8 f1 - f2) / 12.
std::vector<double> simpson_prefix(std::span<const double> values, double step);

/// Uniform grid of n_intervals+1 nodes on [a, b].
std::vector<double> uniform_grid(double a, double b, int n_intervals);

}  // namespace qgliss
