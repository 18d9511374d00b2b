#include "qgliss/path.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qgliss/errors.hpp"

namespace qgliss {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

bool LissajousPath::is_static() const {
  return std::all_of(amplitude.begin(), amplitude.end(), [](double r) { return r == 0.0; });
}

double LissajousPath::total_mean_length() const {
  return std::accumulate(mean_length.begin(), mean_length.end(), 0.0);
}

double LissajousPath::max_relative_speed() const {
  // |dL_e/dtau| <= 2 pi nu_e rho_e and L_e >= Lbar_e - rho_e.
  double s = 0.0;
  for (std::size_t e = 0; e < edge_count(); ++e) {
    const double lmin = mean_length[e] - amplitude[e];
    if (lmin <= 0.0) continue;
    s += kTwoPi * frequency[e] * amplitude[e] / lmin;
  }
  return s;
}

PathSample sample_path(const LissajousPath& path, double tau) {
  const std::size_t n = path.edge_count();
  PathSample s;
  s.tau = tau;
  s.length.resize(n);
  s.dlength.resize(n);
  s.ddlength.resize(n);
  s.ddlength_sq.resize(n);
  for (std::size_t e = 0; e < n; ++e) {
    const double w = kTwoPi * path.frequency[e];
    const double arg = w * tau + path.phase[e];
    const double c = std::cos(arg);
    const double si = std::sin(arg);
    const double rho = path.amplitude[e];
    s.length[e] = path.mean_length[e] + rho * c;
    s.dlength[e] = -rho * w * si;
    s.ddlength[e] = -rho * w * w * c;
    s.ddlength_sq[e] = 2.0 * (s.length[e] * s.ddlength[e] + s.dlength[e] * s.dlength[e]);
  }
  return s;
}

std::vector<double> lengths_at(const LissajousPath& path, double tau) {
  const std::size_t n = path.edge_count();
  std::vector<double> L(n);
  for (std::size_t e = 0; e < n; ++e)
    L[e] = path.mean_length[e] +
           path.amplitude[e] * std::cos(kTwoPi * path.frequency[e] * tau + path.phase[e]);
  return L;
}

std::vector<std::array<double, 3>> knot_polyline(const LissajousPath& path, int n_samples) {
  if (path.edge_count() != 3)
    throw WrongDimension("knot_polyline needs exactly 3 edges, got " +
                         std::to_string(path.edge_count()));
  if (n_samples < 2) throw Error("knot_polyline needs n_samples >= 2");
  std::vector<std::array<double, 3>> pts(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    const double tau = static_cast<double>(i) / (n_samples - 1);
    const auto L = lengths_at(path, tau);
    pts[static_cast<std::size_t>(i)] = {L[0], L[1], L[2]};
  }
  // Integer frequencies close the curve; pin the endpoint to kill roundoff.
  pts.back() = pts.front();
  return pts;
}

std::vector<ValidationIssue> validate(const MetricGraph& graph, const LissajousPath& path) {
  using Code = ValidationIssue::Code;
  std::vector<ValidationIssue> issues;

  const std::size_t ne = static_cast<std::size_t>(graph.edge_count());
  if (path.edge_count() != ne || path.amplitude.size() != ne ||
      path.frequency.size() != ne || path.phase.size() != ne) {
    issues.push_back({Code::SizeMismatch, "path parameter vectors must all have one entry per edge"});
    return issues;  // nothing else is meaningful
  }

  if (graph.has_loop()) issues.push_back({Code::LoopEdge, "self-loops are not supported"});
  if (!graph.is_connected()) issues.push_back({Code::DisconnectedGraph, "graph must be connected"});

  for (std::size_t e = 0; e < ne; ++e) {
    if (!(path.mean_length[e] > 0.0) || path.amplitude[e] < 0.0 ||
        path.amplitude[e] >= path.mean_length[e]) {
      issues.push_back({Code::NonPositiveLength,
                        "edge " + std::to_string(e) + ": need 0 <= rho < Lbar and Lbar > 0"});
    }
    if (path.frequency[e] < 1)
      issues.push_back({Code::BadFrequency,
                        "edge " + std::to_string(e) + ": frequency must be a positive integer"});
  }

  if (!(path.adiabatic_scale > 0.0))
    issues.push_back({Code::NonPositiveLength, "adiabatic scale T must be positive"});

  // gcd of the frequencies on moving edges must be 1 so the cycle closes
  // exactly once at tau = 1. A fully static path is trivially fine.
  int g = 0;
  for (std::size_t e = 0; e < ne; ++e)
    if (path.amplitude[e] > 0.0 && path.frequency[e] >= 1) g = std::gcd(g, path.frequency[e]);
  if (g > 1)
    issues.push_back({Code::NotCoprime,
                      "active frequencies have gcd " + std::to_string(g) + " (want 1)"});

  return issues;
}

void validate_or_throw(const MetricGraph& graph, const LissajousPath& path) {
  const auto issues = validate(graph, path);
  if (issues.empty()) return;
  using C = ValidationIssue::Code;
  const auto& first = issues.front();
  ValidationError::Code code;
  switch (first.code) {
    case C::NonPositiveLength: code = ValidationError::Code::NonPositiveLength; break;
    case C::NotCoprime: code = ValidationError::Code::NotCoprime; break;
    case C::DisconnectedGraph: code = ValidationError::Code::DisconnectedGraph; break;
    case C::LoopEdge: code = ValidationError::Code::LoopEdge; break;
    case C::BadFrequency: code = ValidationError::Code::BadFrequency; break;
    default: code = ValidationError::Code::SizeMismatch; break;
  }
  throw ValidationError(code, first.message);
}

}  // namespace qgliss
