#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "qgliss/graph.hpp"

namespace qgliss {

/// Per-edge Lissajous length path L_e(tau) = Lbar_e + rho_e cos(2 pi nu_e tau + alpha_e)
/// together with the adiabatic time scale T. All quantities dimensionless.
struct LissajousPath {
  std::vector<double> mean_length;  // Lbar_e > 0
  std::vector<double> amplitude;    // 0 <= rho_e < Lbar_e
  std::vector<int> frequency;       // nu_e >= 1
  std::vector<double> phase;        // alpha_e, radians
  double adiabatic_scale = 100.0;   // T > 0

  std::size_t edge_count() const { return mean_length.size(); }
  bool is_static() const;
  double total_mean_length() const;

  /// Sum over tau of the largest relative edge speed, used for tracking
  /// continuity bounds: max_tau sum_e |dL_e/dtau| / L_e.
  double max_relative_speed() const;
};

/// Closed-form sample of the path and its derivatives at one tau.
struct PathSample {
  double tau = 0.0;
  std::vector<double> length;         // L_e(tau)
  std::vector<double> dlength;        // dL_e/dtau
  std::vector<double> ddlength;       // d2L_e/dtau2
  std::vector<double> ddlength_sq;    // d2(L_e^2)/dtau2 = 2 (L_e L_e'' + L_e'^2)
};

PathSample sample_path(const LissajousPath& path, double tau);

/// Just the length vector at tau (cheaper than a full sample).
std::vector<double> lengths_at(const LissajousPath& path, double tau);

/// The closed 3D curve (L1, L2, L3)(tau), n_samples points with tau uniform
/// on [0, 1] inclusive; first and last point coincide. Requires E = 3.
std::vector<std::array<double, 3>> knot_polyline(const LissajousPath& path, int n_samples);

/// One detected violation of the graph/path invariants.
struct ValidationIssue {
  enum class Code {
    NonPositiveLength,
    NotCoprime,
    DisconnectedGraph,
    LoopEdge,
    SizeMismatch,
    BadFrequency,
  } code;
  std::string message;
};

/// Checks all type invariants: connectivity, no loops, 0 <= rho < Lbar,
/// nu positive integers with gcd of active frequencies 1, T > 0, and that
/// the path vectors match the edge count. Returns the list of violations
/// (empty = ok).
std::vector<ValidationIssue> validate(const MetricGraph& graph, const LissajousPath& path);

/// Same checks; throws ValidationError on the first violation.
void validate_or_throw(const MetricGraph& graph, const LissajousPath& path);

}  // namespace qgliss
