#pragma once

#include <array>
#include <span>
#include <vector>

#include "qgliss/graph.hpp"
#include "qgliss/path.hpp"
#include "qgliss/spectral.hpp"

namespace qgliss {

/// Accumulated geometric phase Gamma(tau) of one level over a cycle, in the
/// scaled convention Gamma = T [gamma(1) - gamma(0)] (T-independent in the
/// adiabatic limit, no mod-2pi reduction).
struct PhaseTrace {
  int level = 0;
  std::vector<double> tau_grid;
  std::vector<double> accumulated;  // Gamma(tau_i); starts at 0
  double total = 0.0;               // Gamma(1) by composite Simpson
  double error_estimate = 0.0;      // Richardson estimate from one grid halving
};

struct PhaseOptions {
  /// Simpson intervals over [0, 1]; must be a multiple of 4 so the halved
  /// grid used for the error estimate is still a Simpson grid.
  int tau_intervals = 4096;
  TrackOptions track{};
};

/// Gamma^(n) = (1/8) sum_e int_0^1 d2(L_e^2)/dtau2 <xi^2 - 1/4>_e dtau with
/// the moments from the tracked instantaneous eigendata. Level 0 uses the
/// piecewise-constant ground state on any graph; levels >= 1 need a star.
PhaseTrace geometric_phase(int level, const MetricGraph& graph, const LissajousPath& path,
                           const PhaseOptions& opt = {});

/// Phases of all levels 0..max_level from one tracking pass.
std::vector<PhaseTrace> geometric_phase_levels(int max_level, const MetricGraph& graph,
                                               const LissajousPath& path,
                                               const PhaseOptions& opt = {});

/// Ground-state phase from the explicit integrand
/// Gamma^(0) = -(1/48) sum_e int (L_e / sum_j L_j) d2(L_e^2)/dtau2 dtau;
/// no spectral solve involved.
PhaseTrace ground_phase(const MetricGraph& graph, const LissajousPath& path,
                        const PhaseOptions& opt = {});

/// Leading-order ground phase
/// pi^2/(12 Lbar^2) sum_e nu_e^2 Lbar_e (Lbar - Lbar_e) rho_e^2,
/// Lbar = sum_e Lbar_e.
double leading_order_ground(const LissajousPath& path);

/// Third-order ground term for E = 3:
/// pi^2 rho1 rho2 rho3 (sum_e Lbar_e^2 nu_e^2) / (12 Lbar^3) *
/// sum_cyc cos(alpha_i + alpha_j - alpha_k) delta[nu_i + nu_j = nu_k].
double third_order_ground(const LissajousPath& path);

/// One admissible perturbative order q = (q1,q2,q3) with a witness j
/// satisfying the selection rule 2 sum_e nu_e j_e = sum_e nu_e q_e,
/// 0 <= j_e <= q_e.
struct OrderTuple {
  std::array<int, 3> q{};
  std::array<int, 3> witness{};
  int order = 0;  // q1 + q2 + q3

  /// More than one active edge (the diagonal (q,0,0) tuples are always
  /// admissible; the knot-sensitive information sits in the mixed ones).
  bool mixed() const { return (q[0] > 0) + (q[1] > 0) + (q[2] > 0) >= 2; }
};

/// Exhaustive enumeration of admissible orders with 2 <= q1+q2+q3 <= q_max,
/// sorted by total order.
std::vector<OrderTuple> allowed_orders(const std::array<int, 3>& nu, int q_max);

/// One probe measurement for frequency recovery: the amplitude pattern and
/// the ground phase it produced.
struct PhaseSample {
  std::vector<double> rho;
  double gamma = 0.0;
};

struct FrequencyRecovery {
  std::vector<int> nu;
  std::vector<double> residual;         // |nu_fit - nu| / nu per edge
  std::vector<double> fit_coefficient;  // fitted Gamma / rho^2 limits c_e
};

/// Inverts the leading-order formula edge by edge from unit-direction
/// probes (for each edge, >= 2 samples with only that edge active). Throws
/// InsufficientSamples / NoIntegerFit.
FrequencyRecovery recover_frequencies(const std::vector<PhaseSample>& samples,
                                      std::span<const double> mean_length, int nu_max,
                                      double residual_tol = 1e-2);

}  // namespace qgliss
