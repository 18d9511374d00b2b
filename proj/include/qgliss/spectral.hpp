#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "qgliss/graph.hpp"
#include "qgliss/path.hpp"

namespace qgliss {

struct RootOptions {
  /// Two roots closer than this are reported as DegenerateSpectrum.
  /// 0 means "use 1e-6 * pi / sum(L)".
  double gap_tol = 0.0;
  /// Scan grid points per pi / sum(L) of k axis.
  int scan_density = 60;
  /// Absolute tolerance of refined roots in k.
  double k_tol = 1e-13;
  /// Residual bound |f(k)| required at accepted roots of the entire star form.
  double residual_tol = 1e-12;

  double effective_gap_tol(double total_length) const;
};

/// Entire secular function of a star graph (any E, Neumann leaves):
/// sum_e sin(k L_e) prod_{e' != e} cos(k L_e'), the multiplied-through
/// version of sum_e tan(k L_e). Shares its zeros away from simultaneous
/// cosine zeros; those show up as double roots and are reported as
/// degenerate by find_roots.
double secular_star(double k, std::span<const double> L);

/// d/dk of secular_star.
double secular_star_derivative(double k, std::span<const double> L);

/// Bond-scattering secular function det(I - S(tau) D(k;tau)) on the 2E
/// directed bonds; S carries the (L_j'/L_j)^(1/2) weights of the scaled
/// problem and is not unitary.
std::complex<double> secular_general(double k, const MetricGraph& graph,
                                     std::span<const double> L);
std::complex<double> secular_general(double k, double tau, const MetricGraph& graph,
                                     const LissajousPath& path);

/// Real entire secular determinant built from per-edge (cos, sin)
/// coefficients plus weighted vertex value/flux rows; used as the
/// root-finding workhorse and as the independent cross-check of
/// secular_general. Vanishes exactly at the instantaneous eigenvalues
/// k > 0 (and trivially at k = 0).
double secular_vertex(double k, const MetricGraph& graph, std::span<const double> L);

/// All roots of the instantaneous secular equation in (0, k_max], sorted.
/// Star graphs use secular_star, everything else secular_vertex. Throws
/// DegenerateSpectrum on double roots or when two roots fall within
/// gap_tol of each other.
std::vector<double> find_roots(const MetricGraph& graph, std::span<const double> L,
                               double k_max, const RootOptions& opt = {});
std::vector<double> find_roots(double tau, const MetricGraph& graph,
                               const LissajousPath& path, double k_max,
                               const RootOptions& opt = {});

/// Amplitudes and normalization of a star eigenfunction at a root k > 0.
/// Conventions: on every edge the local coordinate has the center at
/// xi = -1/2, g_e(xi) = sqrt(L_e) a_e cos(k L_e (xi - 1/2)), a_1 > 0, and
/// sum_e int |g_e|^2 dxi = 1. norm_sq is the squared normalization factor
/// N^2 = 1/2 sum_e L_e g_e~^2 (1 + sinc(2 k L_e)) over the unnormalized
/// cosine products g_e~.
struct EigenDataStar {
  std::vector<double> amplitude;
  double norm_sq = 0.0;
};
EigenDataStar eigen_data_star(double k, std::span<const double> L);

/// g_e(xi) and its xi-derivative for a star eigenfunction.
double star_eigenfunction(const EigenDataStar& ed, double k, std::span<const double> L,
                          std::size_t edge, double xi);
double star_eigenfunction_dxi(const EigenDataStar& ed, double k, std::span<const double> L,
                              std::size_t edge, double xi);

/// Closed-form moments m_e = <(xi^2 - 1/4)>_e of a star eigenfunction at a
/// root k > 0: m_e = L_e a_e^2 I(k L_e) with
/// I(b) = -1/12 + cos^2(b)/(4 b^2) - sin(b) cos(b)/(4 b^3).
std::vector<double> moment_star(double k, std::span<const double> L);

/// The per-edge moment integral I(beta) above, series-guarded near 0
/// (I(0) = -1/6). Exposed for the high-level asymptotic checks.
double moment_edge_integral(double beta);

/// Independent quadrature oracle: int_{-1/2}^{1/2} (xi^2 - 1/4) |g(xi)|^2 dxi
/// by fixed-order Gauss-Legendre.
double moment_quadrature(const std::function<double(double)>& g_edge, int order = 64);

/// Ground state (k = 0): m_e = -L_e / (6 sum_j L_j); sums to -1/6 exactly.
std::vector<double> ground_state_moments(std::span<const double> L);

/// Instantaneous eigendata of one level at one tau.
struct SpectralPoint {
  double tau = 0.0;
  int level = 0;
  double k = 0.0;
  std::vector<double> amplitude;  // star graphs only; empty otherwise
  double norm_sq = 0.0;
  std::vector<double> moment;     // star graphs only (any level) or level 0
};

/// One tracked eigenvalue branch over the tau grid.
struct LevelCurve {
  int level = 0;
  std::vector<double> tau_grid;
  std::vector<SpectralPoint> points;

  /// |k(1) - k(0)|, meaningful once tau_grid spans [0, 1].
  double closure() const;
};

struct TrackOptions {
  RootOptions roots{};
  /// Fill amplitudes and moments (star graphs; level 0 works on any graph).
  bool with_eigendata = true;
  /// Safety factor on the |dk/dtau| continuity bound.
  double continuity_safety = 3.0;
  /// Worker threads for the per-tau solves (0 = hardware count). The
  /// stitching pass is sequential either way, so results are deterministic.
  int workers = 0;
};

/// Tracks levels 0..n_levels-1 over tau_grid (level 0 is the constant
/// k = 0 ground branch). Roots at consecutive nodes are matched in sorted
/// order, which nearest-continuation reduces to in the non-crossing
/// setting; continuity violations throw TrackingLost and close gaps throw
/// DegenerateSpectrum.
std::vector<LevelCurve> track_levels(const MetricGraph& graph, const LissajousPath& path,
                                     int n_levels, std::span<const double> tau_grid,
                                     const TrackOptions& opt = {});

/// Weyl-law sanity bound: | N(k_max) - k_max sum(L)/pi | <= E + V.
bool weyl_count_ok(std::size_t n_roots, double k_max, std::span<const double> L,
                   const MetricGraph& graph);

}  // namespace qgliss
