#include "qgliss/phase.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qgliss/errors.hpp"
#include "qgliss/quadrature.hpp"

namespace qgliss {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;

void check_intervals(int n) {
  if (n < 4 || n % 4 != 0)
    throw Error("tau_intervals must be a positive multiple of 4");
}

// Builds a PhaseTrace from integrand samples on a uniform tau grid.
PhaseTrace trace_from_integrand(int level, std::vector<double> tau,
                                std::span<const double> f) {
  PhaseTrace tr;
  tr.level = level;
  const double h = tau[1] - tau[0];
  tr.accumulated = simpson_prefix(f, h);
  tr.total = tr.accumulated.back();
  std::vector<double> half;
  half.reserve(f.size() / 2 + 1);
  for (std::size_t i = 0; i < f.size(); i += 2) half.push_back(f[i]);
  const double coarse = simpson_total(half, 2.0 * h);
  tr.error_estimate = std::abs(tr.total - coarse) / 15.0;
  tr.tau_grid = std::move(tau);
  return tr;
}

}  // namespace

std::vector<PhaseTrace> geometric_phase_levels(int max_level, const MetricGraph& graph,
                                               const LissajousPath& path,
                                               const PhaseOptions& opt) {
  if (max_level < 0) throw Error("level must be >= 0");
  check_intervals(opt.tau_intervals);
  if (max_level >= 1 && !graph.star_center().has_value())
    throw Error("excited-level phases are implemented for star graphs only");

  auto tau = uniform_grid(0.0, 1.0, opt.tau_intervals);
  TrackOptions topt = opt.track;
  topt.with_eigendata = true;
  const auto curves = track_levels(graph, path, max_level + 1, tau, topt);

  std::vector<PhaseTrace> traces;
  traces.reserve(static_cast<std::size_t>(max_level) + 1);
  std::vector<double> f(tau.size());
  for (int n = 0; n <= max_level; ++n) {
    const auto& curve = curves[static_cast<std::size_t>(n)];
    for (std::size_t i = 0; i < tau.size(); ++i) {
      const auto s = sample_path(path, tau[i]);
      const auto& m = curve.points[i].moment;
      double acc = 0.0;
      for (std::size_t e = 0; e < m.size(); ++e) acc += s.ddlength_sq[e] * m[e];
      f[i] = acc / 8.0;
    }
    traces.push_back(trace_from_integrand(n, tau, f));
  }
  return traces;
}

PhaseTrace geometric_phase(int level, const MetricGraph& graph, const LissajousPath& path,
                           const PhaseOptions& opt) {
  auto traces = geometric_phase_levels(level, graph, path, opt);
  return std::move(traces.back());
}

PhaseTrace ground_phase(const MetricGraph& graph, const LissajousPath& path,
                        const PhaseOptions& opt) {
  if (static_cast<std::size_t>(graph.edge_count()) != path.edge_count())
    throw Error("path does not match the graph edge count");
  check_intervals(opt.tau_intervals);
  auto tau = uniform_grid(0.0, 1.0, opt.tau_intervals);
  std::vector<double> f(tau.size());
  for (std::size_t i = 0; i < tau.size(); ++i) {
    const auto s = sample_path(path, tau[i]);
    const double sumL = std::accumulate(s.length.begin(), s.length.end(), 0.0);
    double acc = 0.0;
    for (std::size_t e = 0; e < s.length.size(); ++e)
      acc += s.length[e] / sumL * s.ddlength_sq[e];
    f[i] = -acc / 48.0;
  }
  return trace_from_integrand(0, std::move(tau), f);
}

double leading_order_ground(const LissajousPath& path) {
  const double Lbar = path.total_mean_length();
  double s = 0.0;
  for (std::size_t e = 0; e < path.edge_count(); ++e) {
    const double nu = path.frequency[e];
    s += nu * nu * path.mean_length[e] * (Lbar - path.mean_length[e]) *
         path.amplitude[e] * path.amplitude[e];
  }
  return kPi * kPi / (12.0 * Lbar * Lbar) * s;
}

double third_order_ground(const LissajousPath& path) {
  if (path.edge_count() != 3)
    throw WrongDimension("third_order_ground needs exactly 3 edges");
  const double Lbar = path.total_mean_length();
  double bracket = 0.0;
  for (std::size_t e = 0; e < 3; ++e) {
    const double ln = path.mean_length[e] * path.frequency[e];
    bracket += ln * ln;
  }
  const double common = kPi * kPi * path.amplitude[0] * path.amplitude[1] *
                        path.amplitude[2] * bracket / (12.0 * Lbar * Lbar * Lbar);
  double total = 0.0;
  static constexpr int cyc[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  for (const auto& p : cyc) {
    if (path.frequency[p[0]] + path.frequency[p[1]] != path.frequency[p[2]]) continue;
    total += common * std::cos(path.phase[p[0]] + path.phase[p[1]] - path.phase[p[2]]);
  }
  return total;
}

std::vector<OrderTuple> allowed_orders(const std::array<int, 3>& nu, int q_max) {
  if (q_max < 2 || q_max > 20) throw Error("allowed_orders needs 2 <= q_max <= 20");
  for (int v : nu)
    if (v < 1) throw Error("frequencies must be positive integers");

  std::vector<OrderTuple> out;
  for (int q = 2; q <= q_max; ++q) {
    for (int q1 = 0; q1 <= q; ++q1) {
      for (int q2 = 0; q2 + q1 <= q; ++q2) {
        const int q3 = q - q1 - q2;
        const int target = nu[0] * q1 + nu[1] * q2 + nu[2] * q3;
        if (target % 2 != 0) continue;
        bool found = false;
        OrderTuple t;
        for (int j1 = 0; j1 <= q1 && !found; ++j1)
          for (int j2 = 0; j2 <= q2 && !found; ++j2)
            for (int j3 = 0; j3 <= q3 && !found; ++j3)
              if (2 * (nu[0] * j1 + nu[1] * j2 + nu[2] * j3) == target) {
                t.q = {q1, q2, q3};
                t.witness = {j1, j2, j3};
                t.order = q;
                found = true;
              }
        if (found) out.push_back(t);
      }
    }
  }
  return out;
}

FrequencyRecovery recover_frequencies(const std::vector<PhaseSample>& samples,
                                      std::span<const double> mean_length, int nu_max,
                                      double residual_tol) {
  const std::size_t ne = mean_length.size();
  if (ne < 2)
    throw InsufficientSamples("frequency recovery needs at least two edges");
  if (nu_max < 1) throw Error("nu_max must be >= 1");
  const double Lbar = std::accumulate(mean_length.begin(), mean_length.end(), 0.0);

  FrequencyRecovery rec;
  rec.nu.resize(ne);
  rec.residual.resize(ne);
  rec.fit_coefficient.resize(ne);

  for (std::size_t e = 0; e < ne; ++e) {
    // Unit-direction probes: only edge e active.
    std::vector<std::pair<double, double>> probes;
    for (const auto& s : samples) {
      if (s.rho.size() != ne) continue;
      bool only_e = s.rho[e] > 0.0;
      for (std::size_t j = 0; j < ne && only_e; ++j)
        if (j != e && s.rho[j] != 0.0) only_e = false;
      if (only_e) probes.emplace_back(s.rho[e], s.gamma);
    }
    std::sort(probes.begin(), probes.end());
    probes.erase(std::unique(probes.begin(), probes.end(),
                             [](const auto& a, const auto& b) { return a.first == b.first; }),
                 probes.end());
    if (probes.size() < 2)
      throw InsufficientSamples("edge " + std::to_string(e) +
                                ": need >= 2 unit-direction probes at distinct rho");

    // Least squares on Gamma = c rho^2 + d rho^4 (single active edge has
    // even powers only); c is the leading coefficient we invert.
    double s22 = 0.0, s24 = 0.0, s44 = 0.0, b2 = 0.0, b4 = 0.0;
    for (const auto& [rho, gamma] : probes) {
      const double r2 = rho * rho, r4 = r2 * r2;
      s22 += r2 * r2;
      s24 += r2 * r4;
      s44 += r4 * r4;
      b2 += r2 * gamma;
      b4 += r4 * gamma;
    }
    const double det = s22 * s44 - s24 * s24;
    if (det == 0.0) throw InsufficientSamples("degenerate probe design");
    const double c = (b2 * s44 - b4 * s24) / det;
    rec.fit_coefficient[e] = c;

    const double denom = kPi * kPi * mean_length[e] * (Lbar - mean_length[e]);
    const double nu_sq = 12.0 * Lbar * Lbar * c / denom;
    if (!(nu_sq > 0.0))
      throw NoIntegerFit("edge " + std::to_string(e) + ": fitted nu^2 is not positive");
    const double nu_real = std::sqrt(nu_sq);
    const int nu_int = static_cast<int>(std::lround(nu_real));
    if (nu_int < 1 || nu_int > nu_max)
      throw NoIntegerFit("edge " + std::to_string(e) + ": fitted frequency " +
                         std::to_string(nu_real) + " outside [1, nu_max]");
    const double res = std::abs(nu_real - nu_int) / nu_int;
    if (res > residual_tol)
      throw NoIntegerFit("edge " + std::to_string(e) + ": rounding residual " +
                         std::to_string(res) + " exceeds threshold");
    rec.nu[e] = nu_int;
    rec.residual[e] = res;
  }
  return rec;
}

}  // namespace qgliss
