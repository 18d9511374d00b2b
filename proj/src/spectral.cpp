#include "qgliss/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "qgliss/errors.hpp"
#include "qgliss/parallel.hpp"
#include "qgliss/quadrature.hpp"

namespace qgliss {

namespace {

double sum_of(std::span<const double> L) {
  return std::accumulate(L.begin(), L.end(), 0.0);
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

double RootOptions::effective_gap_tol(double total_length) const {
  return gap_tol > 0.0 ? gap_tol : 1e-6 * M_PI / total_length;
}

double secular_star(double k, std::span<const double> L) {
  const std::size_t n = L.size();
  double total = 0.0;
  for (std::size_t e = 0; e < n; ++e) {
    double term = std::sin(k * L[e]);
    for (std::size_t j = 0; j < n; ++j)
      if (j != e) term *= std::cos(k * L[j]);
    total += term;
  }
  return total;
}

double secular_star_derivative(double k, std::span<const double> L) {
  const std::size_t n = L.size();
  std::vector<double> s(n), c(n);
  for (std::size_t e = 0; e < n; ++e) {
    s[e] = std::sin(k * L[e]);
    c[e] = std::cos(k * L[e]);
  }
  double total = 0.0;
  for (std::size_t e = 0; e < n; ++e) {
    double prod = L[e] * c[e];
    for (std::size_t j = 0; j < n; ++j)
      if (j != e) prod *= c[j];
    total += prod;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == e) continue;
      double term = -L[j] * s[e] * s[j];
      for (std::size_t m = 0; m < n; ++m)
        if (m != e && m != j) term *= c[m];
      total += term;
    }
  }
  return total;
}

namespace {

struct BondTable {
  // bond 2e: from -> to, bond 2e+1: to -> from
  std::vector<int> start, end;

  explicit BondTable(const MetricGraph& g) {
    const int ne = g.edge_count();
    start.resize(static_cast<std::size_t>(2 * ne));
    end.resize(static_cast<std::size_t>(2 * ne));
    for (int e = 0; e < ne; ++e) {
      start[static_cast<std::size_t>(2 * e)] = g.edge(e).from;
      end[static_cast<std::size_t>(2 * e)] = g.edge(e).to;
      start[static_cast<std::size_t>(2 * e + 1)] = g.edge(e).to;
      end[static_cast<std::size_t>(2 * e + 1)] = g.edge(e).from;
    }
    for (int b = 0; b < 2 * ne; ++b) {
      const int r = b ^ 1;
      if (start[static_cast<std::size_t>(r)] != end[static_cast<std::size_t>(b)] ||
          end[static_cast<std::size_t>(r)] != start[static_cast<std::size_t>(b)])
        throw IndexingError("directed-bond reversal map is inconsistent");
    }
  }
};

}  // namespace

std::complex<double> secular_general(double k, const MetricGraph& graph,
                                     std::span<const double> L) {
  if (static_cast<int>(L.size()) != graph.edge_count())
    throw IndexingError("length vector does not match edge count");
  const int nb = 2 * graph.edge_count();
  const BondTable bonds(graph);
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(nb, nb);
  for (int j = 0; j < nb; ++j) {
    const int v = bonds.end[static_cast<std::size_t>(j)];
    const double dv = graph.degree(v);
    const double lj = L[static_cast<std::size_t>(j / 2)];
    const std::complex<double> phase = std::exp(std::complex<double>(0.0, k * lj));
    for (int jp = 0; jp < nb; ++jp) {
      if (bonds.start[static_cast<std::size_t>(jp)] != v) continue;
      const double ljp = L[static_cast<std::size_t>(jp / 2)];
      double s = (2.0 / dv) * std::sqrt(ljp / lj);
      if (jp == (j ^ 1)) s -= 1.0;
      M(jp, j) -= s * phase;
    }
  }
  return M.determinant();
}

std::complex<double> secular_general(double k, double tau, const MetricGraph& graph,
                                     const LissajousPath& path) {
  const auto L = lengths_at(path, tau);
  return secular_general(k, graph, L);
}

double secular_vertex(double k, const MetricGraph& graph, std::span<const double> L) {
  const int ne = graph.edge_count();
  const int nv = graph.vertex_count();
  const int n = 2 * ne + nv;
  // Unknown layout: [A_e, B_e, phi_v]; g_e(s) = A_e cos(kLs) + B_e sin(kLs)
  // with s = xi + 1/2 running from `from` to `to`.
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int e = 0; e < ne; ++e) {
    const double l = L[static_cast<std::size_t>(e)];
    const double sl = std::sqrt(l);
    const double cs = std::cos(k * l);
    const double sn = std::sin(k * l);
    const Edge& ed = graph.edge(e);
    // Endpoint values tie to the weighted vertex variables.
    M(e, e) = 1.0;
    M(e, 2 * ne + ed.from) = -sl;
    M(ne + e, e) = cs;
    M(ne + e, ne + e) = sn;
    M(ne + e, 2 * ne + ed.to) = -sl;
    // Weighted flux conservation (rows divided by k; derivatives into the
    // edge): at `from` the inward derivative is k L B_e, at `to` it is
    // k L (sin(kL) A_e - cos(kL) B_e).
    const double w = 1.0 / sl;
    M(2 * ne + ed.from, ne + e) += w;
    M(2 * ne + ed.to, e) += w * sn;
    M(2 * ne + ed.to, ne + e) -= w * cs;
  }
  return Eigen::PartialPivLU<Eigen::MatrixXd>(M).determinant();
}

namespace {

struct Refined {
  double k = 0.0;
  bool ok = false;
};

double bisect(const std::function<double(double)>& f, double a, double b, double fa,
              double k_tol) {
  for (int it = 0; it < 120 && (b - a) > k_tol; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if (sign_of(fm) == sign_of(fa)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

double polish_newton(const std::function<double(double)>& f,
                     const std::function<double(double)>& df, double x, double a,
                     double b, double k_tol) {
  for (int it = 0; it < 10; ++it) {
    const double d = df(x);
    if (d == 0.0) break;
    const double dx = f(x) / d;
    double xn = x - dx;
    if (xn <= a || xn >= b) break;
    x = xn;
    if (std::abs(dx) < 0.01 * k_tol) break;
  }
  return x;
}

struct MinimumProbe {
  bool crossing = false;
  double k_cross = 0.0;   // point with opposite sign, if crossing
  double k_min = 0.0;
  double f_min = 0.0;
};

// Zoom grids inside [a, b] looking for either a sign change (a pair of
// roots hiding inside one scan cell) or the bottom of a |f| dip.
MinimumProbe probe_minimum(const std::function<double(double)>& f, double a, double b,
                           int base_sign) {
  MinimumProbe out;
  for (int depth = 0; depth < 4; ++depth) {
    const int nsub = 64;
    double best_k = a, best_f = std::abs(f(a));
    for (int i = 0; i <= nsub; ++i) {
      const double x = a + (b - a) * static_cast<double>(i) / nsub;
      const double fx = f(x);
      if (fx != 0.0 && sign_of(fx) != base_sign) {
        out.crossing = true;
        out.k_cross = x;
        return out;
      }
      if (std::abs(fx) < best_f) {
        best_f = std::abs(fx);
        best_k = x;
      }
    }
    const double w = (b - a) / nsub;
    a = std::max(a, best_k - 2.0 * w);
    b = std::min(b, best_k + 2.0 * w);
    out.k_min = best_k;
    out.f_min = best_f;
  }
  return out;
}

}  // namespace

std::vector<double> find_roots(const MetricGraph& graph, std::span<const double> L,
                               double k_max, const RootOptions& opt) {
  if (!(k_max > 0.0)) throw Error("find_roots needs k_max > 0");
  for (double l : L)
    if (!(l > 0.0)) throw Error("find_roots needs strictly positive lengths");
  const double sumL = sum_of(L);
  const double gap_tol = opt.effective_gap_tol(sumL);
  const bool star = graph.star_center().has_value();

  std::function<double(double)> f, df;
  if (star) {
    f = [&](double k) { return secular_star(k, L); };
    df = [&](double k) { return secular_star_derivative(k, L); };
  } else {
    f = [&](double k) { return secular_vertex(k, graph, L); };
  }
  // No eigenvalue lies below pi / sum(L); minima candidates under this
  // floor are the k = 0 artifact of the secular determinants.
  const double k_floor = 0.5 * M_PI / sumL;

  int density = opt.scan_density;
  for (int attempt = 0; attempt < 3; ++attempt, density *= 3) {
    const double h0 = M_PI / (density * sumL);
    const int ncell = std::max(2, static_cast<int>(std::ceil((k_max - h0) / h0)));
    const double h = (k_max - h0) / ncell;  // grid spans [h0, k_max] inclusive
    std::vector<double> kg(static_cast<std::size_t>(ncell) + 1),
        fg(static_cast<std::size_t>(ncell) + 1);
    for (int i = 0; i <= ncell; ++i) {
      kg[static_cast<std::size_t>(i)] = h0 + h * i;
      fg[static_cast<std::size_t>(i)] = f(kg[static_cast<std::size_t>(i)]);
    }

    std::vector<double> roots;
    auto refine = [&](double a, double b, double fa) {
      double r = bisect(f, a, b, fa, opt.k_tol);
      if (df) r = polish_newton(f, df, r, a, b, opt.k_tol);
      roots.push_back(r);
    };

    for (int i = 0; i + 1 <= ncell; ++i) {
      const double fa = fg[static_cast<std::size_t>(i)];
      const double fb = fg[static_cast<std::size_t>(i + 1)];
      if (fa == 0.0) {
        roots.push_back(kg[static_cast<std::size_t>(i)]);
        continue;
      }
      if (sign_of(fa) * sign_of(fb) < 0)
        refine(kg[static_cast<std::size_t>(i)], kg[static_cast<std::size_t>(i + 1)], fa);
    }

    // Dips of |f| without a sign change: either a root pair inside one
    // cell or a genuine double root (degenerate eigenvalue).
    for (int i = 1; i + 1 <= ncell; ++i) {
      const double fm = fg[static_cast<std::size_t>(i)];
      const double fl = fg[static_cast<std::size_t>(i - 1)];
      const double fr = fg[static_cast<std::size_t>(i + 1)];
      if (fm == 0.0 || kg[static_cast<std::size_t>(i)] < k_floor) continue;
      if (sign_of(fl) != sign_of(fm) || sign_of(fr) != sign_of(fm)) continue;
      if (!(std::abs(fm) < std::abs(fl) && std::abs(fm) <= std::abs(fr))) continue;
      const double scale = std::max({1e-300, std::abs(fl), std::abs(fr)});
      if (std::abs(fm) > 0.2 * scale) continue;  // shallow dip, no root nearby
      const auto probe =
          probe_minimum(f, kg[static_cast<std::size_t>(i - 1)],
                        kg[static_cast<std::size_t>(i + 1)], sign_of(fm));
      if (probe.crossing) {
        refine(kg[static_cast<std::size_t>(i - 1)], probe.k_cross, fl);
        refine(probe.k_cross, kg[static_cast<std::size_t>(i + 1)], f(probe.k_cross));
      } else if (std::abs(probe.f_min) < 1e-12 * std::max(1.0, scale)) {
        throw DegenerateSpectrum("double root of the secular function near k = " +
                                     std::to_string(probe.k_min),
                                 probe.k_min, 0.0);
      }
    }

    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [&](double a, double b) { return b - a < 4.0 * opt.k_tol; }),
                roots.end());
    for (std::size_t i = 1; i < roots.size(); ++i) {
      if (roots[i] - roots[i - 1] < gap_tol)
        throw DegenerateSpectrum("roots closer than gap_tol near k = " +
                                     std::to_string(roots[i]),
                                 roots[i], 0.0);
    }
    if (star) {
      for (double r : roots)
        if (std::abs(f(r)) > opt.residual_tol)
          throw Error("secular residual above tolerance at k = " + std::to_string(r));
    }
    if (weyl_count_ok(roots.size(), k_max, L, graph)) return roots;
  }
  throw Error("root count disagrees with the Weyl estimate after rescans");
}

std::vector<double> find_roots(double tau, const MetricGraph& graph,
                               const LissajousPath& path, double k_max,
                               const RootOptions& opt) {
  const auto L = lengths_at(path, tau);
  return find_roots(graph, L, k_max, opt);
}

EigenDataStar eigen_data_star(double k, std::span<const double> L) {
  const std::size_t n = L.size();
  std::vector<double> c(n);
  for (std::size_t e = 0; e < n; ++e) {
    c[e] = std::cos(k * L[e]);
    if (std::abs(c[e]) < 1e-10)
      throw NearNode("cos(k L_e) ~ 0 on edge " + std::to_string(e) +
                         "; amplitude formula breaks down",
                     k, static_cast<int>(e));
  }
  EigenDataStar ed;
  ed.amplitude.resize(n);
  for (std::size_t e = 0; e < n; ++e) {
    double prod = 1.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != e) prod *= c[j];
    ed.amplitude[e] = prod;
  }
  double n2 = 0.0;
  for (std::size_t e = 0; e < n; ++e)
    n2 += 0.5 * L[e] * ed.amplitude[e] * ed.amplitude[e] * (1.0 + sinc(2.0 * k * L[e]));
  ed.norm_sq = n2;
  const double scale = (ed.amplitude[0] >= 0.0 ? 1.0 : -1.0) / std::sqrt(n2);
  for (double& a : ed.amplitude) a *= scale;
  return ed;
}

double star_eigenfunction(const EigenDataStar& ed, double k, std::span<const double> L,
                          std::size_t edge, double xi) {
  return std::sqrt(L[edge]) * ed.amplitude[edge] * std::cos(k * L[edge] * (xi - 0.5));
}

double star_eigenfunction_dxi(const EigenDataStar& ed, double k, std::span<const double> L,
                              std::size_t edge, double xi) {
  return -std::sqrt(L[edge]) * ed.amplitude[edge] * k * L[edge] *
         std::sin(k * L[edge] * (xi - 0.5));
}

double moment_edge_integral(double beta) {
  const double b2 = beta * beta;
  if (std::abs(beta) < 0.05) {
    return -1.0 / 6.0 +
           b2 * (1.0 / 20.0 + b2 * (-1.0 / 126.0 + b2 * (1.0 / 1620.0 - b2 / 34650.0)));
  }
  const double c = std::cos(beta);
  const double s = std::sin(beta);
  return -1.0 / 12.0 + c * c / (4.0 * b2) - s * c / (4.0 * b2 * beta);
}

std::vector<double> moment_star(double k, std::span<const double> L) {
  const auto ed = eigen_data_star(k, L);
  std::vector<double> m(L.size());
  for (std::size_t e = 0; e < L.size(); ++e)
    m[e] = L[e] * ed.amplitude[e] * ed.amplitude[e] * moment_edge_integral(k * L[e]);
  return m;
}

double moment_quadrature(const std::function<double(double)>& g_edge, int order) {
  const GaussLegendre gl(order);
  return gl.integrate(
      [&](double xi) {
        const double g = g_edge(xi);
        return (xi * xi - 0.25) * g * g;
      },
      -0.5, 0.5);
}

std::vector<double> ground_state_moments(std::span<const double> L) {
  const double sumL = sum_of(L);
  std::vector<double> m(L.size());
  for (std::size_t e = 0; e < L.size(); ++e) m[e] = -L[e] / (6.0 * sumL);
  return m;
}

double LevelCurve::closure() const {
  if (points.size() < 2) return 0.0;
  return std::abs(points.back().k - points.front().k);
}

bool weyl_count_ok(std::size_t n_roots, double k_max, std::span<const double> L,
                   const MetricGraph& graph) {
  const double expected = k_max * sum_of(L) / M_PI;
  const double slack = graph.edge_count() + graph.vertex_count();
  return std::abs(static_cast<double>(n_roots) - expected) <= slack;
}

namespace {

SpectralPoint make_point(double tau, int level, double k, std::span<const double> L,
                         bool star, bool with_eigendata) {
  SpectralPoint pt;
  pt.tau = tau;
  pt.level = level;
  pt.k = k;
  if (!with_eigendata) return pt;
  if (level == 0) {
    const double sumL = sum_of(L);
    pt.amplitude.assign(L.size(), 1.0 / std::sqrt(sumL));
    pt.norm_sq = sumL;
    pt.moment = ground_state_moments(L);
  } else if (star) {
    auto ed = eigen_data_star(k, L);
    pt.norm_sq = ed.norm_sq;
    pt.moment = moment_star(k, L);
    pt.amplitude = std::move(ed.amplitude);
  }
  return pt;
}

}  // namespace

std::vector<LevelCurve> track_levels(const MetricGraph& graph, const LissajousPath& path,
                                     int n_levels, std::span<const double> tau_grid,
                                     const TrackOptions& opt) {
  if (n_levels < 1) throw Error("track_levels needs n_levels >= 1");
  if (path.edge_count() != static_cast<std::size_t>(graph.edge_count()))
    throw Error("path does not match the graph edge count");
  if (tau_grid.size() < 2 || std::abs(tau_grid.front()) > 1e-12 ||
      std::abs(tau_grid.back() - 1.0) > 1e-12)
    throw Error("tau_grid must cover [0, 1]");

  const bool star = graph.star_center().has_value();
  double sum_min = 0.0;
  for (std::size_t e = 0; e < path.edge_count(); ++e)
    sum_min += path.mean_length[e] - path.amplitude[e];
  const double k_max =
      (n_levels + graph.edge_count() + graph.vertex_count() + 2) * M_PI / sum_min;
  const double speed = path.max_relative_speed();

  std::vector<LevelCurve> curves(static_cast<std::size_t>(n_levels));
  for (int n = 0; n < n_levels; ++n) {
    curves[static_cast<std::size_t>(n)].level = n;
    curves[static_cast<std::size_t>(n)].tau_grid.assign(tau_grid.begin(), tau_grid.end());
    curves[static_cast<std::size_t>(n)].points.reserve(tau_grid.size());
  }

  // Per-tau solves are independent; stitch and validate sequentially after.
  const std::size_t n_nodes = tau_grid.size();
  std::vector<std::vector<SpectralPoint>> node_points(n_nodes);
  parallel_for(n_nodes, opt.workers, [&](std::size_t i) {
    const double tau = tau_grid[i];
    const auto L = lengths_at(path, tau);
    std::vector<double> roots;
    try {
      roots = find_roots(graph, L, k_max, opt.roots);
    } catch (const DegenerateSpectrum& ex) {
      throw DegenerateSpectrum(std::string(ex.what()) + " at tau = " + std::to_string(tau),
                               ex.k(), tau);
    }
    if (static_cast<int>(roots.size()) < n_levels - 1)
      throw Error("found fewer roots than requested levels at tau = " + std::to_string(tau));
    auto& pts = node_points[i];
    pts.reserve(static_cast<std::size_t>(n_levels));
    pts.push_back(make_point(tau, 0, 0.0, L, star, opt.with_eigendata));
    for (int n = 1; n < n_levels; ++n)
      pts.push_back(make_point(tau, n, roots[static_cast<std::size_t>(n - 1)], L, star,
                               opt.with_eigendata));
  });

  for (std::size_t i = 1; i < n_nodes; ++i) {
    const double dtau = tau_grid[i] - tau_grid[i - 1];
    for (int n = 1; n < n_levels; ++n) {
      const double k_prev = node_points[i - 1][static_cast<std::size_t>(n)].k;
      const double k_here = node_points[i][static_cast<std::size_t>(n)].k;
      const double bound =
          opt.continuity_safety * speed * std::max(k_prev, 1.0) * dtau + 1e-9;
      if (std::abs(k_here - k_prev) > bound)
        throw TrackingLost("level continuity violated at tau = " +
                               std::to_string(tau_grid[i]),
                           tau_grid[i], n);
    }
  }

  for (std::size_t i = 0; i < n_nodes; ++i)
    for (int n = 0; n < n_levels; ++n)
      curves[static_cast<std::size_t>(n)].points.push_back(
          std::move(node_points[i][static_cast<std::size_t>(n)]));
  return curves;
}

}  // namespace qgliss
