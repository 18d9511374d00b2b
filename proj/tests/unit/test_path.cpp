#include <doctest.h>

#include <cmath>

#include "qgliss/errors.hpp"
#include "qgliss/graph.hpp"
#include "qgliss/path.hpp"

using namespace qgliss;

namespace {

LissajousPath star3_path() {
  LissajousPath p;
  p.mean_length = {1.0, 1.0, 1.0};
  p.amplitude = {0.1, 0.1, 0.1};
  p.frequency = {2, 3, 5};
  p.phase = {0.0, M_PI / 15.0, 6.0 * M_PI / 11.0};
  p.adiabatic_scale = 100.0;
  return p;
}

bool has_code(const std::vector<ValidationIssue>& issues, ValidationIssue::Code c) {
  for (const auto& i : issues)
    if (i.code == c) return true;
  return false;
}

}  // namespace

TEST_CASE("validate accepts the 3-star reference path") {
  const auto g = MetricGraph::star(3);
  LissajousPath p = star3_path();
  CHECK(validate(g, p).empty());
}

TEST_CASE("validate rejects rho >= Lbar") {
  const auto g = MetricGraph::star(3);
  LissajousPath p = star3_path();
  p.amplitude[0] = 1.0;  // == Lbar
  const auto issues = validate(g, p);
  CHECK(has_code(issues, ValidationIssue::Code::NonPositiveLength));
  CHECK_THROWS_AS(validate_or_throw(g, p), ValidationError);
}

TEST_CASE("validate rejects non-coprime active frequencies") {
  const auto g = MetricGraph::star(3);
  LissajousPath p = star3_path();
  p.frequency = {2, 4, 6};
  CHECK(has_code(validate(g, p), ValidationIssue::Code::NotCoprime));

  // Deactivating edges removes them from the gcd set.
  p.amplitude = {0.1, 0.0, 0.0};
  CHECK(!validate(g, p).empty());  // gcd {2} = 2, still not coprime
  p.frequency = {1, 4, 6};
  CHECK(validate(g, p).empty());
}

TEST_CASE("validate rejects loops and disconnected graphs") {
  {
    MetricGraph g({"a", "b"}, {Edge{"e1", 0, 0}, Edge{"e2", 0, 1}});
    LissajousPath p;
    p.mean_length = {1.0, 1.0};
    p.amplitude = {0.0, 0.0};
    p.frequency = {1, 1};
    p.phase = {0.0, 0.0};
    CHECK(has_code(validate(g, p), ValidationIssue::Code::LoopEdge));
  }
  {
    MetricGraph g({"a", "b", "c", "d"}, {Edge{"e1", 0, 1}, Edge{"e2", 2, 3}});
    LissajousPath p;
    p.mean_length = {1.0, 1.0};
    p.amplitude = {0.0, 0.0};
    p.frequency = {1, 1};
    p.phase = {0.0, 0.0};
    CHECK(has_code(validate(g, p), ValidationIssue::Code::DisconnectedGraph));
  }
}

TEST_CASE("sample_path closed forms at tau = 0") {
  LissajousPath p;
  p.mean_length = {1.0};
  p.amplitude = {0.1};
  p.frequency = {2};
  p.phase = {0.0};
  const auto s = sample_path(p, 0.0);
  CHECK(s.length[0] == doctest::Approx(1.1).epsilon(1e-15));
  CHECK(s.dlength[0] == doctest::Approx(0.0));
  CHECK(s.ddlength[0] ==
        doctest::Approx(-0.1 * 4.0 * M_PI * M_PI * 4.0).epsilon(1e-14));  // -rho (2 pi nu)^2
}

TEST_CASE("static edges have constant samples") {
  LissajousPath p;
  p.mean_length = {0.7, 1.3};
  p.amplitude = {0.0, 0.0};
  p.frequency = {3, 4};
  p.phase = {0.3, 1.0};
  for (double tau : {0.0, 0.31, 0.77}) {
    const auto s = sample_path(p, tau);
    CHECK(s.length[0] == 0.7);
    CHECK(s.length[1] == 1.3);
    CHECK(s.dlength[0] == 0.0);
    CHECK(s.ddlength[1] == 0.0);
  }
}

TEST_CASE("sample_path matches direct substitution for the 9/2-knot parameters") {
  const auto p = star3_path();
  const double tau = 0.25;
  const auto s = sample_path(p, tau);
  for (std::size_t e = 0; e < 3; ++e) {
    const double w = 2.0 * M_PI * p.frequency[e];
    const double L = p.mean_length[e] + p.amplitude[e] * std::cos(w * tau + p.phase[e]);
    const double dL = -p.amplitude[e] * w * std::sin(w * tau + p.phase[e]);
    const double ddL = -p.amplitude[e] * w * w * std::cos(w * tau + p.phase[e]);
    CHECK(s.length[e] == doctest::Approx(L).epsilon(1e-15));
    CHECK(s.dlength[e] == doctest::Approx(dL).epsilon(1e-15));
    CHECK(s.ddlength[e] == doctest::Approx(ddL).epsilon(1e-15));
  }
}

TEST_CASE("cycle closure: sample at tau = 0 equals tau = 1") {
  const auto p = star3_path();
  const auto a = sample_path(p, 0.0);
  const auto b = sample_path(p, 1.0);
  for (std::size_t e = 0; e < 3; ++e) {
    CHECK(a.length[e] == doctest::Approx(b.length[e]).epsilon(1e-13));
    CHECK(a.dlength[e] == doctest::Approx(b.dlength[e]).epsilon(2e-12));
    CHECK(a.ddlength[e] == doctest::Approx(b.ddlength[e]).epsilon(2e-12));
  }
}

TEST_CASE("derivatives agree with central finite differences") {
  const auto p = star3_path();
  const double h = 1e-5;
  for (double tau : {0.11, 0.43, 0.86}) {
    const auto sm = sample_path(p, tau - h);
    const auto s0 = sample_path(p, tau);
    const auto sp = sample_path(p, tau + h);
    for (std::size_t e = 0; e < 3; ++e) {
      const double fd1 = (sp.length[e] - sm.length[e]) / (2.0 * h);
      const double fd2 = (sp.length[e] - 2.0 * s0.length[e] + sm.length[e]) / (h * h);
      CHECK(std::abs(fd1 - s0.dlength[e]) < 1e-5);
      CHECK(std::abs(fd2 - s0.ddlength[e]) < 1e-3);
      // d2(L^2)/dtau2 against finite differences of L^2 itself
      const double fd2sq = (sp.length[e] * sp.length[e] - 2.0 * s0.length[e] * s0.length[e] +
                            sm.length[e] * sm.length[e]) /
                           (h * h);
      CHECK(std::abs(fd2sq - s0.ddlength_sq[e]) < 1e-3);
    }
  }
}

TEST_CASE("edge permutation permutes samples") {
  auto p = star3_path();
  auto q = p;
  std::swap(q.mean_length[0], q.mean_length[2]);
  std::swap(q.amplitude[0], q.amplitude[2]);
  std::swap(q.frequency[0], q.frequency[2]);
  std::swap(q.phase[0], q.phase[2]);
  const auto sp = sample_path(p, 0.37);
  const auto sq = sample_path(q, 0.37);
  CHECK(sp.length[0] == sq.length[2]);
  CHECK(sp.length[2] == sq.length[0]);
  CHECK(sp.dlength[0] == sq.dlength[2]);
  CHECK(sp.ddlength_sq[1] == sq.ddlength_sq[1]);
}

TEST_CASE("knot polyline closes and honors the amplitude box") {
  auto p = star3_path();
  p.phase = {0.0, M_PI / 15.0, 9.0 * M_PI / 11.0};  // unknot phases
  const auto pts = knot_polyline(p, 257);
  CHECK(pts.front() == pts.back());

  const auto fine = knot_polyline(p, 10000);
  for (int c = 0; c < 3; ++c) {
    double lo = 1e300, hi = -1e300;
    for (const auto& pt : fine) {
      lo = std::min(lo, pt[static_cast<std::size_t>(c)]);
      hi = std::max(hi, pt[static_cast<std::size_t>(c)]);
    }
    CHECK(std::abs(lo - (p.mean_length[static_cast<std::size_t>(c)] -
                         p.amplitude[static_cast<std::size_t>(c)])) < 1e-4);
    CHECK(std::abs(hi - (p.mean_length[static_cast<std::size_t>(c)] +
                         p.amplitude[static_cast<std::size_t>(c)])) < 1e-4);
  }
}

TEST_CASE("degenerate polyline for a static path") {
  auto p = star3_path();
  p.amplitude = {0.0, 0.0, 0.0};
  const auto pts = knot_polyline(p, 64);
  for (const auto& pt : pts) {
    CHECK(pt[0] == 1.0);
    CHECK(pt[1] == 1.0);
    CHECK(pt[2] == 1.0);
  }
}

TEST_CASE("knot polyline needs three edges") {
  LissajousPath p;
  p.mean_length = {1.0};
  p.amplitude = {0.1};
  p.frequency = {1};
  p.phase = {0.0};
  CHECK_THROWS_AS(knot_polyline(p, 16), WrongDimension);
}

TEST_CASE("star factory and star detection") {
  const auto g = MetricGraph::star(3);
  CHECK(g.vertex_count() == 4);
  CHECK(g.edge_count() == 3);
  CHECK(g.degree(0) == 3);
  CHECK(g.star_center().has_value());
  CHECK(*g.star_center() == 0);
  CHECK(g.is_connected());
  CHECK(!g.has_loop());

  // P4 path graph is not a star.
  MetricGraph p4({"a", "b", "c", "d"}, {Edge{"1", 0, 1}, Edge{"2", 1, 2}, Edge{"3", 2, 3}});
  CHECK(!p4.star_center().has_value());
  // Interval is.
  CHECK(MetricGraph::interval().star_center().has_value());
}
