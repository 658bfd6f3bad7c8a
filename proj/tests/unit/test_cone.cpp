#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "stickyflow/cone.hpp"
#include "stickyflow/euler_poisson.hpp"

using namespace stickyflow;

namespace {

std::vector<double> vals(const TransportMap& x) { return {x.values().begin(), x.values().end()}; }

double inner(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s / static_cast<double>(a.size());
}

}  // namespace

TEST_CASE("cumulative primitive") {
  auto p = cumulative_primitive(std::vector<double>{2.0, 2.0});
  CHECK(p == std::vector<EnvelopePoint>{{0, 0}, {0.5, 1.0}, {1, 2.0}});
  p = cumulative_primitive(std::vector<double>{0, 1});
  CHECK(p == std::vector<EnvelopePoint>{{0, 0}, {0.5, 0}, {1, 0.5}});
  p = cumulative_primitive(std::vector<double>{1, -1});
  CHECK(p == std::vector<EnvelopePoint>{{0, 0}, {0.5, 0.5}, {1, 0}});
}

TEST_CASE("lower convex envelope") {
  std::vector<EnvelopePoint> convex;
  for (int k = 0; k <= 10; ++k) convex.push_back({k / 10.0, 0.5 * (k / 10.0) * (k / 10.0)});
  CHECK(lower_convex_envelope(convex).size() == convex.size());

  const std::vector<EnvelopePoint> bump{{0, 0}, {0.5, 0.5}, {1, 0}};
  CHECK(lower_convex_envelope(bump) == std::vector<EnvelopePoint>{{0, 0}, {1, 0}});
  CHECK_THROWS(lower_convex_envelope(std::vector<EnvelopePoint>{{0, 0}}));
  CHECK_THROWS(lower_convex_envelope(std::vector<EnvelopePoint>{{0, 0}, {0, 1}}));

  oracle::Gen gen(23);
  std::vector<EnvelopePoint> pts;
  for (int k = 0; k < 1000; ++k) pts.push_back({k / 999.0, gen.normal()});
  const auto hull = lower_convex_envelope(pts);
  CHECK(hull.front() == pts.front());
  CHECK(hull.back() == pts.back());
  for (std::size_t s = 2; s < hull.size(); ++s) {
    const double s0 = (hull[s - 1].value - hull[s - 2].value) / (hull[s - 1].m - hull[s - 2].m);
    const double s1 = (hull[s].value - hull[s - 1].value) / (hull[s].m - hull[s - 1].m);
    CHECK(s1 >= s0 - 1e-9);
  }
  std::size_t seg = 1;
  for (const auto& p : pts) {
    while (hull[seg].m < p.m) ++seg;
    const auto& a = hull[seg - 1];
    const auto& b = hull[seg];
    const double interp = a.value + (b.value - a.value) * (p.m - a.m) / (b.m - a.m);
    CHECK(interp <= p.value + 1e-12);
  }
}

TEST_CASE("project_cone examples") {
  const Grid g2(2);
  CHECK(vals(project_cone(g2, std::vector<double>{1, -1})) == std::vector<double>{0, 0});
  oracle::Gen gen(1);
  const auto mono = gen.monotone_with_ties(50);
  CHECK(vals(project_cone(Grid(50), mono)) == mono);

  const Grid g(10000);
  const auto free = two_rarefaction_free_flow(2.0, g);
  const auto y = project_cone(g, free);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (std::abs(g.centered(i)) <= 0.4) {
      CHECK(std::abs(y[i]) <= 1e-12);
    } else {
      CHECK(y[i] == free[i]);
    }
  }
}

TEST_CASE("project_cone matches the exhaustive minimizer") {
  oracle::Gen gen(29);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = gen.size(1, 10);
    const auto x = gen.normals(n);
    const auto y = isotonic_projection(x);
    const auto ref = oracle::brute_isotonic(x);
    for (std::size_t i = 0; i < n; ++i) CHECK(y[i] == doctest::Approx(ref[i]).epsilon(1e-9));
  }
}

TEST_CASE("PAVA examples and agreement with the envelope") {
  const Grid g3(3), g2(2);
  CHECK(vals(project_cone_pava(g3, std::vector<double>{3, 1, 2})) == std::vector<double>{2, 2, 2});
  const std::vector<double> w{3, 1};
  CHECK(vals(project_cone_pava(g2, std::vector<double>{1, -1}, w)) ==
        std::vector<double>{0.5, 0.5});
  CHECK(vals(project_cone_pava(g3, std::vector<double>{1, 2, 3})) == std::vector<double>{1, 2, 3});
  const std::vector<double> bad{1, 0};
  CHECK_THROWS(project_cone_pava(g2, std::vector<double>{1, -1}, bad));

  oracle::Gen gen(31);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = gen.size(1, 2000);
    const auto x = gen.normals(n);
    const auto a = isotonic_projection(x);
    const auto b = isotonic_pava(x, std::vector<double>(n, 1.0));
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-9);
  }
}

TEST_CASE("projection is a contraction and satisfies the variational inequality") {
  oracle::Gen gen(37);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = gen.size(1, 100);
    const auto x1 = gen.normals(n);
    auto x2 = x1;
    for (double& v : x2) v += 0.3 * gen.normal();
    const auto p1 = isotonic_projection(x1), p2 = isotonic_projection(x2);
    const auto d0 = difference(x1, x2), d1 = difference(p1, p2);
    CHECK(norm_l1(d1) <= norm_l1(d0) + 1e-12);
    CHECK(norm_l2(d1) <= norm_l2(d0) + 1e-12);
    CHECK(norm_linf(d1) <= norm_linf(d0) + 1e-12);

    const auto r = difference(x1, p1);
    for (int k = 0; k < 5; ++k) {
      const auto z = gen.monotone_with_ties(n);
      const double lhs = inner(r, difference(z, p1));
      CHECK(lhs <= 1e-10 * (1.0 + norm_l2(r) * norm_l2(difference(z, p1))));
    }
  }
}

TEST_CASE("projection is idempotent and dominated") {
  oracle::Gen gen(41);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = gen.normals(gen.size(1, 80));
    const auto y = isotonic_projection(x);
    CHECK(isotonic_projection(y) == y);
    CHECK(dominates(y, x));
  }
  const std::vector<double> x{0.5, -1, 2};
  CHECK(dominates(x, x));
  const std::vector<double> twice{1, -2, 4};
  CHECK_FALSE(dominates(twice, x));
}

TEST_CASE("periodic rearrangement") {
  const Grid g(8);
  const auto id = g.midpoints();
  CHECK(periodic_rearrange(id) == id);
  const std::vector<double> sorted{0.1, 0.2, 0.2, 0.7, 0.9, 1.05, 1.08, 1.09};
  CHECK(periodic_rearrange(sorted) == sorted);

  std::vector<double> y(8);
  for (std::size_t i = 0; i < 8; ++i) y[i] = id[i] < 0.5 ? id[i] + 0.6 : id[i] - 0.6;
  const auto out = periodic_rearrange(y);
  CHECK(std::is_sorted(out.begin(), out.end()));
  for (int k = 1; k <= 8; ++k) {
    double s0 = 0, c0 = 0, s1 = 0, c1 = 0;
    for (std::size_t i = 0; i < 8; ++i) {
      s0 += std::sin(2 * std::numbers::pi * k * y[i]);
      c0 += std::cos(2 * std::numbers::pi * k * y[i]);
      s1 += std::sin(2 * std::numbers::pi * k * out[i]);
      c1 += std::cos(2 * std::numbers::pi * k * out[i]);
    }
    CHECK(std::abs(s0 - s1) / 8 <= 1e-12);
    CHECK(std::abs(c0 - c1) / 8 <= 1e-12);
  }
}

TEST_CASE("periodic rearrangement preserves moments and is nonexpansive") {
  oracle::Gen gen(43);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = gen.size(1, 64);
    const Grid g(n);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = g.midpoint(i) + 0.8 * gen.normal();
      b[i] = a[i] + 0.2 * gen.normal();
    }
    const auto ra = periodic_rearrange(a), rb = periodic_rearrange(b);
    CHECK(std::is_sorted(ra.begin(), ra.end()));
    double sa = 0, sr = 0;
    for (std::size_t i = 0; i < n; ++i) {
      sa += a[i];
      sr += ra[i];
    }
    CHECK(sr == doctest::Approx(sa).epsilon(1e-12));
    for (int k = 1; k <= 8; ++k) {
      double m0 = 0, m1 = 0;
      for (std::size_t i = 0; i < n; ++i) {
        m0 += std::cos(2 * std::numbers::pi * k * a[i] + 0.3);
        m1 += std::cos(2 * std::numbers::pi * k * ra[i] + 0.3);
      }
      CHECK(std::abs(m0 - m1) / static_cast<double>(n) <= 1e-10);
    }
    CHECK(norm_l2(difference(ra, rb)) <= norm_l2(difference(a, b)) + 1e-12);
  }
}
