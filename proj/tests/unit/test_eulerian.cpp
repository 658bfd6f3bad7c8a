#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "stickyflow/eulerian.hpp"
#include "stickyflow/presets.hpp"

using namespace stickyflow;

namespace {

struct Levels {
  std::vector<double> mass, momentum;
};

Levels residual_levels(const ParticleSystem& sys, const ForceField& f, const TestFunction& phi,
                       TimeQuadrature rule) {
  Levels out;
  for (double dt : {0.02, 0.01, 0.005}) {
    const auto traj = evolve_sticky(sys, f, 1.0, dt);
    const auto r = weak_residual(traj, f, phi, rule);
    out.mass.push_back(r.mass);
    out.momentum.push_back(r.momentum);
  }
  return out;
}

void check_first_order(const std::vector<double>& r) {
  for (double q : richardson_ratios(r)) {
    CHECK(q >= 1.6);
    CHECK(q <= 2.4);
  }
}

}  // namespace

TEST_CASE("to_eulerian groups plateaus and averages momentum") {
  const Grid g4(4);
  auto mu = to_eulerian(TransportMap(g4, {0, 0, 0, 0}), VelocityField(g4, {3, 3, 3, 3}));
  REQUIRE(mu.size() == 1);
  CHECK(mu.atoms()[0].position == 0.0);
  CHECK(mu.atoms()[0].mass == 1.0);
  CHECK(*mu.atoms()[0].momentum == 3.0);

  mu = to_eulerian(TransportMap(g4, {0, 0, 1, 1}), VelocityField(g4, {1, -1, 2, 2}));
  REQUIRE(mu.size() == 2);
  CHECK(mu.atoms()[0].mass == 0.5);
  CHECK(*mu.atoms()[0].momentum == 0.0);
  CHECK(mu.atoms()[1].position == 1.0);
  CHECK(*mu.atoms()[1].momentum == 1.0);

  oracle::Gen gen(59);
  const Grid g(40);
  auto xs = gen.sorted_normals(40);
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  REQUIRE(xs.size() == 40);
  const auto vs = gen.normals(40);
  mu = to_eulerian(TransportMap(g, xs), VelocityField(g, vs));
  REQUIRE(mu.size() == 40);
  for (std::size_t i = 0; i < 40; ++i) {
    CHECK(mu.atoms()[i].mass == doctest::Approx(1.0 / 40));
    CHECK(*mu.atoms()[i].momentum == doctest::Approx(vs[i] / 40));
  }
}

TEST_CASE("d2 distance") {
  oracle::Gen gen(61);
  const Grid g(64);
  const TransportMap x(g, gen.sorted_normals(64));
  const auto vs = gen.normals(64);
  const VelocityField v(g, vs);
  CHECK(d2_distance(x, v, x, v) == 0.0);
  auto shifted = vs;
  for (double& s : shifted) s += 0.75;
  CHECK(d2_distance(x, v, x, VelocityField(g, shifted)) == doctest::Approx(0.75));

  for (int trial = 0; trial < 200; ++trial) {
    std::vector<TransportMap> xs;
    std::vector<VelocityField> us;
    for (int k = 0; k < 3; ++k) {
      xs.emplace_back(g, gen.sorted_normals(64));
      us.emplace_back(g, gen.normals(64));
    }
    const double ab = d2_distance(xs[0], us[0], xs[1], us[1]);
    const double ba = d2_distance(xs[1], us[1], xs[0], us[0]);
    const double bc = d2_distance(xs[1], us[1], xs[2], us[2]);
    const double ac = d2_distance(xs[0], us[0], xs[2], us[2]);
    CHECK(ab == ba);
    CHECK(ac <= ab + bc + 1e-12);
    CHECK(ab == std::max(wasserstein2(xs[0], xs[1]), u2_semidistance(xs[0], us[0], xs[1], us[1])));
  }
  CHECK_THROWS_AS(d2_distance(x, v, TransportMap(Grid(2), {0, 1}), VelocityField(Grid(2), {0, 0})),
                  GridMismatch);
}

TEST_CASE("test functions have consistent derivatives") {
  oracle::Gen gen(67);
  for (const TestFunction& phi : default_test_functions(0.0, 1.0, -1.0, 2.0)) {
    CHECK(phi.t_min() == doctest::Approx(0.1));
    CHECK(phi.t_max() == doctest::Approx(0.9));
    CHECK(phi.value(0.05, 0.5) == 0.0);
    CHECK(phi.value(0.5, 2.5) == 0.0);
    CHECK_FALSE(phi.describe().empty());
    for (int k = 0; k < 50; ++k) {
      const double t = gen.uniform(0.1, 0.9), x = gen.uniform(-1, 2), h = 1e-6;
      const double dt = (phi.value(t + h, x) - phi.value(t - h, x)) / (2 * h);
      const double dx = (phi.value(t, x + h) - phi.value(t, x - h)) / (2 * h);
      CHECK(phi.dt(t, x) == doctest::Approx(dt).epsilon(1e-6).scale(1.0));
      CHECK(phi.dx(t, x) == doctest::Approx(dx).epsilon(1e-6).scale(1.0));
    }
  }
  CHECK_THROWS(TestFunction(0.5, 0.0, SpaceProfile::Bump, 0, 1));
}

TEST_CASE("stationary particle has vanishing residuals") {
  const ParticleSystem rest({1.0}, {0.4}, {0.0});
  const auto f = ForceField::euler_poisson(0.0);
  const auto traj = evolve_sticky(rest, f, 1.0, 0.05);
  for (const TestFunction& phi : default_test_functions(0.0, 1.0, 0.0, 1.0)) {
    const auto r = weak_residual(traj, f, phi);
    CHECK(std::abs(r.mass) <= 1e-12);
    CHECK(std::abs(r.momentum) <= 1e-12);
  }
}

TEST_CASE("free particle residuals decay at first order") {
  const ParticleSystem p({1.0}, {0.3}, {0.7});
  const auto f = ForceField::euler_poisson(0.0);
  for (const TestFunction& phi : default_test_functions(0.0, 1.0, 0.0, 1.2)) {
    const auto lv = residual_levels(p, f, phi, TimeQuadrature::BackwardHold);
    check_first_order(lv.mass);
    check_first_order(lv.momentum);
  }
}

TEST_CASE("merging pair residuals decay at first order") {
  const ParticleSystem pair({0.5, 0.5}, {0.2, 0.8}, {0.5, -0.45});
  const auto f = ForceField::euler_poisson(0.0);
  const auto traj = evolve_sticky(pair, f, 1.0, 0.01);
  REQUIRE(traj.events.size() == 1);
  for (const TestFunction& phi : default_test_functions(0.0, 1.0, 0.0, 1.2)) {
    const auto lv = residual_levels(pair, f, phi, TimeQuadrature::BackwardHold);
    check_first_order(lv.mass);
    check_first_order(lv.momentum);
  }
}

TEST_CASE("a bump centred between the incoming particles is superconvergent in momentum") {
  const ParticleSystem pair({0.5, 0.5}, {0.2, 0.8}, {0.5, -0.45});
  const auto f = ForceField::euler_poisson(0.0);
  const TestFunction phi(0.5, 0.4, SpaceProfile::Bump, 0.5, 0.5);
  const auto lv = residual_levels(pair, f, phi, TimeQuadrature::BackwardHold);
  check_first_order(lv.mass);
  for (double q : richardson_ratios(lv.momentum)) CHECK(q >= 3.0);
}

TEST_CASE("event nodes carry the pre-collision state on the left") {
  const ParticleSystem pair({0.5, 0.5}, {0, 1}, {1, -1});
  const auto f = ForceField::euler_poisson(0.0);
  const auto nodes = weak_nodes(evolve_sticky(pair, f, 1.0, 0.3), f);
  REQUIRE(nodes.size() == 6);
  const WeakNode& e = nodes[2];
  CHECK(e.time == doctest::Approx(0.5));
  CHECK(e.left.masses.size() == 2);
  CHECK(e.right.masses.size() == 1);
  CHECK(nodes[1].left.masses.size() == nodes[1].right.masses.size());

  const auto sampled = weak_nodes(evolve_sticky(pair, f, 1.0, 0.25), f);
  REQUIRE(sampled.size() == 5);
  CHECK(sampled[2].left.masses.size() == 2);
  CHECK(sampled[2].right.masses.size() == 1);
}

TEST_CASE("trapezoid quadrature is of higher order on smooth motion") {
  const ParticleSystem p({1.0}, {0.3}, {0.7});
  const auto f = ForceField::euler_poisson(0.0);
  const TestFunction phi(0.5, 0.4, SpaceProfile::Bump, 0.6, 0.6);
  const auto lv = residual_levels(p, f, phi, TimeQuadrature::Trapezoid);
  for (double q : richardson_ratios(lv.mass)) CHECK(q >= 3.5);
}

TEST_CASE("mass residual of the inclusion scheme decays with the step") {
  Rng rng(71);
  const Grid g(128);
  const auto st = random_smooth_state(g, rng);
  const auto f = ForceField::euler_poisson(1.0);
  double lo = 1e300, hi = -1e300;
  for (double v : st.position.values()) lo = std::min(lo, v), hi = std::max(hi, v);
  const TestFunction phi(0.5, 0.4, SpaceProfile::Bump, 0.5 * (lo + hi), hi - lo);
  std::vector<double> r;
  for (double tau : {0.01, 0.005, 0.0025}) {
    const auto traj = evolve_inclusion(st.position, st.velocity, f, 1.0, tau);
    const auto nodes = weak_nodes(traj, f);
    r.push_back(weak_residual(nodes, phi).mass);
  }
  for (double q : richardson_ratios(r)) CHECK(q >= 1.5);
}

TEST_CASE("support outside the sampled window is rejected") {
  const ParticleSystem p({1.0}, {0.3}, {0.7});
  const auto f = ForceField::euler_poisson(0.0);
  const auto traj = evolve_sticky(p, f, 1.0, 0.1);
  CHECK_THROWS(weak_residual(traj, f, TestFunction(0.9, 0.3, SpaceProfile::Bump, 0.5, 1.0)));
  const std::vector<double> r{0.4, 0.2, 0.1};
  CHECK(richardson_ratios(r) == std::vector<double>{2.0, 2.0});
}
