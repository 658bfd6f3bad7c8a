#include "stickyflow/eulerian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace stickyflow {

namespace {

double bump(double u) {
  if (std::abs(u) >= 1.0) return 0.0;
  const double w = 1.0 - u * u;
  return w * w;
}

double bump_prime(double u) {
  if (std::abs(u) >= 1.0) return 0.0;
  return -4.0 * u * (1.0 - u * u);
}

WeakState atom_state(const ParticleSystem& sys, const ForceField& f) {
  WeakState s;
  s.masses.assign(sys.masses().begin(), sys.masses().end());
  s.positions.assign(sys.positions().begin(), sys.positions().end());
  s.velocities.assign(sys.velocities().begin(), sys.velocities().end());
  s.accelerations = discrete_projected_force(f, sys);
  return s;
}

struct Integrals {
  double mass = 0.0;
  double momentum = 0.0;
};

// Pointwise integrands of the weak form at time t.
Integrals integrands(const WeakState& s, const TestFunction& phi, double t) {
  Integrals out;
  for (std::size_t j = 0; j < s.masses.size(); ++j) {
    const double x = s.positions[j];
    const double v = s.velocities[j];
    const double pt = phi.dt(t, x);
    const double px = phi.dx(t, x);
    out.mass += s.masses[j] * (pt + v * px);
    out.momentum += s.masses[j] * (v * pt + v * v * px + s.accelerations[j] * phi.value(t, x));
  }
  return out;
}

}  // namespace

EulerianMeasure to_eulerian(const TransportMap& x, const VelocityField& v) {
  require_same_grid(x.grid(), v.grid());
  const auto xs = x.values();
  const auto vs = v.values();
  const long double w = x.grid().width();
  std::vector<Atom> atoms;
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= xs.size(); ++i) {
    if (i == xs.size() || xs[i] != xs[begin]) {
      long double p = 0.0L;
      for (std::size_t k = begin; k < i; ++k) p += vs[k];
      atoms.push_back({xs[begin], static_cast<double>(static_cast<long double>(i - begin) * w),
                       static_cast<double>(p * w)});
      begin = i;
    }
  }
  return EulerianMeasure(std::move(atoms));
}

double d2_distance(const TransportMap& x1, const VelocityField& v1, const TransportMap& x2,
                   const VelocityField& v2) {
  return std::max(wasserstein2(x1, x2), u2_semidistance(x1, v1, x2, v2));
}

TestFunction::TestFunction(double t_center, double t_radius, SpaceProfile profile, double x_center,
                           double x_radius, double wavenumber)
    : tc_(t_center), tr_(t_radius), profile_(profile), xc_(x_center), xr_(x_radius),
      k_(wavenumber) {
  if (!(t_radius > 0.0) || !(x_radius > 0.0)) {
    throw std::invalid_argument("test function radii must be positive");
  }
}

double TestFunction::value(double t, double x) const {
  const double T = bump((t - tc_) / tr_);
  const double b = bump((x - xc_) / xr_);
  switch (profile_) {
    case SpaceProfile::Bump: return T * b;
    case SpaceProfile::LinearBump: return T * x * b;
    case SpaceProfile::SineBump: return T * std::sin(k_ * x) * b;
  }
  return 0.0;
}

double TestFunction::dt(double t, double x) const {
  const double T = bump_prime((t - tc_) / tr_) / tr_;
  const double b = bump((x - xc_) / xr_);
  switch (profile_) {
    case SpaceProfile::Bump: return T * b;
    case SpaceProfile::LinearBump: return T * x * b;
    case SpaceProfile::SineBump: return T * std::sin(k_ * x) * b;
  }
  return 0.0;
}

double TestFunction::dx(double t, double x) const {
  const double T = bump((t - tc_) / tr_);
  const double u = (x - xc_) / xr_;
  const double b = bump(u);
  const double db = bump_prime(u) / xr_;
  switch (profile_) {
    case SpaceProfile::Bump: return T * db;
    case SpaceProfile::LinearBump: return T * (b + x * db);
    case SpaceProfile::SineBump: return T * (k_ * std::cos(k_ * x) * b + std::sin(k_ * x) * db);
  }
  return 0.0;
}

std::string TestFunction::describe() const {
  std::ostringstream os;
  switch (profile_) {
    case SpaceProfile::Bump: os << "bump"; break;
    case SpaceProfile::LinearBump: os << "x*bump"; break;
    case SpaceProfile::SineBump: os << "sin(" << k_ << "x)*bump"; break;
  }
  os << " t:" << tc_ << "+-" << tr_ << " x:" << xc_ << "+-" << xr_;
  return os.str();
}

std::vector<TestFunction> default_test_functions(double t_begin, double t_end, double x_lo,
                                                 double x_hi) {
  if (!(t_end > t_begin) || !(x_hi > x_lo)) throw std::invalid_argument("empty test window");
  const double tc = 0.5 * (t_begin + t_end);
  const double tr = 0.4 * (t_end - t_begin);
  const double xc = 0.5 * (x_lo + x_hi);
  const double xr = 0.5 * (x_hi - x_lo);
  return {
      TestFunction(tc, tr, SpaceProfile::Bump, xc, xr),
      TestFunction(tc, tr, SpaceProfile::LinearBump, xc, xr),
      TestFunction(tc, tr, SpaceProfile::SineBump, xc, xr, 3.0),
  };
}

std::vector<WeakNode> weak_nodes(const ParticleTrajectory& traj, const ForceField& f) {
  std::vector<WeakNode> nodes;
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    WeakState st = atom_state(traj.states[s], f);
    nodes.push_back({traj.times[s], st, st});
  }
  for (const CollisionEvent& e : traj.events) {
    auto it = std::find_if(nodes.begin(), nodes.end(), [&](const WeakNode& n) {
      return std::abs(n.time - e.time) <= kEventTimeTolerance;
    });
    if (it != nodes.end()) {
      it->left = atom_state(e.before, f);
    } else {
      nodes.push_back({e.time, atom_state(e.before, f), atom_state(e.after, f)});
    }
  }
  std::stable_sort(nodes.begin(), nodes.end(),
                   [](const WeakNode& a, const WeakNode& b) { return a.time < b.time; });
  return nodes;
}

std::vector<WeakNode> weak_nodes(const MapTrajectory& traj, const ForceField& f) {
  std::vector<WeakNode> nodes;
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    const TransportMap& x = traj.positions[s];
    WeakState st;
    const double w = x.grid().width();
    st.masses.assign(x.size(), w);
    st.positions.assign(x.values().begin(), x.values().end());
    st.velocities.assign(traj.velocities[s].values().begin(), traj.velocities[s].values().end());
    st.accelerations = eval_force(f, x);
    nodes.push_back({traj.times[s], st, st});
  }
  return nodes;
}

WeakResidual weak_residual(std::span<const WeakNode> nodes, const TestFunction& phi,
                           TimeQuadrature rule) {
  if (nodes.size() < 2) throw std::invalid_argument("weak residual needs at least two nodes");
  if (phi.t_min() < nodes.front().time || phi.t_max() > nodes.back().time) {
    throw std::invalid_argument("test function support escapes the sampled time window");
  }
  WeakResidual r;
  for (std::size_t n = 1; n < nodes.size(); ++n) {
    const double a = nodes[n - 1].time;
    const double b = nodes[n].time;
    const double h = b - a;
    if (!(h > 0.0)) throw std::invalid_argument("quadrature nodes must increase");
    if (rule == TimeQuadrature::Trapezoid) {
      const Integrals ga = integrands(nodes[n - 1].right, phi, a);
      const Integrals gb = integrands(nodes[n].left, phi, b);
      r.mass += 0.5 * h * (ga.mass + gb.mass);
      r.momentum += 0.5 * h * (ga.momentum + gb.momentum);
      continue;
    }
    const WeakState& s = nodes[n].left;
    for (std::size_t j = 0; j < s.masses.size(); ++j) {
      const double x = s.positions[j];
      const double v = s.velocities[j];
      const double pb = phi.value(b, x);
      const double dphi = pb - phi.value(a, x);
      const double px = phi.dx(b, x);
      r.mass += s.masses[j] * (dphi + h * v * px);
      r.momentum += s.masses[j] * (v * dphi + h * (v * v * px + s.accelerations[j] * pb));
    }
  }
  return r;
}

WeakResidual weak_residual(const ParticleTrajectory& traj, const ForceField& f,
                           const TestFunction& phi, TimeQuadrature rule) {
  const auto nodes = weak_nodes(traj, f);
  return weak_residual(nodes, phi, rule);
}

std::vector<double> richardson_ratios(std::span<const double> residuals) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < residuals.size(); ++k) {
    out.push_back(std::abs(residuals[k]) / std::abs(residuals[k + 1]));
  }
  return out;
}

}  // namespace stickyflow
