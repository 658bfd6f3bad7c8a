#pragma once

#include <span>
#include <string>
#include <vector>

#include "stickyflow/forces.hpp"
#include "stickyflow/particles.hpp"
#include "stickyflow/transport.hpp"

namespace stickyflow {

EulerianMeasure to_eulerian(const TransportMap& x, const VelocityField& v);

double d2_distance(const TransportMap& x1, const VelocityField& v1, const TransportMap& x2,
                   const VelocityField& v2);

enum class SpaceProfile { Bump, LinearBump, SineBump };

// phi(t, x) = T(t) B(x) with T(t) = bump((t - tc) / tr), bump(u) = (1 - u^2)^2 on |u| < 1,
// and B one of bump, x * bump, sin(k x) * bump in (x - xc) / xr.
class TestFunction {
 public:
  TestFunction(double t_center, double t_radius, SpaceProfile profile, double x_center,
               double x_radius, double wavenumber = 1.0);

  double value(double t, double x) const;
  double dt(double t, double x) const;
  double dx(double t, double x) const;

  double t_min() const noexcept { return tc_ - tr_; }
  double t_max() const noexcept { return tc_ + tr_; }
  std::string describe() const;

 private:
  double tc_, tr_;
  SpaceProfile profile_;
  double xc_, xr_, k_;
};

std::vector<TestFunction> default_test_functions(double t_begin, double t_end, double x_lo,
                                                 double x_hi);

// Atom-level state with the acceleration each atom feels.
struct WeakState {
  std::vector<double> masses, positions, velocities, accelerations;
};

// A quadrature node; left and right differ only at collision times.
struct WeakNode {
  double time = 0.0;
  WeakState left;
  WeakState right;
};

std::vector<WeakNode> weak_nodes(const ParticleTrajectory& traj, const ForceField& f);
std::vector<WeakNode> weak_nodes(const MapTrajectory& traj, const ForceField& f);

enum class TimeQuadrature {
  // Interval (t_{n-1}, t_n] carries the left-limit state at t_n.
  BackwardHold,
  Trapezoid,
};

struct WeakResidual {
  double mass = 0.0;
  double momentum = 0.0;
};

WeakResidual weak_residual(std::span<const WeakNode> nodes, const TestFunction& phi,
                           TimeQuadrature rule = TimeQuadrature::BackwardHold);
WeakResidual weak_residual(const ParticleTrajectory& traj, const ForceField& f,
                           const TestFunction& phi,
                           TimeQuadrature rule = TimeQuadrature::BackwardHold);

// |r[k]| / |r[k + 1]| for a residual sequence under successive halving.
std::vector<double> richardson_ratios(std::span<const double> residuals);

}  // namespace stickyflow
