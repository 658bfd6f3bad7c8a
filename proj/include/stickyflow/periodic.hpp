#pragma once

#include <cstddef>
#include <vector>

#include "stickyflow/transport.hpp"

namespace stickyflow {

// Positions with x - m periodic in m, and velocities, on a midpoint grid.
struct PeriodicState {
  PeriodicState(Grid grid, std::vector<double> x, std::vector<double> v);

  Grid grid;
  std::vector<double> x;
  std::vector<double> v;
};

// X = m, V = amplitude * sin(2 pi m).
PeriodicState sine_velocity_state(const Grid& grid, double amplitude = 4.0);
PeriodicState identity_state(const Grid& grid);

// Exact rotation of (X - m, V) by angle tau.
PeriodicState predictor(const PeriodicState& s, double tau);
// Periodic monotone rearrangement of positions; velocities keep their slots.
PeriodicState corrector(const PeriodicState& s);
PeriodicState step(const PeriodicState& s, double tau);

double energy(const PeriodicState& s);
double joint_distance(const PeriodicState& a, const PeriodicState& b);
// Fraction of points with a neighbour (periodically) closer than gap_tol.
double cluster_fraction(const PeriodicState& s, double gap_tol);

struct PeriodicRun {
  // energy[n] after n steps, n = 0..n_steps.
  std::vector<double> energy;
  std::vector<std::size_t> sample_steps;
  std::vector<PeriodicState> samples;
  double tau = 0.0;
};

PeriodicRun run(const PeriodicState& initial, double tau, std::size_t n_steps,
                std::size_t sample_every);

// State at time t: floor(t / tau) full steps and one shorter step for the remainder.
PeriodicState run_until(const PeriodicState& initial, double tau, double t);

// Independent pendulums X - m = d0 cos t + v0 sin t, valid while no reordering occurs.
PeriodicState pendulum_solution(const PeriodicState& initial, double t);

}  // namespace stickyflow
