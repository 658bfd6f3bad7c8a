#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "stickyflow/forces.hpp"
#include "stickyflow/transport.hpp"

namespace stickyflow {

// One merge inside a collision event. Indices refer to the particles of the
// system just before the event.
struct MergeGroup {
  std::vector<std::size_t> members;
  std::vector<double> pre_velocities;
  double post_velocity = 0.0;
  double position = 0.0;
};

struct CollisionEvent {
  double time = 0.0;
  std::vector<MergeGroup> groups;
  ParticleSystem before;
  ParticleSystem after;
};

struct ParticleTrajectory {
  std::vector<double> times;
  std::vector<ParticleSystem> states;
  // owner[s][j]: index in states[s] of the cluster holding initial particle j.
  std::vector<std::vector<std::size_t>> owner;
  std::vector<CollisionEvent> events;
};

struct MapTrajectory {
  std::vector<double> times;
  std::vector<TransportMap> positions;
  std::vector<VelocityField> velocities;
};

struct CollisionForecast {
  double time = 0.0;
  // Pair k joins particles k and k + 1.
  std::vector<std::size_t> pairs;
};

inline constexpr double kEventTimeTolerance = 1e-12;

// Smallest root t >= 0 of the adjacent gap polynomials under constant accelerations.
std::optional<CollisionForecast> next_collision_time(const ParticleSystem& sys,
                                                     std::span<const double> accelerations);

// First time the gap dx + dv t + da t^2 / 2 closes, if ever.
std::optional<double> gap_closing_time(double dx, double dv, double da);

struct StickyOptions {
  double t_end = 1.0;
  double sample_dt = 0.1;
  // Largest Runge-Kutta step for forces whose accelerations vary between events.
  double max_step = 1e-3;
};

ParticleTrajectory evolve_sticky(const ParticleSystem& sys, const ForceField& f,
                                 const StickyOptions& options);
ParticleTrajectory evolve_sticky(const ParticleSystem& sys, const ForceField& f, double t_end,
                                 double sample_dt);

struct InclusionOptions {
  double t_end = 1.0;
  double tau = 1e-3;
  std::size_t sample_every = 1;
};

// Y <- Y + tau F[X]; X <- Proj(X + tau Y). Stored velocities are plateau averages of Y.
MapTrajectory evolve_inclusion(const TransportMap& x0, const VelocityField& v0, const ForceField& f,
                               const InclusionOptions& options);
MapTrajectory evolve_inclusion(const TransportMap& x0, const VelocityField& v0, const ForceField& f,
                               double t_end, double tau);

}  // namespace stickyflow
