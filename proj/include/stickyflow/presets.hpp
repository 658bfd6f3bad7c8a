#pragma once

#include <cstdint>
#include <random>

#include "stickyflow/transport.hpp"

namespace stickyflow {

// Seeded generator with platform-independent derived draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  std::size_t index(std::size_t n);  // [0, n)

 private:
  std::mt19937_64 engine_;
};

// X = m - 1/2, V = -sign(m - 1/2).
LagrangianState two_rarefaction_state(const Grid& grid);
// All mass at x moving with velocity v.
LagrangianState dirac_state(const Grid& grid, double x, double v);
// Strictly increasing X = m - 1/2 + a few low Fourier modes, and a smooth random V.
LagrangianState random_smooth_state(const Grid& grid, Rng& rng);

// K particles with random masses, sorted uniform positions in [-1, 1] and normal velocities.
ParticleSystem random_particles(std::size_t k, Rng& rng);

// Equal-mass particles averaging position and velocity over consecutive blocks of cells.
ParticleSystem block_average_particles(const LagrangianState& fine, std::size_t k);

}  // namespace stickyflow
