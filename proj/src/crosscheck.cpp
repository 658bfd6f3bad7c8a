#include "stickyflow/crosscheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stickyflow/euler_poisson.hpp"
#include "stickyflow/forces.hpp"
#include "stickyflow/particles.hpp"
#include "stickyflow/presets.hpp"

namespace stickyflow {

CrossCheckTable formula_vs_particles(const LagrangianState& fine, double lambda,
                                     std::span<const std::size_t> particle_counts,
                                     std::span<const double> times) {
  if (times.empty() || particle_counts.empty()) throw std::invalid_argument("empty comparison");
  if (!std::is_sorted(times.begin(), times.end()) || times.front() < 0.0) {
    throw std::invalid_argument("comparison times must be sorted and nonnegative");
  }
  const Grid& grid = fine.position.grid();
  const EPInitialData data(fine.position, fine.velocity, lambda);
  const ForceField force = ForceField::euler_poisson(lambda);

  CrossCheckTable table;
  table.times.assign(times.begin(), times.end());
  table.particle_counts.assign(particle_counts.begin(), particle_counts.end());
  table.w2.assign(times.size(), std::vector<double>(particle_counts.size(), 0.0));

  std::vector<TransportMap> reference;
  for (double t : times) reference.push_back(attractive_ep_solution(data, t));

  for (std::size_t k = 0; k < particle_counts.size(); ++k) {
    const ParticleSystem sys = block_average_particles(fine, particle_counts[k]);
    for (std::size_t j = 0; j < times.size(); ++j) {
      ParticleSystem state = sys;
      if (times[j] > 0.0) {
        const auto traj = evolve_sticky(sys, force, times[j], times[j]);
        state = traj.states.back();
      }
      const TransportMap x = particles_to_map(state, grid).position;
      table.w2[j][k] = wasserstein2(x, reference[j]);
    }
  }
  return table;
}

}  // namespace stickyflow
