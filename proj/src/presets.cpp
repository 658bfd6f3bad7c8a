#include "stickyflow/presets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stickyflow {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  double u = uniform();
  while (u == 0.0) u = uniform();
  const double v = uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("index range is empty");
  return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
}

LagrangianState two_rarefaction_state(const Grid& grid) {
  std::vector<double> x(grid.size()), v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    x[i] = grid.centered(i);
    v[i] = x[i] > 0.0 ? -1.0 : (x[i] < 0.0 ? 1.0 : 0.0);
  }
  return {TransportMap(grid, std::move(x)), VelocityField(grid, std::move(v))};
}

LagrangianState dirac_state(const Grid& grid, double x, double v) {
  return {TransportMap(grid, std::vector<double>(grid.size(), x)),
          VelocityField(grid, std::vector<double>(grid.size(), v))};
}

LagrangianState random_smooth_state(const Grid& grid, Rng& rng) {
  constexpr int kPositionModes = 3;
  constexpr int kVelocityModes = 4;
  double a[kPositionModes], phase_a[kPositionModes];
  double total = 0.0;
  for (int k = 0; k < kPositionModes; ++k) {
    a[k] = rng.normal();
    phase_a[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
    total += std::abs(a[k]);
  }
  // Scale so that dX/dm = 1 + sum a_k cos(...) stays >= 0.1.
  const double scale = total > 0.9 ? 0.9 / total : 1.0;
  double b[kVelocityModes], phase_b[kVelocityModes];
  for (int k = 0; k < kVelocityModes; ++k) {
    b[k] = rng.normal();
    phase_b[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }
  std::vector<double> x(grid.size()), v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double m = grid.midpoint(i);
    double xi = grid.centered(i);
    for (int k = 0; k < kPositionModes; ++k) {
      const double w = 2.0 * std::numbers::pi * (k + 1);
      xi += scale * a[k] * std::sin(w * m + phase_a[k]) / w;
    }
    double vi = 0.0;
    for (int k = 0; k < kVelocityModes; ++k) {
      vi += b[k] * std::sin(2.0 * std::numbers::pi * (k + 1) * m + phase_b[k]) / (k + 1);
    }
    x[i] = xi;
    v[i] = vi;
  }
  for (std::size_t i = 1; i < x.size(); ++i) x[i] = std::max(x[i], x[i - 1]);
  return {TransportMap(grid, std::move(x)), VelocityField(grid, std::move(v))};
}

ParticleSystem random_particles(std::size_t k, Rng& rng) {
  if (k == 0) throw std::invalid_argument("need at least one particle");
  std::vector<double> m(k), x(k), v(k);
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    m[i] = rng.uniform(0.2, 1.0);
    total += m[i];
    x[i] = rng.uniform(-1.0, 1.0);
    v[i] = rng.normal();
  }
  for (double& mi : m) mi /= total;
  std::sort(x.begin(), x.end());
  return ParticleSystem(std::move(m), std::move(x), std::move(v));
}

ParticleSystem block_average_particles(const LagrangianState& fine, std::size_t k) {
  const std::size_t n = fine.position.size();
  if (k == 0 || n % k != 0) throw std::invalid_argument("particle count must divide the grid size");
  const std::size_t block = n / k;
  std::vector<double> m(k, 1.0 / static_cast<double>(k)), x(k), v(k);
  for (std::size_t j = 0; j < k; ++j) {
    long double sx = 0.0L, sv = 0.0L;
    for (std::size_t i = j * block; i < (j + 1) * block; ++i) {
      sx += fine.position[i];
      sv += fine.velocity[i];
    }
    x[j] = static_cast<double>(sx / static_cast<long double>(block));
    v[j] = static_cast<double>(sv / static_cast<long double>(block));
  }
  for (std::size_t j = 1; j < k; ++j) x[j] = std::max(x[j], x[j - 1]);
  return ParticleSystem(std::move(m), std::move(x), std::move(v));
}

}  // namespace stickyflow
