#include "stickyflow/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stickyflow/cone.hpp"

namespace stickyflow {

PeriodicState::PeriodicState(Grid g, std::vector<double> xs, std::vector<double> vs)
    : grid(g), x(std::move(xs)), v(std::move(vs)) {
  if (x.size() != grid.size()) throw GridMismatch(x.size(), grid.size());
  if (v.size() != grid.size()) throw GridMismatch(v.size(), grid.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(v[i])) {
      throw std::invalid_argument("periodic state has a non-finite entry");
    }
  }
}

PeriodicState sine_velocity_state(const Grid& grid, double amplitude) {
  std::vector<double> x = grid.midpoints();
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = amplitude * std::sin(2.0 * std::numbers::pi * x[i]);
  }
  return PeriodicState(grid, std::move(x), std::move(v));
}

PeriodicState identity_state(const Grid& grid) {
  return PeriodicState(grid, grid.midpoints(), std::vector<double>(grid.size(), 0.0));
}

PeriodicState predictor(const PeriodicState& s, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be positive");
  const double c = std::cos(tau);
  const double sn = std::sin(tau);
  std::vector<double> x(s.x.size()), v(s.v.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double m = s.grid.midpoint(i);
    const double d = s.x[i] - m;
    x[i] = m + (d * c + s.v[i] * sn);
    v[i] = -d * sn + s.v[i] * c;
  }
  return PeriodicState(s.grid, std::move(x), std::move(v));
}

PeriodicState corrector(const PeriodicState& s) {
  return PeriodicState(s.grid, periodic_rearrange(s.x), s.v);
}

PeriodicState step(const PeriodicState& s, double tau) { return corrector(predictor(s, tau)); }

double energy(const PeriodicState& s) {
  long double e = 0.0L;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    const long double d = s.x[i] - s.grid.midpoint(i);
    e += d * d + static_cast<long double>(s.v[i]) * s.v[i];
  }
  return static_cast<double>(e / static_cast<long double>(s.x.size()));
}

double joint_distance(const PeriodicState& a, const PeriodicState& b) {
  require_same_grid(a.grid, b.grid);
  long double e = 0.0L;
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    const long double dx = static_cast<long double>(a.x[i]) - b.x[i];
    const long double dv = static_cast<long double>(a.v[i]) - b.v[i];
    e += dx * dx + dv * dv;
  }
  return static_cast<double>(std::sqrt(e / static_cast<long double>(a.x.size())));
}

double cluster_fraction(const PeriodicState& s, double gap_tol) {
  const std::size_t n = s.x.size();
  if (n < 2) return 0.0;
  std::vector<double> gap(n);  // gap[i] between point i and i + 1, wrapping around
  for (std::size_t i = 0; i + 1 < n; ++i) gap[i] = s.x[i + 1] - s.x[i];
  gap[n - 1] = s.x[0] + 1.0 - s.x[n - 1];
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = gap[(i + n - 1) % n];
    if (gap[i] < gap_tol || left < gap_tol) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(n);
}

PeriodicRun run(const PeriodicState& initial, double tau, std::size_t n_steps,
                std::size_t sample_every) {
  if (sample_every == 0) throw std::invalid_argument("sample_every must be at least 1");
  PeriodicRun out;
  out.tau = tau;
  out.energy.reserve(n_steps + 1);
  PeriodicState s = initial;
  out.energy.push_back(energy(s));
  out.sample_steps.push_back(0);
  out.samples.push_back(s);
  for (std::size_t n = 1; n <= n_steps; ++n) {
    s = step(s, tau);
    out.energy.push_back(energy(s));
    if (n % sample_every == 0 || n == n_steps) {
      out.sample_steps.push_back(n);
      out.samples.push_back(s);
    }
  }
  return out;
}

PeriodicState run_until(const PeriodicState& initial, double tau, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
  const auto full = static_cast<std::size_t>(std::floor(t / tau + 1e-9));
  PeriodicState s = initial;
  for (std::size_t n = 0; n < full; ++n) s = step(s, tau);
  const double rest = t - static_cast<double>(full) * tau;
  if (rest > 1e-12 * std::max(1.0, t)) s = step(s, rest);
  return s;
}

PeriodicState pendulum_solution(const PeriodicState& initial, double t) {
  const double c = std::cos(t);
  const double sn = std::sin(t);
  std::vector<double> x(initial.x.size()), v(initial.v.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double m = initial.grid.midpoint(i);
    const double d = initial.x[i] - m;
    x[i] = m + (d * c + initial.v[i] * sn);
    v[i] = -d * sn + initial.v[i] * c;
  }
  return PeriodicState(initial.grid, std::move(x), std::move(v));
}

}  // namespace stickyflow
