#include "stickyflow/particles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "stickyflow/cone.hpp"

namespace stickyflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Rounding can leave a merged or just-advanced neighbour a few ulps out of order.
void repair_order(std::vector<double>& x) {
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i] < x[i - 1]) {
      const double slack = 1e-9 * (1.0 + std::abs(x[i - 1]));
      if (x[i - 1] - x[i] > slack) throw std::logic_error("particle order violated between events");
      x[i] = x[i - 1];
    }
  }
}

void require_finite(std::span<const double> a, std::size_t step) {
  for (double v : a) {
    if (!std::isfinite(v)) throw NumericalError("non-finite particle state", step);
  }
}

std::vector<double> sample_times(double t_end, double dt) {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("sample_dt must be positive");
  std::vector<double> times;
  for (std::size_t s = 0;; ++s) {
    const double t = static_cast<double>(s) * dt;
    if (t > t_end * (1.0 + 1e-12)) break;
    times.push_back(std::min(t, t_end));
  }
  if (times.back() < t_end * (1.0 - 1e-12)) times.push_back(t_end);
  return times;
}

struct Cloud {
  std::vector<double> m, x, v;
  std::vector<std::size_t> owner;

  ParticleSystem system() const {
    std::vector<double> xs = x;
    repair_order(xs);
    return ParticleSystem(m, std::move(xs), v);
  }
};

// Contiguous runs of joined pairs, as [first, last] particle indices.
std::vector<std::pair<std::size_t, std::size_t>> runs_from_pairs(std::vector<std::size_t> pairs) {
  std::sort(pairs.begin(), pairs.end());
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  for (std::size_t k : pairs) {
    if (!runs.empty() && runs.back().second == k) {
      runs.back().second = k + 1;
    } else if (runs.empty() || runs.back().second < k) {
      runs.push_back({k, k + 1});
    }
  }
  return runs;
}

CollisionEvent merge(Cloud& c, const std::vector<std::size_t>& pairs, double time) {
  const auto runs = runs_from_pairs(pairs);
  CollisionEvent event{time, {}, c.system(), c.system()};
  Cloud next;
  std::vector<std::size_t> new_index(c.m.size());
  std::size_t r = 0;
  for (std::size_t i = 0; i < c.m.size();) {
    if (r < runs.size() && runs[r].first == i) {
      const auto [first, last] = runs[r++];
      MergeGroup g;
      long double mass = 0.0L, momentum = 0.0L, moment = 0.0L;
      for (std::size_t j = first; j <= last; ++j) {
        g.members.push_back(j);
        g.pre_velocities.push_back(c.v[j]);
        mass += c.m[j];
        momentum += static_cast<long double>(c.m[j]) * c.v[j];
        moment += static_cast<long double>(c.m[j]) * c.x[j];
        new_index[j] = next.m.size();
      }
      g.post_velocity = static_cast<double>(momentum / mass);
      g.position = static_cast<double>(moment / mass);
      next.m.push_back(static_cast<double>(mass));
      next.x.push_back(g.position);
      next.v.push_back(g.post_velocity);
      event.groups.push_back(std::move(g));
      i = last + 1;
    } else {
      new_index[i] = next.m.size();
      next.m.push_back(c.m[i]);
      next.x.push_back(c.x[i]);
      next.v.push_back(c.v[i]);
      ++i;
    }
  }
  next.owner.resize(c.owner.size());
  for (std::size_t j = 0; j < c.owner.size(); ++j) next.owner[j] = new_index[c.owner[j]];
  repair_order(next.x);
  c = std::move(next);
  event.after = c.system();
  return event;
}

void record(ParticleTrajectory& traj, double t, const Cloud& c) {
  traj.times.push_back(t);
  traj.states.push_back(c.system());
  traj.owner.push_back(c.owner);
}

Cloud advance_quadratic(const Cloud& c, std::span<const double> a, double dt) {
  Cloud out = c;
  for (std::size_t i = 0; i < c.m.size(); ++i) {
    out.x[i] = c.x[i] + dt * c.v[i] + 0.5 * a[i] * dt * dt;
    out.v[i] = c.v[i] + dt * a[i];
  }
  repair_order(out.x);
  return out;
}

void evolve_closed_form(Cloud c, const ForceField& f, const std::vector<double>& times,
                        ParticleTrajectory& traj) {
  double t = 0.0;
  std::size_t s = 0;
  std::size_t step = 0;
  const double t_end = times.back();
  while (true) {
    const auto a = projected_accelerations(f, c.m, c.x);
    require_finite(a, step);
    const auto forecast = next_collision_time(c.system(), a);
    const double t_hit = forecast ? t + forecast->time : kInf;
    while (s < times.size() && times[s] < t_hit) {
      record(traj, times[s], advance_quadratic(c, a, times[s] - t));
      ++s;
    }
    if (!forecast || t_hit > t_end) break;
    c = advance_quadratic(c, a, t_hit - t);
    require_finite(c.x, step);
    t = t_hit;
    traj.events.push_back(merge(c, forecast->pairs, t));
    ++step;
  }
}

struct Derivative {
  std::vector<double> dx, dv;
};

void rk4(const ForceField& f, const std::vector<double>& m, const std::vector<double>& x,
         const std::vector<double>& v, double h, std::vector<double>& x_out,
         std::vector<double>& v_out) {
  const std::size_t n = m.size();
  auto eval = [&](const std::vector<double>& xs, const std::vector<double>& vs) {
    return Derivative{vs, projected_accelerations(f, m, xs)};
  };
  auto shifted = [&](const std::vector<double>& base, const std::vector<double>& d, double w) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = base[i] + w * d[i];
    return out;
  };
  const Derivative k1 = eval(x, v);
  const Derivative k2 = eval(shifted(x, k1.dx, h / 2), shifted(v, k1.dv, h / 2));
  const Derivative k3 = eval(shifted(x, k2.dx, h / 2), shifted(v, k2.dv, h / 2));
  const Derivative k4 = eval(shifted(x, k3.dx, h), shifted(v, k3.dv, h));
  x_out.resize(n);
  v_out.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    x_out[i] = x[i] + h / 6 * (k1.dx[i] + 2 * k2.dx[i] + 2 * k3.dx[i] + k4.dx[i]);
    v_out[i] = v[i] + h / 6 * (k1.dv[i] + 2 * k2.dv[i] + 2 * k3.dv[i] + k4.dv[i]);
  }
}

bool crossed(const std::vector<double>& x) {
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i] < x[i - 1]) return true;
  }
  return false;
}

void evolve_runge_kutta(Cloud c, const ForceField& f, const std::vector<double>& times,
                        double max_step, ParticleTrajectory& traj) {
  if (!(max_step > 0.0)) throw std::invalid_argument("max_step must be positive");
  double t = 0.0;
  std::size_t step = 0;
  std::vector<double> x1, v1;
  record(traj, 0.0, c);
  for (std::size_t s = 1; s < times.size(); ++s) {
    const double target = times[s];
    while (target - t > kEventTimeTolerance * 0.5) {
      const double h = std::min(max_step, target - t);
      rk4(f, c.m, c.x, c.v, h, x1, v1);
      require_finite(x1, step);
      require_finite(v1, step);
      ++step;
      if (!crossed(x1)) {
        c.x = x1;
        c.v = v1;
        t = (h == target - t) ? target : t + h;
        continue;
      }
      double lo = 0.0, hi = h;
      while (hi - lo > kEventTimeTolerance) {
        const double mid = 0.5 * (lo + hi);
        rk4(f, c.m, c.x, c.v, mid, x1, v1);
        (crossed(x1) ? hi : lo) = mid;
      }
      rk4(f, c.m, c.x, c.v, hi, x1, v1);
      std::vector<std::size_t> pairs;
      for (std::size_t i = 0; i + 1 < x1.size(); ++i) {
        const double gap = x1[i + 1] - x1[i];
        const double closing = std::max(0.0, v1[i] - v1[i + 1]);
        if (gap <= 2.0 * kEventTimeTolerance * closing) pairs.push_back(i);
      }
      c.x = x1;
      c.v = v1;
      t += hi;
      traj.events.push_back(merge(c, pairs, t));
    }
    t = target;
    record(traj, target, c);
  }
}

}  // namespace

std::optional<double> gap_closing_time(double dx, double dv, double da) {
  if (dx <= 0.0) {
    if (dv < 0.0 || (dv == 0.0 && da < 0.0)) return 0.0;
    if (dv > 0.0 && da < 0.0) return -2.0 * dv / da;
    return std::nullopt;
  }
  if (da == 0.0) {
    if (dv < 0.0) return -dx / dv;
    return std::nullopt;
  }
  double disc = dv * dv - 2.0 * da * dx;
  if (disc < 0.0) {
    if (-disc > 1e-14 * (dv * dv + std::abs(2.0 * da * dx))) return std::nullopt;
    disc = 0.0;
  }
  const double q = -0.5 * (dv + std::copysign(std::sqrt(disc), dv));
  double best = kInf;
  for (double r : {q / (0.5 * da), q != 0.0 ? dx / q : kInf}) {
    if (r > 0.0 && r < best) best = r;
  }
  if (best == kInf) return std::nullopt;
  return best;
}

std::optional<CollisionForecast> next_collision_time(const ParticleSystem& sys,
                                                     std::span<const double> accelerations) {
  const auto x = sys.positions();
  const auto v = sys.velocities();
  if (accelerations.size() != x.size()) {
    throw std::invalid_argument("one acceleration per particle required");
  }
  std::vector<double> roots(x.size() > 0 ? x.size() - 1 : 0, kInf);
  double best = kInf;
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    if (auto r = gap_closing_time(x[k + 1] - x[k], v[k + 1] - v[k],
                                  accelerations[k + 1] - accelerations[k])) {
      roots[k] = *r;
      best = std::min(best, *r);
    }
  }
  if (best == kInf) return std::nullopt;
  CollisionForecast out{best, {}};
  for (std::size_t k = 0; k < roots.size(); ++k) {
    if (roots[k] <= best + kEventTimeTolerance) out.pairs.push_back(k);
  }
  return out;
}

ParticleTrajectory evolve_sticky(const ParticleSystem& sys, const ForceField& f,
                                 const StickyOptions& options) {
  const auto times = sample_times(options.t_end, options.sample_dt);
  Cloud c;
  c.m.assign(sys.masses().begin(), sys.masses().end());
  c.x.assign(sys.positions().begin(), sys.positions().end());
  c.v.assign(sys.velocities().begin(), sys.velocities().end());
  c.owner.resize(sys.size());
  for (std::size_t j = 0; j < sys.size(); ++j) c.owner[j] = j;

  ParticleTrajectory traj;
  if (f.piecewise_constant_accelerations()) {
    evolve_closed_form(std::move(c), f, times, traj);
  } else {
    evolve_runge_kutta(std::move(c), f, times, options.max_step, traj);
  }
  if (traj.events.size() + 1 > sys.size()) throw std::logic_error("more merges than particles");
  return traj;
}

ParticleTrajectory evolve_sticky(const ParticleSystem& sys, const ForceField& f, double t_end,
                                 double sample_dt) {
  return evolve_sticky(sys, f, StickyOptions{t_end, sample_dt});
}

MapTrajectory evolve_inclusion(const TransportMap& x0, const VelocityField& v0, const ForceField& f,
                               const InclusionOptions& options) {
  require_same_grid(x0.grid(), v0.grid());
  const double tau = options.tau;
  const double t_end = options.t_end;
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be positive");
  if (options.sample_every == 0) throw std::invalid_argument("sample_every must be at least 1");

  const Grid grid = x0.grid();
  std::vector<double> x(x0.values().begin(), x0.values().end());
  std::vector<double> y(v0.values().begin(), v0.values().end());
  MapTrajectory traj;
  auto store = [&](double t) {
    TransportMap xm(grid, x);
    traj.velocities.push_back(project_plateau_average(VelocityField(grid, y), plateaus(xm, 0.0)));
    traj.positions.push_back(std::move(xm));
    traj.times.push_back(t);
  };
  store(0.0);

  auto full = static_cast<std::size_t>(std::floor(t_end / tau + 1e-9));
  const double rest = t_end - static_cast<double>(full) * tau;
  const bool partial = rest > 1e-12 * t_end;
  const std::size_t total = full + (partial ? 1 : 0);
  std::vector<double> trial(x.size());
  for (std::size_t n = 1; n <= total; ++n) {
    const double h = (partial && n == total) ? rest : tau;
    const auto force = eval_force(f, grid, x);
    for (std::size_t i = 0; i < x.size(); ++i) {
      y[i] += h * force[i];
      trial[i] = x[i] + h * y[i];
    }
    require_finite(trial, n);
    x = isotonic_projection(trial);
    if (n % options.sample_every == 0 || n == total) {
      store(n == total ? t_end : static_cast<double>(n) * tau);
    }
  }
  return traj;
}

MapTrajectory evolve_inclusion(const TransportMap& x0, const VelocityField& v0, const ForceField& f,
                               double t_end, double tau) {
  return evolve_inclusion(x0, v0, f, InclusionOptions{t_end, tau, 1});
}

}  // namespace stickyflow
