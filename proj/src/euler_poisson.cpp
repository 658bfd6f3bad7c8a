#include "stickyflow/euler_poisson.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "stickyflow/cone.hpp"

namespace stickyflow {

namespace {

void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("time must be finite and >= 0");
}

}  // namespace

EPInitialData::EPInitialData(TransportMap x0, VelocityField v0, double lambda)
    : x0_(std::move(x0)), v0_(std::move(v0)), lambda_(lambda) {
  require_same_grid(x0_.grid(), v0_.grid());
  if (!std::isfinite(lambda)) throw std::invalid_argument("lambda must be finite");
}

std::vector<double> free_flow_integrand(const EPInitialData& data, double t) {
  require_time(t);
  const Grid& g = data.grid();
  const double pull = 0.5 * data.lambda() * t * t;
  std::vector<double> y(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    y[i] = data.x0()[i] + t * data.v0()[i] - pull * g.centered(i);
  }
  return y;
}

TransportMap attractive_ep_solution(const EPInitialData& data, double t) {
  if (data.lambda() < 0.0) {
    throw std::domain_error("representation formula needs lambda >= 0; use the repulsive solvers");
  }
  return project_cone(data.grid(), free_flow_integrand(data, t));
}

LagrangianState attractive_ep_state(const EPInitialData& data, double t) {
  TransportMap x = attractive_ep_solution(data, t);
  const Grid& g = data.grid();
  std::vector<double> y(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    y[i] = data.v0()[i] - data.lambda() * t * g.centered(i);
  }
  VelocityField v = project_plateau_average(VelocityField(g, std::move(y)), plateaus(x, 0.0));
  return {std::move(x), std::move(v)};
}

std::vector<double> two_rarefaction_free_flow(double t, const Grid& grid) {
  require_time(t);
  std::vector<double> y(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double c = grid.centered(i);
    const double sign = c > 0.0 ? 1.0 : (c < 0.0 ? -1.0 : 0.0);
    y[i] = (1.0 + t * t) * c - t * sign;
  }
  return y;
}

double two_rarefaction_half_width(double t) {
  require_time(t);
  return t / (1.0 + t * t);
}

TransportMap repulsive_two_rarefaction_oracle(double t, const Grid& grid) {
  const double delta = two_rarefaction_half_width(t);
  auto y = two_rarefaction_free_flow(t, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::abs(grid.centered(i)) <= delta) y[i] = 0.0;
  }
  return TransportMap(grid, std::move(y));
}

TransportMap dirac_diffusion_solution(double x, double v, double lambda, double t, const Grid& grid) {
  if (!(lambda < 0.0)) throw std::domain_error("Dirac spreading needs repulsive lambda < 0");
  require_time(t);
  const double base = x + v * t;
  const double spread = -0.5 * lambda * t * t;
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = base + spread * grid.centered(i);
  return TransportMap(grid, std::move(values));
}

std::vector<double> primitive_gap(std::span<const double> y, const TransportMap& x) {
  if (y.size() != x.size()) throw GridMismatch(y.size(), x.size());
  const long double w = x.grid().width();
  std::vector<double> gap(y.size() + 1, 0.0);
  long double acc = 0.0L;
  for (std::size_t i = 0; i < y.size(); ++i) {
    acc += (static_cast<long double>(y[i]) - x[i]) * w;
    gap[i + 1] = static_cast<double>(acc);
  }
  return gap;
}

CertificateReport check_inclusion_certificate(std::span<const double> times,
                                              std::span<const TransportMap> xs,
                                              std::span<const std::vector<double>> ys,
                                              double tolerance) {
  if (xs.size() != times.size() || ys.size() != times.size()) {
    throw std::invalid_argument("certificate needs one map and one field per time");
  }
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) throw std::invalid_argument("times must increase strictly");
    require_same_grid(xs[k].grid(), xs[0].grid());
  }
  CertificateReport report;
  report.tolerance = tolerance;
  std::vector<double> prev;
  for (std::size_t k = 0; k < times.size(); ++k) {
    auto gap = primitive_gap(ys[k], xs[k]);
    if (k > 0) {
      CertificateInterval iv{times[k - 1], times[k], std::numeric_limits<double>::infinity(), 0,
                             true};
      const double dt = times[k] - times[k - 1];
      for (std::size_t j = 0; j < gap.size(); ++j) {
        const double rate = (gap[j] - prev[j]) / dt;
        if (rate < iv.min_rate) {
          iv.min_rate = rate;
          iv.argmin_node = j;
        }
      }
      iv.pass = iv.min_rate >= -tolerance;
      report.pass = report.pass && iv.pass;
      report.intervals.push_back(iv);
    }
    prev = std::move(gap);
  }
  return report;
}

std::vector<double> geometric_time_ladder(double t_min, double t_max, std::size_t count) {
  if (!(t_min > 0.0) || !(t_max > t_min) || count < 2) {
    throw std::invalid_argument("ladder needs 0 < t_min < t_max and at least two points");
  }
  std::vector<double> t{0.0};
  const double ratio = std::pow(t_max / t_min, 1.0 / static_cast<double>(count - 1));
  for (std::size_t k = 0; k < count; ++k) {
    t.push_back(k + 1 == count ? t_max : t_min * std::pow(ratio, static_cast<double>(k)));
  }
  return t;
}

}  // namespace stickyflow
