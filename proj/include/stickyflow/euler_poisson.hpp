#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stickyflow/transport.hpp"

namespace stickyflow {

class EPInitialData {
 public:
  EPInitialData(TransportMap x0, VelocityField v0, double lambda);

  const TransportMap& x0() const noexcept { return x0_; }
  const VelocityField& v0() const noexcept { return v0_; }
  double lambda() const noexcept { return lambda_; }
  const Grid& grid() const noexcept { return x0_.grid(); }

 private:
  TransportMap x0_;
  VelocityField v0_;
  double lambda_;
};

// X0 + t V0 - lambda t^2 (m - 1/2) / 2 at the cell midpoints.
std::vector<double> free_flow_integrand(const EPInitialData& data, double t);

// Attractive or pressureless (lambda >= 0) solution by projecting the free flow.
TransportMap attractive_ep_solution(const EPInitialData& data, double t);
// Same map plus V(t) = plateau average of V0 - lambda t (m - 1/2).
LagrangianState attractive_ep_state(const EPInitialData& data, double t);

// Free flow of X0 = m - 1/2, V0 = -sign(m - 1/2) under lambda = -2.
std::vector<double> two_rarefaction_free_flow(double t, const Grid& grid);
// Its projection: zero on |m - 1/2| <= t / (1 + t^2), free flow elsewhere.
TransportMap repulsive_two_rarefaction_oracle(double t, const Grid& grid);
double two_rarefaction_half_width(double t);

// Repulsive spreading of a single Dirac mass: X = x + v t - lambda t^2 (m - 1/2) / 2.
TransportMap dirac_diffusion_solution(double x, double v, double lambda, double t, const Grid& grid);

// Primitive of y minus primitive of x at the N + 1 grid nodes.
std::vector<double> primitive_gap(std::span<const double> y, const TransportMap& x);

struct CertificateInterval {
  double t0 = 0.0;
  double t1 = 0.0;
  double min_rate = 0.0;
  std::size_t argmin_node = 0;
  bool pass = true;
};

struct CertificateReport {
  std::vector<CertificateInterval> intervals;
  double tolerance = 0.0;
  bool pass = true;
};

// Checks that the primitive gap between each free field ys[k] and its projected
// map xs[k] does not decrease in time at any grid node.
CertificateReport check_inclusion_certificate(std::span<const double> times,
                                              std::span<const TransportMap> xs,
                                              std::span<const std::vector<double>> ys,
                                              double tolerance = 1e-8);

// 0 followed by count points spaced geometrically from t_min to t_max.
std::vector<double> geometric_time_ladder(double t_min, double t_max, std::size_t count);

}  // namespace stickyflow
