#pragma once

#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "stickyflow/transport.hpp"

namespace stickyflow {

using ScalarFunction = std::function<double(double)>;

// F[X](m) = -V'(X(m)).
struct PotentialForce {
  ScalarFunction v_prime;
};

// F[X](m) = -int W'(X(m) - X(l)) dl, with W'(0) read as 0.
struct InteractionForce {
  ScalarFunction w_prime;
};

// F[X](m) = -lambda * (m - 1/2) without background; with a uniform background
// sigma the term -lambda * (-sigma * X(m) + sigma * mean(X)) is added.
struct EulerPoissonForce {
  double lambda = 0.0;
  std::optional<double> background;
};

class ForceField {
 public:
  using Kind = std::variant<PotentialForce, InteractionForce, EulerPoissonForce>;

  static ForceField potential(ScalarFunction v_prime);
  static ForceField interaction(ScalarFunction w_prime);
  static ForceField euler_poisson(double lambda, std::optional<double> background = std::nullopt);

  ForceField with_lipschitz(double constant) const;
  ForceField with_pointwise_bound(double constant) const;
  // Adds a uniform acceleration to every point.
  ForceField with_offset(double acceleration) const;

  const Kind& kind() const noexcept { return kind_; }
  std::optional<double> declared_lipschitz() const noexcept { return lipschitz_; }
  std::optional<double> pointwise_bound() const noexcept { return bound_; }
  double offset() const noexcept { return offset_; }

  // Accelerations of a particle system do not change between collisions.
  bool piecewise_constant_accelerations() const noexcept;
  // Known sticking behaviour, when the kind determines it.
  std::optional<bool> sticking() const noexcept;

 private:
  explicit ForceField(Kind kind) : kind_(std::move(kind)) {}

  Kind kind_;
  std::optional<double> lipschitz_;
  std::optional<double> bound_;
  double offset_ = 0.0;
};

std::vector<double> eval_force(const ForceField& f, const TransportMap& x);
std::vector<double> eval_force(const ForceField& f, const Grid& grid, std::span<const double> x);

// Per-particle average of F over each mass interval. Positions need not be sorted.
std::vector<double> projected_accelerations(const ForceField& f, std::span<const double> masses,
                                            std::span<const double> positions);
std::vector<double> discrete_projected_force(const ForceField& f, const ParticleSystem& sys);

struct StickingReport {
  bool sticking = false;
  // Xi at the plateau nodes begin..end, so size() == range.size() + 1.
  std::vector<double> xi;
};

StickingReport check_sticking(const ForceField& f, const TransportMap& x, IndexRange plateau);

}  // namespace stickyflow
