#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stickyflow {

// Raised when two objects that must share a grid do not.
class GridMismatch : public std::invalid_argument {
 public:
  GridMismatch(std::size_t a, std::size_t b);
};

// Raised when a state becomes non-finite during time stepping.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::size_t step);
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

// Uniform partition of (0,1) into n cells.
class Grid {
 public:
  explicit Grid(std::size_t n_cells);

  std::size_t size() const noexcept { return n_; }
  double width() const noexcept { return 1.0 / static_cast<double>(n_); }
  double edge(std::size_t i) const noexcept {
    return static_cast<double>(i) / static_cast<double>(n_);
  }
  double midpoint(std::size_t i) const noexcept {
    return (static_cast<double>(i) + 0.5) / static_cast<double>(n_);
  }
  // midpoint(i) - 1/2 computed so that centered(i) == -centered(n-1-i) exactly.
  double centered(std::size_t i) const noexcept {
    return (2.0 * static_cast<double>(i) + 1.0 - static_cast<double>(n_)) /
           (2.0 * static_cast<double>(n_));
  }
  std::vector<double> midpoints() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t n_;
};

void require_same_grid(const Grid& a, const Grid& b);

// Nondecreasing, finite, piecewise constant map on a grid.
class TransportMap {
 public:
  TransportMap(Grid grid, std::vector<double> values);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const TransportMap&, const TransportMap&) = default;

 private:
  Grid grid_;
  std::vector<double> values_;
};

class VelocityField {
 public:
  VelocityField(Grid grid, std::vector<double> values);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const VelocityField&, const VelocityField&) = default;

 private:
  Grid grid_;
  std::vector<double> values_;
};

struct LagrangianState {
  TransportMap position;
  VelocityField velocity;
};

class ParticleSystem {
 public:
  static constexpr double kMassTolerance = 1e-12;

  ParticleSystem(std::vector<double> masses, std::vector<double> positions,
                 std::vector<double> velocities);

  std::size_t size() const noexcept { return masses_.size(); }
  std::span<const double> masses() const noexcept { return masses_; }
  std::span<const double> positions() const noexcept { return positions_; }
  std::span<const double> velocities() const noexcept { return velocities_; }
  // M_i = m_0 + ... + m_i, with the last entry pinned to 1.
  std::vector<double> cumulative_masses() const;
  double total_momentum() const noexcept;

  friend bool operator==(const ParticleSystem&, const ParticleSystem&) = default;

 private:
  std::vector<double> masses_;
  std::vector<double> positions_;
  std::vector<double> velocities_;
};

// Half-open index range [begin, end).
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  bool contains(std::size_t i) const noexcept { return begin <= i && i < end; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

struct PlateauSet {
  std::vector<IndexRange> intervals;

  bool empty() const noexcept { return intervals.empty(); }
  // Every plateau of this set lies inside some plateau of other.
  bool refines_into(const PlateauSet& other) const;
  friend bool operator==(const PlateauSet&, const PlateauSet&) = default;
};

struct Atom {
  double position = 0.0;
  double mass = 0.0;
  std::optional<double> momentum;
};

class EulerianMeasure {
 public:
  explicit EulerianMeasure(std::vector<Atom> atoms);

  std::span<const Atom> atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }

 private:
  std::vector<Atom> atoms_;
};

TransportMap monotone_rearrangement(const EulerianMeasure& mu, const Grid& grid);
EulerianMeasure push_forward(const TransportMap& x);

double wasserstein2(const TransportMap& x1, const TransportMap& x2);
double u2_semidistance(const TransportMap& x1, const VelocityField& v1,
                       const TransportMap& x2, const VelocityField& v2);

// Maximal runs of length >= 2 whose values lie within tol of each other.
PlateauSet plateaus(const TransportMap& x, double tol = 0.0);
// Tolerance used for diagnostic plateau detection on computed data.
double diagnostic_tolerance(const TransportMap& x);

VelocityField project_plateau_average(const VelocityField& v, const PlateauSet& p);
std::vector<double> project_plateau_average(std::span<const double> v, const PlateauSet& p);

LagrangianState particles_to_map(const ParticleSystem& sys, const Grid& grid);
ParticleSystem map_to_particles(const TransportMap& x, const VelocityField& v);

// Discrete norms with uniform cell weights 1/N.
double norm_l1(std::span<const double> a);
double norm_l2(std::span<const double> a);
double norm_linf(std::span<const double> a);
std::vector<double> difference(std::span<const double> a, std::span<const double> b);

}  // namespace stickyflow
