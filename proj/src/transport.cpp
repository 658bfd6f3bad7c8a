#include "stickyflow/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace stickyflow {

namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite value");
  }
}

}  // namespace

GridMismatch::GridMismatch(std::size_t a, std::size_t b)
    : std::invalid_argument("grid mismatch: " + std::to_string(a) + " vs " + std::to_string(b) +
                            " cells") {}

NumericalError::NumericalError(const std::string& what, std::size_t step)
    : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

Grid::Grid(std::size_t n_cells) : n_(n_cells) {
  if (n_cells == 0) throw std::invalid_argument("grid needs at least one cell");
}

std::vector<double> Grid::midpoints() const {
  std::vector<double> m(n_);
  for (std::size_t i = 0; i < n_; ++i) m[i] = midpoint(i);
  return m;
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (a != b) throw GridMismatch(a.size(), b.size());
}

TransportMap::TransportMap(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw GridMismatch(values_.size(), grid_.size());
  require_finite(values_, "TransportMap");
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i] < values_[i - 1]) {
      throw std::invalid_argument("TransportMap: values decrease at index " + std::to_string(i));
    }
  }
}

VelocityField::VelocityField(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw GridMismatch(values_.size(), grid_.size());
  require_finite(values_, "VelocityField");
}

ParticleSystem::ParticleSystem(std::vector<double> masses, std::vector<double> positions,
                               std::vector<double> velocities)
    : masses_(std::move(masses)), positions_(std::move(positions)),
      velocities_(std::move(velocities)) {
  if (masses_.empty()) throw std::invalid_argument("ParticleSystem: no particles");
  if (positions_.size() != masses_.size() || velocities_.size() != masses_.size()) {
    throw std::invalid_argument("ParticleSystem: array lengths differ");
  }
  require_finite(masses_, "ParticleSystem masses");
  require_finite(positions_, "ParticleSystem positions");
  require_finite(velocities_, "ParticleSystem velocities");
  double total = 0.0;
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    if (!(masses_[i] > 0.0)) {
      throw std::invalid_argument("ParticleSystem: mass " + std::to_string(i) + " not positive");
    }
    if (i > 0 && positions_[i] < positions_[i - 1]) {
      throw std::invalid_argument("ParticleSystem: positions decrease at index " +
                                  std::to_string(i));
    }
    total += masses_[i];
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw std::invalid_argument("ParticleSystem: masses sum to " + std::to_string(total));
  }
}

std::vector<double> ParticleSystem::cumulative_masses() const {
  std::vector<double> cum(masses_.size());
  std::partial_sum(masses_.begin(), masses_.end(), cum.begin());
  cum.back() = 1.0;
  return cum;
}

double ParticleSystem::total_momentum() const noexcept {
  double p = 0.0;
  for (std::size_t i = 0; i < masses_.size(); ++i) p += masses_[i] * velocities_[i];
  return p;
}

bool PlateauSet::refines_into(const PlateauSet& other) const {
  return std::all_of(intervals.begin(), intervals.end(), [&](const IndexRange& r) {
    return std::any_of(other.intervals.begin(), other.intervals.end(), [&](const IndexRange& o) {
      return o.begin <= r.begin && r.end <= o.end;
    });
  });
}

EulerianMeasure::EulerianMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw std::invalid_argument("EulerianMeasure: no atoms");
  double total = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    if (!std::isfinite(a.position) || !std::isfinite(a.mass) ||
        (a.momentum && !std::isfinite(*a.momentum))) {
      throw std::invalid_argument("EulerianMeasure: non-finite atom " + std::to_string(i));
    }
    if (!(a.mass > 0.0)) {
      throw std::invalid_argument("EulerianMeasure: atom " + std::to_string(i) +
                                  " has nonpositive mass");
    }
    if (i > 0 && !(a.position > atoms_[i - 1].position)) {
      throw std::invalid_argument("EulerianMeasure: positions not strictly increasing");
    }
    total += a.mass;
  }
  if (std::abs(total - 1.0) > ParticleSystem::kMassTolerance) {
    throw std::invalid_argument("EulerianMeasure: masses sum to " + std::to_string(total));
  }
}

TransportMap monotone_rearrangement(const EulerianMeasure& mu, const Grid& grid) {
  const auto atoms = mu.atoms();
  std::vector<double> values(grid.size());
  // X(m) = inf{x : M(x) > m}: the first atom whose cumulative mass exceeds m.
  std::size_t j = 0;
  double cum = atoms[0].mass;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double m = grid.midpoint(i);
    while (j + 1 < atoms.size() && !(cum > m)) {
      ++j;
      cum += atoms[j].mass;
    }
    values[i] = atoms[j].position;
  }
  return TransportMap(grid, std::move(values));
}

EulerianMeasure push_forward(const TransportMap& x) {
  const auto v = x.values();
  const double w = x.grid().width();
  std::vector<Atom> atoms;
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= v.size(); ++i) {
    if (i == v.size() || v[i] != v[begin]) {
      atoms.push_back({v[begin], static_cast<double>(i - begin) * w, std::nullopt});
      begin = i;
    }
  }
  return EulerianMeasure(std::move(atoms));
}

double wasserstein2(const TransportMap& x1, const TransportMap& x2) {
  require_same_grid(x1.grid(), x2.grid());
  return norm_l2(difference(x1.values(), x2.values()));
}

double u2_semidistance(const TransportMap& x1, const VelocityField& v1, const TransportMap& x2,
                       const VelocityField& v2) {
  require_same_grid(x1.grid(), v1.grid());
  require_same_grid(x2.grid(), v2.grid());
  require_same_grid(x1.grid(), x2.grid());
  return norm_l2(difference(v1.values(), v2.values()));
}

PlateauSet plateaus(const TransportMap& x, double tol) {
  if (tol < 0.0) throw std::invalid_argument("plateaus: negative tolerance");
  const auto v = x.values();
  PlateauSet out;
  std::size_t begin = 0;
  // Values are nondecreasing, so the spread of a run is last minus first.
  for (std::size_t i = 1; i <= v.size(); ++i) {
    if (i == v.size() || v[i] - v[begin] > tol) {
      if (i - begin >= 2) out.intervals.push_back({begin, i});
      begin = i;
    }
  }
  return out;
}

double diagnostic_tolerance(const TransportMap& x) {
  const auto v = x.values();
  return 1e-12 * std::max(1.0, v.back() - v.front());
}

std::vector<double> project_plateau_average(std::span<const double> v, const PlateauSet& p) {
  std::vector<double> out(v.begin(), v.end());
  for (const IndexRange& r : p.intervals) {
    if (r.end > v.size() || r.begin >= r.end) {
      throw std::invalid_argument("plateau range outside field");
    }
    long double sum = 0.0L;
    for (std::size_t i = r.begin; i < r.end; ++i) sum += v[i];
    const double mean = static_cast<double>(sum / static_cast<long double>(r.size()));
    std::fill(out.begin() + static_cast<std::ptrdiff_t>(r.begin),
              out.begin() + static_cast<std::ptrdiff_t>(r.end), mean);
  }
  return out;
}

VelocityField project_plateau_average(const VelocityField& v, const PlateauSet& p) {
  return VelocityField(v.grid(), project_plateau_average(v.values(), p));
}

LagrangianState particles_to_map(const ParticleSystem& sys, const Grid& grid) {
  const auto cum = sys.cumulative_masses();
  std::vector<double> x(grid.size()), v(grid.size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double m = grid.midpoint(i);
    while (j + 1 < cum.size() && !(m < cum[j])) ++j;
    x[i] = sys.positions()[j];
    v[i] = sys.velocities()[j];
  }
  return {TransportMap(grid, std::move(x)), VelocityField(grid, std::move(v))};
}

ParticleSystem map_to_particles(const TransportMap& x, const VelocityField& v) {
  require_same_grid(x.grid(), v.grid());
  const auto xs = x.values();
  const auto vs = v.values();
  const std::size_t n = xs.size();
  std::vector<double> masses, positions, velocities;
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i == n || xs[i] != xs[begin]) {
      long double sum = 0.0L;
      for (std::size_t k = begin; k < i; ++k) sum += vs[k];
      const auto count = static_cast<long double>(i - begin);
      masses.push_back(static_cast<double>(count / static_cast<long double>(n)));
      positions.push_back(xs[begin]);
      velocities.push_back(static_cast<double>(sum / count));
      begin = i;
    }
  }
  return ParticleSystem(std::move(masses), std::move(positions), std::move(velocities));
}

double norm_l1(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s += std::abs(x);
  return s / static_cast<double>(a.size());
}

double norm_l2(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s / static_cast<double>(a.size()));
}

double norm_linf(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s = std::max(s, std::abs(x));
  return s;
}

std::vector<double> difference(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw GridMismatch(a.size(), b.size());
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

}  // namespace stickyflow
