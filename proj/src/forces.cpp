#include "stickyflow/forces.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "stickyflow/parallel.hpp"

namespace stickyflow {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double checked(double value, const char* what) {
  if (!std::isfinite(value)) throw std::domain_error(std::string(what) + " returned a non-finite value");
  return value;
}

double odd_derivative(const ScalarFunction& w_prime, double r) {
  return r == 0.0 ? 0.0 : checked(w_prime(r), "interaction derivative");
}

// sum_j weight_j * W'(x_i - x_j) for every i, in a fixed order per i.
std::vector<double> pairwise_sum(const ScalarFunction& w_prime, std::span<const double> weights,
                                 std::span<const double> x) {
  std::vector<double> out(x.size());
  parallel_for(x.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        if (j != i) s += weights[j] * odd_derivative(w_prime, x[i] - x[j]);
      }
      out[i] = s;
    }
  });
  return out;
}

}  // namespace

ForceField ForceField::potential(ScalarFunction v_prime) {
  if (!v_prime) throw std::invalid_argument("potential force needs a derivative");
  return ForceField(PotentialForce{std::move(v_prime)});
}

ForceField ForceField::interaction(ScalarFunction w_prime) {
  if (!w_prime) throw std::invalid_argument("interaction force needs a derivative");
  return ForceField(InteractionForce{std::move(w_prime)});
}

ForceField ForceField::euler_poisson(double lambda, std::optional<double> background) {
  if (!std::isfinite(lambda)) throw std::invalid_argument("lambda must be finite");
  if (background && !(std::isfinite(*background) && *background >= 0.0)) {
    throw std::invalid_argument("background density must be finite and nonnegative");
  }
  return ForceField(EulerPoissonForce{lambda, background});
}

ForceField ForceField::with_lipschitz(double constant) const {
  if (!(constant >= 0.0)) throw std::invalid_argument("Lipschitz constant must be nonnegative");
  ForceField f = *this;
  f.lipschitz_ = constant;
  return f;
}

ForceField ForceField::with_pointwise_bound(double constant) const {
  if (!(constant >= 0.0)) throw std::invalid_argument("pointwise bound must be nonnegative");
  ForceField f = *this;
  f.bound_ = constant;
  return f;
}

ForceField ForceField::with_offset(double acceleration) const {
  if (!std::isfinite(acceleration)) throw std::invalid_argument("offset must be finite");
  ForceField f = *this;
  f.offset_ = acceleration;
  return f;
}

bool ForceField::piecewise_constant_accelerations() const noexcept {
  const auto* ep = std::get_if<EulerPoissonForce>(&kind_);
  return ep != nullptr && (!ep->background || *ep->background == 0.0);
}

std::optional<bool> ForceField::sticking() const noexcept {
  const auto* ep = std::get_if<EulerPoissonForce>(&kind_);
  if (ep == nullptr || (ep->background && *ep->background != 0.0)) return std::nullopt;
  return ep->lambda >= 0.0;
}

std::vector<double> eval_force(const ForceField& f, const Grid& grid, std::span<const double> x) {
  if (x.size() != grid.size()) throw GridMismatch(x.size(), grid.size());
  const std::size_t n = x.size();
  std::vector<double> out(n);
  std::visit(Overloaded{
                 [&](const PotentialForce& p) {
                   for (std::size_t i = 0; i < n; ++i) {
                     out[i] = -checked(p.v_prime(x[i]), "potential derivative");
                   }
                 },
                 [&](const InteractionForce& w) {
                   const std::vector<double> weights(n, grid.width());
                   out = pairwise_sum(w.w_prime, weights, x);
                   for (double& v : out) v = -v;
                 },
                 [&](const EulerPoissonForce& ep) {
                   double gauge = 0.0;
                   const double sigma = ep.background.value_or(0.0);
                   if (sigma != 0.0) {
                     for (double xi : x) gauge += xi;
                     gauge = sigma * gauge / static_cast<double>(n);
                   }
                   for (std::size_t i = 0; i < n; ++i) {
                     const double field = grid.centered(i) - sigma * x[i] + gauge;
                     out[i] = -ep.lambda * field;
                   }
                 },
             },
             f.kind());
  if (f.offset() != 0.0) {
    for (double& v : out) v += f.offset();
  }
  return out;
}

std::vector<double> eval_force(const ForceField& f, const TransportMap& x) {
  return eval_force(f, x.grid(), x.values());
}

std::vector<double> projected_accelerations(const ForceField& f, std::span<const double> masses,
                                            std::span<const double> positions) {
  const std::size_t k = masses.size();
  if (positions.size() != k) throw std::invalid_argument("masses and positions differ in length");
  std::vector<double> a(k);
  std::visit(Overloaded{
                 [&](const PotentialForce& p) {
                   for (std::size_t i = 0; i < k; ++i) {
                     a[i] = -checked(p.v_prime(positions[i]), "potential derivative");
                   }
                 },
                 [&](const InteractionForce& w) {
                   a = pairwise_sum(w.w_prime, masses, positions);
                   for (double& v : a) v = -v;
                 },
                 [&](const EulerPoissonForce& ep) {
                   const double sigma = ep.background.value_or(0.0);
                   double gauge = 0.0;
                   if (sigma != 0.0) {
                     for (std::size_t i = 0; i < k; ++i) gauge += masses[i] * positions[i];
                     gauge *= sigma;
                   }
                   double before = 0.0;
                   for (std::size_t i = 0; i < k; ++i) {
                     const double after = i + 1 == k ? 1.0 : before + masses[i];
                     const double field = 0.5 * (before + after - 1.0) - sigma * positions[i] + gauge;
                     a[i] = -ep.lambda * field;
                     before = after;
                   }
                 },
             },
             f.kind());
  if (f.offset() != 0.0) {
    for (double& v : a) v += f.offset();
  }
  return a;
}

std::vector<double> discrete_projected_force(const ForceField& f, const ParticleSystem& sys) {
  return projected_accelerations(f, sys.masses(), sys.positions());
}

StickingReport check_sticking(const ForceField& f, const TransportMap& x, IndexRange plateau) {
  const auto v = x.values();
  if (plateau.end > v.size() || plateau.size() < 2) {
    throw std::invalid_argument("sticking test needs a range of at least two cells");
  }
  for (std::size_t i = plateau.begin + 1; i < plateau.end; ++i) {
    if (v[i] != v[plateau.begin]) throw std::invalid_argument("range is not a plateau of the map");
  }
  const auto force = eval_force(f, x);
  long double mean = 0.0L;
  for (std::size_t i = plateau.begin; i < plateau.end; ++i) mean += force[i];
  mean /= static_cast<long double>(plateau.size());

  StickingReport report;
  report.xi.reserve(plateau.size() + 1);
  report.xi.push_back(0.0);
  const long double w = x.grid().width();
  long double xi = 0.0L;
  bool ok = true;
  for (std::size_t i = plateau.begin; i < plateau.end; ++i) {
    xi += (force[i] - mean) * w;
    const double value = i + 1 == plateau.end ? 0.0 : static_cast<double>(xi);
    report.xi.push_back(value);
    ok = ok && value >= -1e-12;
  }
  report.sticking = ok;
  return report;
}

}  // namespace stickyflow
