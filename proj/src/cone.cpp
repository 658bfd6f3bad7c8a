#include "stickyflow/cone.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace stickyflow {

namespace {

void require_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite value in projection input");
  }
}

// Indices of the lower hull of points (x(k), y(k)), k = 0..n-1, x increasing.
template <class X, class Y>
std::vector<std::size_t> lower_hull(std::size_t n, X x, Y y) {
  std::vector<std::size_t> hull;
  hull.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    while (hull.size() >= 2) {
      const std::size_t o = hull[hull.size() - 2];
      const std::size_t a = hull.back();
      const long double cross = (x(a) - x(o)) * (y(k) - y(o)) - (y(a) - y(o)) * (x(k) - x(o));
      if (cross > 0.0L) break;
      hull.pop_back();
    }
    hull.push_back(k);
  }
  return hull;
}

struct Block {
  long double weighted_sum;
  long double weight;
  std::size_t count;
  long double mean() const { return weighted_sum / weight; }
};

void push_block(std::vector<Block>& stack, Block b) {
  stack.push_back(b);
  while (stack.size() >= 2 && stack[stack.size() - 2].mean() > stack.back().mean()) {
    Block top = stack.back();
    stack.pop_back();
    stack.back().weighted_sum += top.weighted_sum;
    stack.back().weight += top.weight;
    stack.back().count += top.count;
  }
}

std::vector<double> expand(const std::vector<Block>& stack, std::size_t n) {
  std::vector<double> out;
  out.reserve(n);
  for (const Block& b : stack) out.insert(out.end(), b.count, static_cast<double>(b.mean()));
  return out;
}

double floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return static_cast<double>(q);
}

}  // namespace

std::vector<EnvelopePoint> cumulative_primitive(std::span<const double> values) {
  require_finite(values);
  const auto n = static_cast<double>(values.size());
  std::vector<EnvelopePoint> pts(values.size() + 1);
  long double sum = 0.0L;
  for (std::size_t k = 0; k <= values.size(); ++k) {
    pts[k] = {static_cast<double>(k) / n, static_cast<double>(sum / static_cast<long double>(n))};
    if (k < values.size()) sum += values[k];
  }
  return pts;
}

std::vector<EnvelopePoint> lower_convex_envelope(std::span<const EnvelopePoint> points) {
  if (points.size() < 2) throw std::invalid_argument("envelope needs at least two points");
  for (std::size_t k = 1; k < points.size(); ++k) {
    if (!(points[k].m > points[k - 1].m)) {
      throw std::invalid_argument("envelope points must have increasing m");
    }
  }
  const auto idx = lower_hull(
      points.size(), [&](std::size_t k) { return static_cast<long double>(points[k].m); },
      [&](std::size_t k) { return static_cast<long double>(points[k].value); });
  std::vector<EnvelopePoint> out;
  out.reserve(idx.size());
  for (std::size_t k : idx) out.push_back(points[k]);
  return out;
}

std::vector<double> isotonic_projection(std::span<const double> values) {
  require_finite(values);
  const std::size_t n = values.size();
  if (n == 0) return {};
  std::vector<long double> prefix(n + 1, 0.0L);
  for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + values[k];
  const auto hull = lower_hull(
      n + 1, [](std::size_t k) { return static_cast<long double>(k); },
      [&](std::size_t k) { return prefix[k]; });

  // Segment means are re-summed from the inputs; single cells come back bit-exact.
  // The block merge only fires on rounding-level inversions.
  std::vector<Block> stack;
  stack.reserve(hull.size());
  for (std::size_t s = 1; s < hull.size(); ++s) {
    long double sum = 0.0L;
    for (std::size_t i = hull[s - 1]; i < hull[s]; ++i) sum += values[i];
    const std::size_t count = hull[s] - hull[s - 1];
    push_block(stack, {sum, static_cast<long double>(count), count});
  }
  return expand(stack, n);
}

TransportMap project_cone(const Grid& grid, std::span<const double> values) {
  if (values.size() != grid.size()) throw GridMismatch(values.size(), grid.size());
  return TransportMap(grid, isotonic_projection(values));
}

std::vector<double> isotonic_pava(std::span<const double> values, std::span<const double> weights) {
  require_finite(values);
  if (weights.size() != values.size()) throw GridMismatch(weights.size(), values.size());
  std::vector<Block> stack;
  stack.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw std::invalid_argument("PAVA weight " + std::to_string(i) + " is not positive");
    }
    const long double w = weights[i];
    push_block(stack, {w * static_cast<long double>(values[i]), w, 1});
  }
  return expand(stack, values.size());
}

TransportMap project_cone_pava(const Grid& grid, std::span<const double> values,
                               std::span<const double> weights) {
  if (values.size() != grid.size()) throw GridMismatch(values.size(), grid.size());
  return TransportMap(grid, isotonic_pava(values, weights));
}

TransportMap project_cone_pava(const Grid& grid, std::span<const double> values) {
  const std::vector<double> w(values.size(), 1.0);
  return project_cone_pava(grid, values, w);
}

std::vector<double> periodic_rearrange(std::span<const double> values) {
  require_finite(values);
  const std::size_t n = values.size();
  if (n == 0) return {};
  std::vector<double> floors(n), fracs(n);
  std::int64_t shift = 0;
  for (std::size_t i = 0; i < n; ++i) {
    floors[i] = std::floor(values[i]);
    fracs[i] = values[i] - floors[i];
    if (fracs[i] >= 1.0) {  // rounding at tiny negative inputs
      floors[i] += 1.0;
      fracs[i] = 0.0;
    }
    shift += static_cast<std::int64_t>(floors[i]);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return fracs[a] < fracs[b]; });

  // Slot i takes the point of rank (i + shift) mod n on the lift floor((i + shift)/n).
  // The sum of the output equals the sum of the input.
  const auto nn = static_cast<std::int64_t>(n);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t q = static_cast<std::int64_t>(i) + shift;
    const std::int64_t r = ((q % nn) + nn) % nn;
    const std::size_t p = order[static_cast<std::size_t>(r)];
    const double offset = floor_div(q, nn) - floors[p];
    out[i] = offset == 0.0 ? values[p] : values[p] + offset;
    // Lifting by an integer can round across an equal fractional neighbour.
    if (i > 0 && out[i] < out[i - 1]) out[i] = out[i - 1];
  }
  return out;
}

std::vector<ConvexIntegrand> default_convex_family() {
  std::vector<ConvexIntegrand> family = {
      {"abs", [](double r) { return std::abs(r); }},
      {"square", [](double r) { return r * r; }},
      {"quartic", [](double r) { return r * r * r * r; }},
      {"exp", [](double r) { return std::expm1(std::abs(r)); }},
  };
  for (double c : {0.25, 0.5, 1.0, 2.0}) {
    family.push_back({"hinge" + std::to_string(c),
                      [c](double r) { return std::max(0.0, std::abs(r) - c); }});
  }
  return family;
}

bool dominates(std::span<const double> y, std::span<const double> x,
               std::span<const ConvexIntegrand> family) {
  if (y.size() != x.size()) throw GridMismatch(y.size(), x.size());
  const auto n = static_cast<long double>(x.size());
  for (const ConvexIntegrand& f : family) {
    long double sy = 0.0L, sx = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sy += f.psi(y[i]);
      sx += f.psi(x[i]);
    }
    if (sy / n > sx / n + 1e-12L) return false;
  }
  return true;
}

bool dominates(std::span<const double> y, std::span<const double> x) {
  const auto family = default_convex_family();
  return dominates(y, x, family);
}

}  // namespace stickyflow
