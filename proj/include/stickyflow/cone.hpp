#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "stickyflow/transport.hpp"

namespace stickyflow {

struct EnvelopePoint {
  double m = 0.0;
  double value = 0.0;
  friend bool operator==(const EnvelopePoint&, const EnvelopePoint&) = default;
};

// Points (k/N, (1/N) * sum_{i<k} values[i]) for k = 0..N.
std::vector<EnvelopePoint> cumulative_primitive(std::span<const double> values);

// Vertices of the lower convex hull, endpoints included.
std::vector<EnvelopePoint> lower_convex_envelope(std::span<const EnvelopePoint> points);

// L2 projection onto nondecreasing vectors via the envelope of the primitive.
std::vector<double> isotonic_projection(std::span<const double> values);
TransportMap project_cone(const Grid& grid, std::span<const double> values);

// Weighted pool-adjacent-violators.
std::vector<double> isotonic_pava(std::span<const double> values, std::span<const double> weights);
TransportMap project_cone_pava(const Grid& grid, std::span<const double> values,
                               std::span<const double> weights);
TransportMap project_cone_pava(const Grid& grid, std::span<const double> values);

// Nondecreasing rearrangement of values whose offset from the identity is
// 1-periodic. The representative keeps the mean of the input.
std::vector<double> periodic_rearrange(std::span<const double> values);

struct ConvexIntegrand {
  std::string name;
  std::function<double(double)> psi;
};

std::vector<ConvexIntegrand> default_convex_family();

bool dominates(std::span<const double> y, std::span<const double> x,
               std::span<const ConvexIntegrand> family);
bool dominates(std::span<const double> y, std::span<const double> x);

}  // namespace stickyflow
