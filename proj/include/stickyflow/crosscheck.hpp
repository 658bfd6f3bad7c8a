#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stickyflow/transport.hpp"

namespace stickyflow {

struct CrossCheckTable {
  std::vector<double> times;
  std::vector<std::size_t> particle_counts;
  // w2[t][k]: distance between the formula on the fine grid and the K-particle run.
  std::vector<std::vector<double>> w2;
};

// Attractive Euler-Poisson: the representation formula on the fine grid against
// sticky particles built from block averages of the same data.
CrossCheckTable formula_vs_particles(const LagrangianState& fine, double lambda,
                                     std::span<const std::size_t> particle_counts,
                                     std::span<const double> times);

}  // namespace stickyflow
