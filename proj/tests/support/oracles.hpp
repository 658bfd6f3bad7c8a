#pragma once

// Reference computations written independently of the library algorithms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

// Exhaustive isotonic least squares: every split of 0..n-1 into consecutive
// blocks whose means increase, keep the one with the smallest squared error.
inline std::vector<double> brute_isotonic(const std::vector<double>& x) {
  const std::size_t n = x.size();
  double best_err = std::numeric_limits<double>::infinity();
  std::vector<double> best;
  const std::uint32_t masks = n > 1 ? (1u << (n - 1)) : 1u;
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    std::vector<double> y(n);
    double prev_mean = -std::numeric_limits<double>::infinity();
    bool ok = true;
    std::size_t start = 0;
    for (std::size_t i = 0; i < n && ok; ++i) {
      const bool cut = i + 1 == n || ((mask >> i) & 1u);
      if (!cut) continue;
      double s = 0.0;
      for (std::size_t k = start; k <= i; ++k) s += x[k];
      const double mean = s / static_cast<double>(i + 1 - start);
      if (mean < prev_mean) ok = false;
      for (std::size_t k = start; k <= i; ++k) y[k] = mean;
      prev_mean = mean;
      start = i + 1;
    }
    if (!ok) continue;
    double err = 0.0;
    for (std::size_t k = 0; k < n; ++k) err += (y[k] - x[k]) * (y[k] - x[k]);
    if (err < best_err) {
      best_err = err;
      best = y;
    }
  }
  return best;
}

struct Atom {
  double x;
  double m;
};

// Exact quadratic transport cost between two sorted discrete measures,
// coupling their quantile functions piece by piece.
inline double northwest_w2(const std::vector<Atom>& a, const std::vector<Atom>& b) {
  std::size_t i = 0, j = 0;
  double ra = a[0].m, rb = b[0].m, cost = 0.0;
  while (i < a.size() && j < b.size()) {
    const double w = std::min(ra, rb);
    cost += w * (a[i].x - b[j].x) * (a[i].x - b[j].x);
    ra -= w;
    rb -= w;
    if (ra <= 1e-15 && ++i < a.size()) ra = a[i].m;
    if (rb <= 1e-15 && ++j < b.size()) rb = b[j].m;
  }
  return std::sqrt(cost);
}

inline double rms(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s / static_cast<double>(a.size()));
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) {
    return lo + (hi - lo) * (static_cast<double>(eng_() >> 11) * 0x1.0p-53);
  }
  double normal() {
    double u = uniform();
    while (u == 0.0) u = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * uniform());
  }
  std::size_t size(std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(uniform() * static_cast<double>(hi - lo + 1)) % (hi - lo + 1);
  }
  std::vector<double> normals(std::size_t n, double scale = 1.0) {
    std::vector<double> v(n);
    for (double& x : v) x = scale * normal();
    return v;
  }
  std::vector<double> sorted_normals(std::size_t n, double scale = 1.0) {
    auto v = normals(n, scale);
    std::sort(v.begin(), v.end());
    return v;
  }
  // Nondecreasing values with deliberate ties.
  std::vector<double> monotone_with_ties(std::size_t n) {
    std::vector<double> v(n);
    double x = normal();
    for (std::size_t i = 0; i < n; ++i) {
      if (uniform() < 0.6) x += std::abs(normal());
      v[i] = x;
    }
    return v;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace oracle
