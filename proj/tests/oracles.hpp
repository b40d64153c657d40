#pragma once

// Independent reference computations for the test suites. These work on raw
// matrices and coordinates and never call the library's algorithms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "metricforge.hpp"

namespace oracle {

using metricforge::FiniteMetricSpace;
using metricforge::Index;
using metricforge::Point;

inline double euclid(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

// rho about p computed from the raw matrix.
inline double rho_raw(const FiniteMetricSpace& m, Index p, Index x, Index y) {
  return m.d(x, y) / ((1.0 + m.d(x, p)) * (1.0 + m.d(y, p)));
}

// Minimum over every simple chain from x to y of its rho-sum, each sum
// accumulated left to right starting at x. Exponential; n <= 8.
inline double chain_minimum(const FiniteMetricSpace& m, Index p, Index x, Index y) {
  const std::size_t n = m.size();
  double best = std::numeric_limits<double>::infinity();
  std::vector<char> used(n, 0);
  std::function<void(Index, double)> go = [&](Index u, double acc) {
    if (u == y) {
      best = std::min(best, acc);
      return;
    }
    for (Index v = 0; v < n; ++v) {
      if (used[v]) continue;
      used[v] = 1;
      go(v, acc + rho_raw(m, p, u, v));
      used[v] = 0;
    }
  };
  used[x] = 1;
  go(x, 0.0);
  return best;
}

// Counts lattice points (i*s, j*s), 0 <= i,j < side, in the closed disk of
// radius r about (cx, cy).
inline std::size_t lattice_points_in_disk(long side, double s, double cx, double cy, double r) {
  std::size_t c = 0;
  for (long i = 0; i < side; ++i)
    for (long j = 0; j < side; ++j) {
      const double dx = static_cast<double>(i) * s - cx, dy = static_cast<double>(j) * s - cy;
      if (std::sqrt(dx * dx + dy * dy) <= r) ++c;
    }
  return c;
}

// Inverse stereographic projection written out coordinate by coordinate.
inline std::array<double, 3> to_sphere(double u, double v) {
  const double n2 = u * u + v * v;
  return {2.0 * u / (n2 + 1.0), 2.0 * v / (n2 + 1.0), (n2 - 1.0) / (n2 + 1.0)};
}

// Chordal distance from a unit vector to the circle of polar angle `polar`.
inline double chordal_to_rim(const Point& v, double polar) {
  const double rho_xy = std::hypot(v[0], v[1]);
  const double a = std::sin(polar), b = std::cos(polar);
  // The nearest rim point lies in the same meridian plane.
  const double dx = rho_xy - a, dz = v[2] - b;
  return std::sqrt(dx * dx + dz * dz);
}

// Hand-rolled generators for property loops.
struct Gen {
  std::mt19937_64 eng;
  explicit Gen(std::uint64_t seed) : eng(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(eng); }
  std::size_t between(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(eng); }

  // Euclidean cloud in dimension 1..3 at a random scale, with duplicates
  // avoided by rejection.
  FiniteMetricSpace euclidean(std::size_t n) {
    const std::size_t dim = between(1, 3);
    const double scale = std::exp(uniform(std::log(1e-2), std::log(1e3)));
    std::vector<Point> pts;
    while (pts.size() < n) {
      Point p(dim);
      for (auto& c : p) c = uniform(-scale, scale);
      bool dup = false;
      for (const auto& q : pts) dup = dup || euclid(p, q) < 1e-9 * scale;
      if (!dup) pts.push_back(std::move(p));
    }
    return metricforge::euclidean_space(metricforge::numbered_labels("e", n), std::move(pts));
  }

  // Shortest-path metric of a random weighted graph (not necessarily
  // Euclidean, often far from it).
  FiniteMetricSpace graph_metric(std::size_t n) {
    std::vector<double> d(n * n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double w = std::exp(uniform(std::log(1e-2), std::log(1e2)));
        d[i * n + j] = d[j * n + i] = w;
      }
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) d[i * n + j] = d[j * n + i];
    metricforge::SpaceData data;
    data.labels = metricforge::numbered_labels("w", n);
    data.dist = std::move(d);
    return FiniteMetricSpace(std::move(data));
  }

  FiniteMetricSpace space(std::size_t n) { return below(2) ? euclidean(n) : graph_metric(n); }

  // Attaches a random proper nonempty boundary.
  FiniteMetricSpace with_boundary(const FiniteMetricSpace& m) {
    const std::size_t n = m.size();
    std::vector<Index> idx(n);
    std::iota(idx.begin(), idx.end(), Index{0});
    std::shuffle(idx.begin(), idx.end(), eng);
    idx.resize(between(1, n - 1));
    auto data = m.data();
    data.boundary = idx;
    return FiniteMetricSpace(std::move(data));
  }
};

}  // namespace oracle
