#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "metricforge/core.hpp"
#include "metricforge/parallel.hpp"

namespace metricforge {

// Two copies of a boundary-marked space glued along the boundary. Boundary
// points appear once (unsuffixed label); other points appear as "label#1" and
// "label#2". Doubled indices: all base points in order (side 1 or boundary),
// then the side-2 copies of the non-boundary points in order.
struct DoubledSpace {
  FiniteMetricSpace base;
  FiniteMetricSpace doubled;
  std::vector<Index> base_index;  // doubled index -> base index
  std::vector<int> side;          // 0 for identified boundary points, else 1 or 2
  std::optional<double> alpha;    // diam X / diam dX when |dX| >= 2

  Index index_of(Index base_point, int s) const {
    if (base.is_boundary(base_point)) return base_point;
    if (s == 1) return base_point;
    return second_copy.at(base_point);
  }

  std::vector<Index> second_copy;  // base index -> side-2 doubled index (interior points only)
};

inline DoubledSpace double_space(const FiniteMetricSpace& m) {
  if (!m.boundary() || m.boundary()->empty()) throw PreconditionError("doubling needs a nonempty marked boundary");
  const auto& bnd = *m.boundary();
  const std::size_t n = m.size();
  if (bnd.size() >= n) throw PreconditionError("boundary is the whole space; doubling would be degenerate");

  DoubledSpace ds;
  ds.base = m;
  ds.second_copy.assign(n, std::numeric_limits<Index>::max());
  for (Index x = 0; x < n; ++x) {
    ds.base_index.push_back(x);
    ds.side.push_back(m.is_boundary(x) ? 0 : 1);
  }
  for (Index x = 0; x < n; ++x) {
    if (m.is_boundary(x)) continue;
    ds.second_copy[x] = ds.base_index.size();
    ds.base_index.push_back(x);
    ds.side.push_back(2);
  }
  const std::size_t N = ds.base_index.size();

  // Cross-side entries: min over boundary z of d(x,z) + d(z,y).
  std::vector<double> dist(N * N, 0.0);
  parallel_for(0, N, [&](std::size_t q) {
    const Index x = ds.base_index[q];
    const int sq = ds.side[q];
    for (std::size_t t = 0; t < N; ++t) {
      const Index y = ds.base_index[t];
      const int st = ds.side[t];
      if (sq == 0 || st == 0 || sq == st) {
        dist[q * N + t] = m.d(x, y);
        continue;
      }
      double best = std::numeric_limits<double>::infinity();
      for (Index z : bnd) best = std::min(best, m.d(x, z) + m.d(z, y));
      dist[q * N + t] = best;
    }
  });
  // Exactly symmetric whenever the base matrix is.

  SpaceData data;
  data.labels.reserve(N);
  for (std::size_t q = 0; q < N; ++q) {
    const auto& lab = m.label(ds.base_index[q]);
    data.labels.push_back(ds.side[q] == 0 ? lab : lab + "#" + std::to_string(ds.side[q]));
  }
  data.dist = std::move(dist);
  if (m.mass()) {
    std::vector<double> mass(N);
    for (std::size_t q = 0; q < N; ++q) mass[q] = (*m.mass())[ds.base_index[q]];
    data.mass = std::move(mass);
    data.mass_dimension = m.mass_dimension();
  }
  ds.doubled = FiniteMetricSpace(std::move(data));
  if (bnd.size() >= 2) {
    const double db = diameter(m, bnd);
    if (db > 0.0) ds.alpha = diameter(m) / db;
  }
  return ds;
}

// Forgets the side.
inline Index project(const DoubledSpace& ds, Index q) {
  ds.doubled.check_index(q);
  return ds.base_index[q];
}

inline double diam_ratio(const DoubledSpace& ds) {
  if (!ds.alpha) throw PreconditionError("diameter ratio is undefined for a boundary with fewer than two points");
  return *ds.alpha;
}

}  // namespace metricforge
