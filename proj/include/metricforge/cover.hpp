#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <span>
#include <tuple>
#include <vector>

#include "metricforge/core.hpp"

namespace metricforge {

struct CoverResult {
  std::vector<Index> centers;
  std::vector<double> radius_per_center;
  // Set when the selected r-balls are pairwise disjoint and their 5r-balls
  // cover every input ball, both checked over all points of the space.
  bool disjoint_core = false;
};

// Vitali-type selection. Candidate balls B(target[i], radii[i]) are scanned by
// radius descending, ties by point index ascending; a ball is kept when
// d(x, c) > r_x + r_c for every kept ball c. A rejected ball meets a kept ball
// of radius at least its own, so it lies inside that ball's 3r- (hence 5r-) ball.
inline CoverResult greedy_cover_5r(const FiniteMetricSpace& m, std::span<const Index> target,
                                   std::span<const double> radii) {
  if (target.size() != radii.size()) throw StructuralError("target and radii lengths differ");
  CoverResult out;
  if (target.empty()) {
    out.disjoint_core = true;
    return out;
  }
  for (std::size_t i = 0; i < target.size(); ++i) {
    m.check_index(target[i]);
    if (!(radii[i] >= 0.0) || !std::isfinite(radii[i]))
      throw ParameterError("cover radii must be finite and nonnegative");
  }
  std::vector<std::size_t> order(target.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (radii[a] != radii[b]) return radii[a] > radii[b];
    return target[a] < target[b];
  });
  for (std::size_t pos : order) {
    const Index x = target[pos];
    const double rx = radii[pos];
    bool disjoint = true;
    for (std::size_t c = 0; c < out.centers.size(); ++c) {
      if (!(m.d(x, out.centers[c]) > rx + out.radius_per_center[c])) {
        disjoint = false;
        break;
      }
    }
    if (disjoint) {
      out.centers.push_back(x);
      out.radius_per_center.push_back(rx);
    }
  }

  // Certify both guarantees on the finite point set.
  bool ok = true;
  const std::size_t n = m.size();
  for (Index y = 0; y < n && ok; ++y) {
    int hits = 0;
    for (std::size_t c = 0; c < out.centers.size(); ++c)
      if (m.d(out.centers[c], y) < out.radius_per_center[c]) ++hits;
    if (hits > 1) ok = false;
  }
  for (std::size_t i = 0; i < target.size() && ok; ++i) {
    for (Index y = 0; y < n && ok; ++y) {
      if (!(m.d(target[i], y) < radii[i])) continue;
      bool covered = false;
      for (std::size_t c = 0; c < out.centers.size() && !covered; ++c)
        covered = m.d(out.centers[c], y) < 5.0 * out.radius_per_center[c];
      ok = covered;
    }
  }
  out.disjoint_core = ok;
  return out;
}

struct SetCover {
  std::vector<Index> centers;
  // assignment[u] = position in centers of the ball that first covered universe[u].
  std::vector<std::size_t> assignment;
};

// Greedy maximum-coverage cover of `universe` by balls of one radius centred at
// `candidates`. Each round takes the ball covering the most uncovered points,
// ties to the earlier candidate. Candidates must jointly cover the universe.
inline SetCover greedy_set_cover(const FiniteMetricSpace& m, std::span<const Index> universe,
                                 std::span<const Index> candidates, double radius, bool closed) {
  SetCover out;
  out.assignment.assign(universe.size(), 0);
  if (universe.empty()) return out;

  std::vector<std::vector<std::uint32_t>> covers(candidates.size());
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const auto row = m.row(candidates[c]);
    for (std::size_t u = 0; u < universe.size(); ++u) {
      const double v = row[universe[u]];
      if (closed ? v <= radius : v < radius) covers[c].push_back(static_cast<std::uint32_t>(u));
    }
  }

  std::vector<bool> covered(universe.size(), false);
  std::size_t remaining = universe.size();
  // (gain, -candidate position): larger gain first, then smaller position.
  using Key = std::pair<std::size_t, std::ptrdiff_t>;
  std::priority_queue<Key> heap;
  for (std::size_t c = 0; c < candidates.size(); ++c)
    if (!covers[c].empty()) heap.emplace(covers[c].size(), -static_cast<std::ptrdiff_t>(c));

  while (remaining > 0) {
    if (heap.empty()) throw PreconditionError("candidate balls do not cover the universe");
    auto [stale, neg] = heap.top();
    heap.pop();
    const auto c = static_cast<std::size_t>(-neg);
    std::size_t gain = 0;
    for (auto u : covers[c]) gain += covered[u] ? 0 : 1;
    if (gain == 0) continue;
    if (gain < stale) {
      heap.emplace(gain, neg);
      continue;
    }
    const std::size_t slot = out.centers.size();
    out.centers.push_back(candidates[c]);
    for (auto u : covers[c]) {
      if (!covered[u]) {
        covered[u] = true;
        out.assignment[u] = slot;
        --remaining;
      }
    }
  }
  return out;
}

}  // namespace metricforge
