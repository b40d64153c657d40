#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "metricforge/core.hpp"
#include "metricforge/parallel.hpp"

namespace metricforge {

// Label reserved for the point adjoined at infinity.
inline constexpr std::string_view kInfinityLabel = "\xE2\x88\x9E";  // U+221E

// rho_p(x, y) = d(x, y) / ((1 + d(x, p)) (1 + d(y, p))).
inline double rho(const FiniteMetricSpace& m, Index p, Index x, Index y) {
  m.check_index(p);
  m.check_index(x);
  m.check_index(y);
  return m.d(x, y) / ((1.0 + m.d(x, p)) * (1.0 + m.d(y, p)));
}

struct WarpedSpace {
  FiniteMetricSpace base;
  Index basepoint = 0;
  std::vector<double> h;  // h(x) = 1 / (1 + d(x, p))
  // Base points in their original order followed by the point at infinity.
  FiniteMetricSpace warped;

  Index infinity() const noexcept { return base.size(); }
  double dhat(Index x, Index y) const noexcept { return warped.d(x, y); }
};

namespace detail {

// Minimum over chains from `source` of the chain's rho-sum, accumulated from
// the source outwards. Dense O(n^2) label-setting search; floating-point
// addition is monotone, so the result is the exact minimum of those sums.
inline void chain_minimum_from(std::span<const double> weights, std::size_t n, std::size_t source,
                               std::vector<double>& dist) {
  std::vector<bool> done(n, false);
  dist.assign(n, std::numeric_limits<double>::infinity());
  dist[source] = 0.0;
  for (std::size_t round = 0; round < n; ++round) {
    std::size_t u = n;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < n; ++v) {
      if (!done[v] && dist[v] < best) {
        best = dist[v];
        u = v;
      }
    }
    if (u == n) break;
    done[u] = true;
    const double* wu = weights.data() + u * n;
    for (std::size_t v = 0; v < n; ++v) {
      if (done[v]) continue;
      const double cand = best + wu[v];
      if (cand < dist[v]) dist[v] = cand;
    }
  }
}

}  // namespace detail

// The warped metric on the base points is the chain infimum of rho, which on a
// finite set is the shortest-path value on the complete rho-weighted graph.
// The entry for a pair is taken from the search rooted at the lower index, so
// the matrix is exactly symmetric. Infinity sits at distance h(x) from x.
inline WarpedSpace warp(const FiniteMetricSpace& m, Index p) {
  m.check_index(p);
  if (m.index_of(kInfinityLabel)) throw ParameterError("label '\xE2\x88\x9E' is reserved for the adjoined point");
  const std::size_t n = m.size();

  WarpedSpace w;
  w.base = m;
  w.basepoint = p;
  w.h.resize(n);
  for (Index x = 0; x < n; ++x) w.h[x] = 1.0 / (1.0 + m.d(x, p));

  std::vector<double> weights(n * n);
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y) weights[x * n + y] = m.d(x, y) / ((1.0 + m.d(x, p)) * (1.0 + m.d(y, p)));

  const std::size_t N = n + 1;
  std::vector<double> dist(N * N, 0.0);
  parallel_for(0, n, [&](std::size_t s) {
    std::vector<double> row;
    detail::chain_minimum_from(weights, n, s, row);
    for (std::size_t t = s + 1; t < n; ++t) {
      dist[s * N + t] = row[t];
      dist[t * N + s] = row[t];
    }
  });
  for (Index x = 0; x < n; ++x) {
    dist[x * N + n] = w.h[x];
    dist[n * N + x] = w.h[x];
  }

  SpaceData data;
  data.labels = m.labels();
  data.labels.emplace_back(kInfinityLabel);
  data.dist = std::move(dist);
  w.warped = FiniteMetricSpace(std::move(data));
  return w;
}

// Open warped ball about infinity, as warped-space indices (infinity included).
inline std::vector<Index> infty_ball(const WarpedSpace& w, double r) {
  if (!(r > 0.0)) throw ParameterError("radius must be positive");
  return ball(w.warped, w.infinity(), r, false);
}

struct InclusionViolation {
  Index point = 0;
  bool closed = false;  // closed-ball variant
  bool outer = false;   // false: inner d-ball not inside the warped ball; true: warped ball not inside outer d-ball
};

struct InclusionReport {
  bool precondition_ok = false;
  Index center = 0;
  double r = 0.0;
  double C = 0.0;
  double inner_radius = 0.0;  // (r / dhat(a,inf)^2) * C / (C + 1)
  double outer_radius = 0.0;  // (r / dhat(a,inf)^2) * 4C / (C - 1)
  std::vector<InclusionViolation> violations;
  bool ok() const noexcept { return precondition_ok && violations.empty(); }
};

// Checks B_d(a, inner) in B_dhat(a, r) in B_d(a, outer) over the base points,
// for open balls (strict comparisons) and closed balls (non-strict). Requires
// C > 1 and 0 < r <= dhat(a, inf) / C; otherwise nothing is evaluated.
inline InclusionReport check_inclusions(const WarpedSpace& w, Index a, double r, double C) {
  w.base.check_index(a);
  InclusionReport rep;
  rep.center = a;
  rep.r = r;
  rep.C = C;
  const double to_inf = w.dhat(a, w.infinity());
  if (!(C > 1.0) || !(r > 0.0) || !(r <= to_inf / C)) return rep;
  rep.precondition_ok = true;
  const double scale = r / (to_inf * to_inf);
  rep.inner_radius = scale * C / (C + 1.0);
  rep.outer_radius = scale * 4.0 * C / (C - 1.0);
  for (Index x = 0; x < w.base.size(); ++x) {
    const double d = w.base.d(a, x);
    const double dh = w.dhat(a, x);
    if (d < rep.inner_radius && !(dh < r)) rep.violations.push_back({x, false, false});
    if (dh < r && !(d < rep.outer_radius)) rep.violations.push_back({x, false, true});
    if (d <= rep.inner_radius && !(dh <= r)) rep.violations.push_back({x, true, false});
    if (dh <= r && !(d <= rep.outer_radius)) rep.violations.push_back({x, true, true});
  }
  return rep;
}

}  // namespace metricforge
