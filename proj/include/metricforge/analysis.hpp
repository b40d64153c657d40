#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "metricforge/core.hpp"
#include "metricforge/cover.hpp"
#include "metricforge/parallel.hpp"
#include "metricforge/rng.hpp"

namespace metricforge {

// All constants reported here are one-sided, grid-resolved estimates from
// greedy covers and proximity-graph connectivity; none is an exact optimum.

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Grids and samples

// Geometric grid 1, 2^(1/4), ..., up to and including `max_lambda`.
inline std::vector<double> default_lambda_grid(double max_lambda = 16.0) {
  if (!(max_lambda >= 1.0)) throw ParameterError("lambda grid maximum must be at least 1");
  std::vector<double> grid;
  for (int k = 0;; ++k) {
    const double v = std::pow(2.0, k / 4.0);
    if (v > max_lambda * (1 + 1e-12)) break;
    grid.push_back(v);
  }
  return grid;
}

// `count` log-spaced values from lo to hi inclusive.
inline std::vector<double> log_radii(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo)) throw ParameterError("radii range must satisfy 0 < lo <= hi");
  std::vector<double> out;
  if (count == 0) return out;
  if (count == 1 || hi == lo) return {lo};
  for (std::size_t k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(count - 1);
    out.push_back(k + 1 == count ? hi : lo * std::pow(hi / lo, t));
  }
  return out;
}

// Proximity scale for continuum checks: 2.5x the sample spacing.
inline double default_delta(const FiniteMetricSpace& m) { return 2.5 * sample_spacing(m); }

// Radii from 3*scale up to the diameter; empty when that range is empty.
inline std::vector<double> default_radii(const FiniteMetricSpace& m, double scale, std::size_t count = 8) {
  const double lo = 3.0 * scale, hi = diameter(m);
  if (!(lo > 0.0) || !(lo < hi)) return {};
  return log_radii(lo, hi, count);
}

// `count` distinct indices from [0, n), sorted; all of them when count >= n.
inline std::vector<Index> sample_centers(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::vector<Index> all(n);
  for (Index i = 0; i < n; ++i) all[i] = i;
  if (count >= n) return all;
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(all[i], all[j]);
  }
  all.resize(count);
  std::sort(all.begin(), all.end());
  return all;
}

// ---------------------------------------------------------------------------
// Doubling

// Greedy count of open (r/2)-balls, centred anywhere in the space, covering the
// open ball B(a, r).
inline int doubling_count(const FiniteMetricSpace& m, Index a, double r) {
  m.check_index(a);
  if (!(r > 0.0)) throw ParameterError("doubling radii must be positive");
  std::vector<Index> universe, candidates;
  const auto row = m.row(a);
  for (Index x = 0; x < m.size(); ++x) {
    if (row[x] < r) universe.push_back(x);
    if (row[x] < 1.5 * r) candidates.push_back(x);
  }
  return static_cast<int>(greedy_set_cover(m, universe, candidates, r / 2.0, false).centers.size());
}

struct DoublingWitness {
  Index center = 0;
  double radius = 0.0;
  int count = 0;
};

struct DoublingReport {
  int M_hat = 1;
  std::optional<DoublingWitness> worst;
};

inline DoublingReport doubling_report(const FiniteMetricSpace& m, std::span<const double> radii,
                                      std::span<const Index> centers) {
  for (double r : radii)
    if (!(r > 0.0)) throw ParameterError("doubling radii must be positive");
  const std::size_t R = radii.size();
  std::vector<int> counts(centers.size() * R, 0);
  parallel_for(0, counts.size(), [&](std::size_t k) { counts[k] = doubling_count(m, centers[k / R], radii[k % R]); });
  DoublingReport rep;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (!rep.worst || counts[k] > rep.worst->count) rep.worst = DoublingWitness{centers[k / R], radii[k % R], counts[k]};
  }
  if (rep.worst) rep.M_hat = std::max(1, rep.worst->count);
  return rep;
}

inline int doubling_constant(const FiniteMetricSpace& m, std::span<const double> radii, std::span<const Index> centers) {
  return doubling_report(m, radii, centers).M_hat;
}

// ---------------------------------------------------------------------------
// Hausdorff pre-measure

// A greedy closed eps-net of the whole space; every point is charged to the
// net ball that first covered it. The pre-measure of S is eps^Q times the number
// of distinct net balls charged by points of S. Every such ball is centred
// within eps of S, and the value is monotone in S and subadditive over unions.
class PremeasureNet {
 public:
  PremeasureNet(const FiniteMetricSpace& m, double eps) : eps_(eps) {
    if (!(eps > 0.0)) throw ParameterError("pre-measure scale eps must be positive");
    std::vector<Index> all(m.size());
    for (Index i = 0; i < m.size(); ++i) all[i] = i;
    auto cover = greedy_set_cover(m, all, all, eps, true);
    centers_ = std::move(cover.centers);
    assignment_ = std::move(cover.assignment);
  }

  double eps() const noexcept { return eps_; }
  const std::vector<Index>& centers() const noexcept { return centers_; }

  std::size_t count(std::span<const Index> subset) const {
    std::vector<char> seen(centers_.size(), 0);
    std::size_t c = 0;
    for (Index x : subset) {
      auto& s = seen[assignment_.at(x)];
      if (!s) {
        s = 1;
        ++c;
      }
    }
    return c;
  }

  double value(std::span<const Index> subset, double Q) const {
    return static_cast<double>(count(subset)) * std::pow(eps_, Q);
  }

 private:
  double eps_;
  std::vector<Index> centers_;
  std::vector<std::size_t> assignment_;
};

inline double hausdorff_premeasure(const FiniteMetricSpace& m, std::span<const Index> subset, double Q, double eps) {
  if (subset.empty()) throw ParameterError("pre-measure needs a nonempty set");
  for (Index x : subset) m.check_index(x);
  return PremeasureNet(m, eps).value(subset, Q);
}

// ---------------------------------------------------------------------------
// Ahlfors regularity

struct RegularityWitness {
  Index center = 0;
  double radius = 0.0;
  double ratio = 0.0;  // measure / r^Q
};

struct RegularityReport {
  double Q = 0.0;
  double K_hat = 1.0;  // +inf when some evaluated ball has zero measure
  int M_hat = 1;
  bool doubling_evaluated = false;
  std::string measure;  // "mass" or "premeasure"
  std::optional<double> eps;
  std::vector<double> radii;  // evaluated radii (0 < r <= diam)
  std::vector<Index> centers;
  std::optional<RegularityWitness> worst_witness;
  bool infinite() const noexcept { return std::isinf(K_hat); }
};

struct RegularityOptions {
  // Use the eps-pre-measure as the measure even when masses are present.
  std::optional<double> eps;
  bool with_doubling = true;
};

// Measure proxy: point masses when present, else the eps-pre-measure. A mass
// entry is the Q0-dimensional content of its point's cell (Q0 = mass_dimension);
// at exponent Q it contributes mass^(Q/Q0), the content of a cell of the same
// linear size.
inline RegularityReport regularity_constant(const FiniteMetricSpace& m, double Q, std::span<const double> radii,
                                            std::span<const Index> centers, const RegularityOptions& opts = {}) {
  if (!(Q >= 0.0)) throw ParameterError("exponent Q must be nonnegative");
  for (Index c : centers) m.check_index(c);
  RegularityReport rep;
  rep.Q = Q;
  rep.centers.assign(centers.begin(), centers.end());

  const bool use_mass = m.mass().has_value() && !opts.eps.has_value();
  if (!use_mass && !opts.eps) throw PreconditionError("regularity needs point masses or a pre-measure scale eps");
  std::vector<double> weight;
  std::optional<PremeasureNet> net;
  if (use_mass) {
    rep.measure = "mass";
    const double exponent = m.mass_dimension() ? Q / *m.mass_dimension() : 1.0;
    weight.reserve(m.size());
    for (double w : *m.mass()) weight.push_back(exponent == 1.0 ? w : std::pow(w, exponent));
  } else {
    rep.measure = "premeasure";
    rep.eps = opts.eps;
    net.emplace(m, *opts.eps);
  }

  const double diam = diameter(m);
  for (double r : radii) {
    if (!(r > 0.0)) throw ParameterError("regularity radii must be positive");
    if (r <= diam) rep.radii.push_back(r);
  }

  const std::size_t R = rep.radii.size();
  std::vector<double> measured(centers.size() * R, 0.0);
  parallel_for(0, measured.size(), [&](std::size_t k) {
    const auto members = ball(m, centers[k / R], rep.radii[k % R], true);
    if (use_mass) {
      double s = 0.0;
      for (Index x : members) s += weight[x];
      measured[k] = s;
    } else {
      measured[k] = net->value(members, Q);
    }
  });
  for (std::size_t k = 0; k < measured.size(); ++k) {
    const double r = rep.radii[k % R];
    const double rq = std::pow(r, Q);
    const double ratio = measured[k] / rq;
    const double K = measured[k] > 0.0 ? std::max(ratio, 1.0 / ratio) : kInf;
    if (!rep.worst_witness || K > rep.K_hat) {
      rep.K_hat = std::max(rep.K_hat, K);
      rep.worst_witness = RegularityWitness{centers[k / R], r, ratio};
    }
  }
  if (opts.with_doubling && R > 0) {
    rep.M_hat = doubling_constant(m, rep.radii, centers);
    rep.doubling_evaluated = true;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Linear local connectivity

// Points are adjacent iff their distance is at most delta. Connected subsets of
// this graph stand in for continua.
struct ProximityGraph {
  double delta = 0.0;
  std::vector<std::vector<Index>> adj;
  bool connected = false;
};

inline ProximityGraph proximity_graph(const FiniteMetricSpace& m, double delta) {
  if (!(delta > 0.0)) throw ParameterError("proximity scale delta must be positive");
  ProximityGraph g;
  g.delta = delta;
  const std::size_t n = m.size();
  g.adj.resize(n);
  for (Index x = 0; x < n; ++x) {
    const auto row = m.row(x);
    for (Index y = 0; y < n; ++y)
      if (y != x && row[y] <= delta) g.adj[x].push_back(y);
  }
  if (n == 0) {
    g.connected = true;
    return g;
  }
  std::vector<char> seen(n, 0);
  std::vector<Index> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const Index u = stack.back();
    stack.pop_back();
    for (Index v : g.adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  g.connected = reached == n;
  return g;
}

struct LLCWitness {
  Index center = 0;
  double radius = 0.0;
  double lambda = 0.0;  // grid value at which (x, y) could not be joined
  Index x = 0, y = 0;
};

struct LLCReport {
  double lambda1 = 1.0;  // +inf when no grid value passes
  double lambda2 = 1.0;
  double delta = 0.0;
  std::vector<double> grid;
  std::vector<double> radii;
  std::vector<Index> centers;
  bool usable = true;  // false when the proximity graph of the whole space is disconnected
  std::vector<LLCWitness> llc1_failures;  // at the last failing grid value, largest radius first
  std::vector<LLCWitness> llc2_failures;
  std::size_t llc1_configs = 0;  // configurations with at least two points to join
  std::size_t llc2_configs = 0;
  std::size_t llc2_vacuous = 0;  // skipped: r > diam or fewer than two points outside the ball
};

namespace detail {

// Labels connected components of the graph restricted to `allowed`; -1 marks
// excluded vertices.
inline std::vector<int> restricted_components(const ProximityGraph& g, const std::vector<char>& allowed) {
  const std::size_t n = g.adj.size();
  std::vector<int> comp(n, -1);
  int next = 0;
  std::vector<Index> stack;
  for (Index s = 0; s < n; ++s) {
    if (!allowed[s] || comp[s] >= 0) continue;
    comp[s] = next;
    stack.assign(1, s);
    while (!stack.empty()) {
      const Index u = stack.back();
      stack.pop_back();
      for (Index v : g.adj[u]) {
        if (allowed[v] && comp[v] < 0) {
          comp[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return comp;
}

// True when all of `targets` lie in one component of the graph restricted to `allowed`.
inline bool joined_within(const ProximityGraph& g, std::span<const Index> targets, const std::vector<char>& allowed,
                          std::vector<char>& seen, std::vector<Index>& stack) {
  std::fill(seen.begin(), seen.end(), 0);
  const Index s = targets.front();
  if (!allowed[s]) return false;
  seen[s] = 1;
  stack.assign(1, s);
  while (!stack.empty()) {
    const Index u = stack.back();
    stack.pop_back();
    for (Index v : g.adj[u]) {
      if (allowed[v] && !seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  for (Index t : targets)
    if (!seen[t]) return false;
  return true;
}

struct LLCConfigResult {
  std::size_t k1 = 0, k2 = 0;  // first passing grid index; grid.size() when none passes
  bool has1 = false, has2 = false, vacuous2 = false;
};

// Closest pair of targets lying in different components.
inline std::pair<Index, Index> split_witness(const FiniteMetricSpace& m, const std::vector<int>& comp,
                                             std::span<const Index> targets) {
  std::pair<Index, Index> best{targets.front(), targets.front()};
  double bestd = kInf;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    for (std::size_t j = i + 1; j < targets.size(); ++j) {
      const Index x = targets[i], y = targets[j];
      if (comp[x] == comp[y] && comp[x] >= 0) continue;
      if (m.d(x, y) < bestd) {
        bestd = m.d(x, y);
        best = {x, y};
      }
    }
  }
  return best;
}

}  // namespace detail

// For each configuration (a, r): LLC1 asks that all points of B(a, r) be joined
// inside B(a, lambda r); LLC2 that all points outside B(a, r) be joined outside
// B(a, r / lambda). Both predicates are monotone in lambda, so each
// configuration's least passing grid value is found by bisection. LLC2
// configurations with r > diam are vacuous and skipped.
inline LLCReport llc_constants(const FiniteMetricSpace& m, double delta, std::span<const double> lambda_grid,
                               std::span<const Index> centers, std::span<const double> radii,
                               std::size_t max_witnesses = 16) {
  if (lambda_grid.empty()) throw ParameterError("lambda grid is empty");
  for (std::size_t k = 0; k < lambda_grid.size(); ++k) {
    if (!(lambda_grid[k] >= 1.0) || (k > 0 && !(lambda_grid[k] > lambda_grid[k - 1])))
      throw ParameterError("lambda grid must be increasing and start at or above 1");
  }
  for (double r : radii)
    if (!(r > 0.0)) throw ParameterError("LLC radii must be positive");
  for (Index c : centers) m.check_index(c);

  LLCReport rep;
  rep.delta = delta;
  rep.grid.assign(lambda_grid.begin(), lambda_grid.end());
  rep.radii.assign(radii.begin(), radii.end());
  rep.centers.assign(centers.begin(), centers.end());
  const auto graph = proximity_graph(m, delta);
  if (!graph.connected) {
    rep.usable = false;
    rep.lambda1 = rep.lambda2 = kInf;
    return rep;
  }

  const std::size_t n = m.size(), G = lambda_grid.size(), R = radii.size();
  const double diam = diameter(m);
  std::vector<detail::LLCConfigResult> results(centers.size() * R);

  parallel_for(0, results.size(), [&](std::size_t k) {
    const Index a = centers[k / R];
    const double r = radii[k % R];
    const auto row = m.row(a);
    auto& res = results[k];
    std::vector<char> allowed(n), seen(n);
    std::vector<Index> stack, targets;

    auto least_passing = [&](auto&& admit) {
      std::size_t lo = 0, hi = G;  // answer in [lo, hi]; hi == G means none passes
      while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        for (Index v = 0; v < n; ++v) allowed[v] = admit(row[v], lambda_grid[mid]);
        if (detail::joined_within(graph, targets, allowed, seen, stack))
          hi = mid;
        else
          lo = mid + 1;
      }
      return lo;
    };

    targets.clear();
    for (Index v = 0; v < n; ++v)
      if (row[v] < r) targets.push_back(v);
    if (targets.size() >= 2) {
      res.has1 = true;
      res.k1 = least_passing([r](double dv, double lam) { return dv < lam * r; });
    }

    targets.clear();
    if (r <= diam)
      for (Index v = 0; v < n; ++v)
        if (row[v] >= r) targets.push_back(v);
    if (targets.size() >= 2) {
      res.has2 = true;
      res.k2 = least_passing([r](double dv, double lam) { return dv >= r / lam; });
    } else {
      res.vacuous2 = true;
    }
  });

  std::size_t K1 = 0, K2 = 0;
  for (const auto& res : results) {
    if (res.has1) {
      ++rep.llc1_configs;
      K1 = std::max(K1, res.k1);
    }
    if (res.has2) {
      ++rep.llc2_configs;
      K2 = std::max(K2, res.k2);
    }
    if (res.vacuous2) ++rep.llc2_vacuous;
  }
  rep.lambda1 = K1 < G ? lambda_grid[K1] : kInf;
  rep.lambda2 = K2 < G ? lambda_grid[K2] : kInf;

  // Witnesses for the configurations that fail at the last failing grid value.
  auto collect = [&](bool first, std::size_t K, std::vector<LLCWitness>& out) {
    if (K == 0) return;
    std::vector<std::size_t> failing;
    for (std::size_t k = 0; k < results.size(); ++k) {
      const auto& res = results[k];
      if (first ? (res.has1 && res.k1 == K) : (res.has2 && res.k2 == K)) failing.push_back(k);
    }
    std::stable_sort(failing.begin(), failing.end(),
                     [&](std::size_t p, std::size_t q) { return radii[p % R] > radii[q % R]; });
    if (failing.size() > max_witnesses) failing.resize(max_witnesses);
    const double lam = lambda_grid[K - 1];
    for (std::size_t k : failing) {
      const Index a = centers[k / R];
      const double r = radii[k % R];
      const auto row = m.row(a);
      std::vector<char> allowed(n);
      std::vector<Index> targets;
      for (Index v = 0; v < n; ++v) {
        allowed[v] = first ? row[v] < lam * r : row[v] >= r / lam;
        if (first ? row[v] < r : row[v] >= r) targets.push_back(v);
      }
      const auto comp = detail::restricted_components(graph, allowed);
      const auto [x, y] = detail::split_witness(m, comp, targets);
      out.push_back({a, r, lam, x, y});
    }
  };
  collect(true, K1, rep.llc1_failures);
  collect(false, K2, rep.llc2_failures);
  return rep;
}

// ---------------------------------------------------------------------------
// Quasicircle criterion

struct QuasicircleOptions {
  double max_lambda1 = 2.0;
  int max_doubling = 8;
  // A curve homeomorphic to the circle that is LLC1 is also LLC2, so a sample
  // claimed to be a closed curve must have a finite LLC2 estimate on the grid.
  double max_lambda2 = 16.0;
  std::optional<double> delta;
  double lambda_max = 16.0;
  std::size_t center_count = 128;
  std::size_t radii_count = 8;
  std::uint64_t seed = 0;
};

struct QuasicircleReport {
  int M_hat = 0;
  double lambda1 = kInf;
  double lambda2 = kInf;
  bool degenerate = false;
  bool usable = true;
  bool pass = false;
  std::optional<LLCWitness> witness;
  LLCReport llc;
};

inline QuasicircleReport quasicircle_check(const FiniteMetricSpace& m, const QuasicircleOptions& opts = {}) {
  QuasicircleReport rep;
  if (m.size() < 4) {
    rep.degenerate = true;
    return rep;
  }
  const double delta = opts.delta.value_or(default_delta(m));
  const auto radii = default_radii(m, delta, opts.radii_count);
  if (radii.empty()) {
    rep.degenerate = true;
    return rep;
  }
  const auto centers = sample_centers(m.size(), opts.center_count, opts.seed);
  const auto grid = default_lambda_grid(opts.lambda_max);
  rep.llc = llc_constants(m, delta, grid, centers, radii);
  rep.usable = rep.llc.usable;
  rep.lambda1 = rep.llc.lambda1;
  rep.lambda2 = rep.llc.lambda2;
  rep.M_hat = doubling_constant(m, radii, centers);
  const bool ok1 = rep.lambda1 <= opts.max_lambda1;
  const bool ok2 = rep.lambda2 <= opts.max_lambda2;
  rep.pass = rep.usable && ok1 && ok2 && rep.M_hat <= opts.max_doubling;
  if (!ok1 && !rep.llc.llc1_failures.empty())
    rep.witness = rep.llc.llc1_failures.front();
  else if (!ok2 && !rep.llc.llc2_failures.empty())
    rep.witness = rep.llc.llc2_failures.front();
  return rep;
}

}  // namespace metricforge
