#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "metricforge/core.hpp"
#include "metricforge/rng.hpp"

namespace metricforge {

// side x side lattice with the given spacing, anchored at the origin.
struct EuclideanGrid {
  long side = 0;
  double spacing = 0.0;
};

// n uniform points in a disk of the given radius. With mark_boundary, a ring of
// points is placed just inside the rim and every point within the rim band
// (2% of the radius) is marked.
struct DiskSample {
  long n = 0;
  double radius = 1.0;
  std::uint64_t seed = 0;
  bool mark_boundary = false;
};

// Square lattice points inside a closed disk; the outermost band of one
// spacing is marked as boundary when requested.
struct DiskGrid {
  double radius = 1.0;
  double spacing = 0.0;
  bool mark_boundary = true;
};

// Unit sphere minus the closed chordal cap of radius eps about the north pole,
// with chordal distances. Points within chordal kSphereRimBand of the rim are
// marked as boundary.
struct SphereCapComplement {
  double eps = 0.0;
  long n = 0;
  std::uint64_t seed = 0;
};

// Closed upper half-plane sampled at all scales: polar radii log-uniform in
// [1e-2, 1e3], angles uniform in [0, pi]. Point 0 is the origin.
struct HalfplaneSample {
  long n = 0;
  std::uint64_t seed = 0;
};

// Shortest-path metric on a complete graph with log-uniform weights in [1e-2, 1e2].
struct RandomMetric {
  long n = 0;
  std::uint64_t seed = 0;
};

// n equally spaced points on the unit circle with the chordal metric. A
// positive gap_degrees removes an arc of that size; the endpoints are kept.
struct CircleSample {
  long n = 0;
  double gap_degrees = 0.0;
};

using GeneratorSpec =
    std::variant<EuclideanGrid, DiskSample, DiskGrid, SphereCapComplement, HalfplaneSample, RandomMetric, CircleSample>;

inline constexpr double kSphereRimBand = 0.02;

namespace detail {

inline void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError(std::string(what) + " must be positive");
}

inline FiniteMetricSpace with_extras(FiniteMetricSpace base, std::optional<std::vector<double>> mass,
                                     std::optional<double> mass_dimension,
                                     std::optional<std::vector<Index>> boundary) {
  SpaceData data = base.data();
  data.mass = std::move(mass);
  data.mass_dimension = mass_dimension;
  data.boundary = std::move(boundary);
  return FiniteMetricSpace(std::move(data));
}

using Vec3 = std::array<double, 3>;

inline Vec3 rotate(const std::array<double, 4>& q, const Vec3& v) {
  // Unit quaternion (w, x, y, z) applied to v.
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  const double r00 = 1 - 2 * (y * y + z * z), r01 = 2 * (x * y - w * z), r02 = 2 * (x * z + w * y);
  const double r10 = 2 * (x * y + w * z), r11 = 1 - 2 * (x * x + z * z), r12 = 2 * (y * z - w * x);
  const double r20 = 2 * (x * z - w * y), r21 = 2 * (y * z + w * x), r22 = 1 - 2 * (x * x + y * y);
  return {r00 * v[0] + r01 * v[1] + r02 * v[2], r10 * v[0] + r11 * v[1] + r12 * v[2],
          r20 * v[0] + r21 * v[1] + r22 * v[2]};
}

// Uniform random rotation (Shoemake).
inline std::array<double, 4> random_rotation(Rng& rng) {
  const double u1 = rng.uniform(), u2 = rng.uniform(), u3 = rng.uniform();
  const double a = std::sqrt(1 - u1), b = std::sqrt(u1);
  return {b * std::cos(2 * std::numbers::pi * u3), a * std::sin(2 * std::numbers::pi * u2),
          a * std::cos(2 * std::numbers::pi * u2), b * std::sin(2 * std::numbers::pi * u3)};
}

// Spherical Fibonacci lattice with `count` points.
inline std::vector<Vec3> fibonacci_sphere(long count) {
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(count));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (long i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / static_cast<double>(count);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    pts.push_back({r * std::cos(phi), r * std::sin(phi), z});
  }
  return pts;
}

}  // namespace detail

// Chordal distance from a unit vector with polar angle `polar` to the circle of
// polar angle `rim_polar`: the nearest rim point shares its azimuth.
inline double chordal_to_polar_circle(double polar, double rim_polar) {
  return 2.0 * std::sin(std::abs(polar - rim_polar) / 2.0);
}

// Polar angle of the rim of the chordal cap of radius eps about the north pole.
inline double cap_rim_polar(double eps) { return 2.0 * std::asin(eps / 2.0); }

inline FiniteMetricSpace generate(const EuclideanGrid& g) {
  if (g.side <= 0) throw ParameterError("grid side must be positive");
  detail::require_positive(g.spacing, "grid spacing");
  const auto side = static_cast<std::size_t>(g.side);
  std::vector<std::string> labels;
  std::vector<Point> coords;
  labels.reserve(side * side);
  coords.reserve(side * side);
  for (std::size_t i = 0; i < side; ++i) {
    for (std::size_t j = 0; j < side; ++j) {
      labels.push_back("g" + std::to_string(i) + "_" + std::to_string(j));
      coords.push_back({static_cast<double>(i) * g.spacing, static_cast<double>(j) * g.spacing});
    }
  }
  auto base = euclidean_space(std::move(labels), std::move(coords));
  std::vector<double> mass(base.size(), g.spacing * g.spacing);
  return detail::with_extras(std::move(base), std::move(mass), 2.0, std::nullopt);
}

inline FiniteMetricSpace generate(const DiskSample& s) {
  if (s.n <= 0) throw ParameterError("sample size must be positive");
  detail::require_positive(s.radius, "disk radius");
  Rng rng(s.seed);
  const double area = std::numbers::pi * s.radius * s.radius;
  const double spacing = std::sqrt(area / static_cast<double>(s.n));
  const double band = 0.02 * s.radius;
  std::vector<Point> coords;
  coords.reserve(static_cast<std::size_t>(s.n));
  long ring = 0;
  if (s.mark_boundary) {
    ring = std::max(8L, static_cast<long>(std::ceil(2 * std::numbers::pi * s.radius / spacing)));
    ring = std::min(ring, s.n / 2);
    const double rr = s.radius - band / 2;
    const double phase = 2 * std::numbers::pi * rng.uniform();
    for (long k = 0; k < ring; ++k) {
      const double a = phase + 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(ring);
      coords.push_back({rr * std::cos(a), rr * std::sin(a)});
    }
  }
  for (long k = ring; k < s.n; ++k) {
    const double r = s.radius * std::sqrt(rng.uniform());
    const double a = 2 * std::numbers::pi * rng.uniform();
    coords.push_back({r * std::cos(a), r * std::sin(a)});
  }
  std::optional<std::vector<Index>> boundary;
  if (s.mark_boundary) {
    boundary.emplace();
    for (Index i = 0; i < coords.size(); ++i)
      if (s.radius - std::hypot(coords[i][0], coords[i][1]) <= band) boundary->push_back(i);
  }
  const std::size_t n_pts = coords.size();
  auto base = euclidean_space(numbered_labels("d", n_pts), std::move(coords));
  std::vector<double> mass(base.size(), area / static_cast<double>(s.n));
  return detail::with_extras(std::move(base), std::move(mass), 2.0, std::move(boundary));
}

inline FiniteMetricSpace generate(const DiskGrid& s) {
  detail::require_positive(s.radius, "disk radius");
  detail::require_positive(s.spacing, "grid spacing");
  const long k = static_cast<long>(std::floor(s.radius / s.spacing));
  std::vector<std::string> labels;
  std::vector<Point> coords;
  std::vector<Index> rim;
  for (long i = -k; i <= k; ++i) {
    for (long j = -k; j <= k; ++j) {
      const double x = static_cast<double>(i) * s.spacing, y = static_cast<double>(j) * s.spacing;
      const double r = std::hypot(x, y);
      if (r > s.radius) continue;
      if (r > s.radius - s.spacing) rim.push_back(coords.size());
      labels.push_back("q" + std::to_string(i) + "_" + std::to_string(j));
      coords.push_back({x, y});
    }
  }
  auto base = euclidean_space(std::move(labels), std::move(coords));
  std::vector<double> mass(base.size(), s.spacing * s.spacing);
  std::optional<std::vector<Index>> boundary;
  if (s.mark_boundary) boundary = std::move(rim);
  return detail::with_extras(std::move(base), std::move(mass), 2.0, std::move(boundary));
}

// Points come from a randomly rotated spherical Fibonacci lattice, which keeps
// the sample spacing uniform; a ring at chordal distance kSphereRimBand/2
// outside the rim resolves the boundary at every eps.
inline FiniteMetricSpace generate(const SphereCapComplement& s) {
  if (s.n <= 0) throw ParameterError("sample size must be positive");
  if (!(s.eps > 0.0) || !(s.eps < 2.0)) throw ParameterError("cap radius eps must lie in (0, 2)");
  Rng rng(s.seed);
  const double rim_polar = cap_rim_polar(s.eps);
  const double area = 2 * std::numbers::pi * (1 + std::cos(rim_polar));
  const double spacing = std::sqrt(area / static_cast<double>(s.n));
  const double ring_polar = rim_polar + 2 * std::asin(kSphereRimBand / 4);
  long ring = std::max(8L, static_cast<long>(std::ceil(2 * std::numbers::pi * std::sin(ring_polar) / spacing)));
  ring = std::min(ring, s.n / 4);
  const long interior = s.n - ring;

  const auto rot = detail::random_rotation(rng);
  const double ring_phase = 2 * std::numbers::pi * rng.uniform();
  auto outside_cap = [&](const detail::Vec3& v) {
    return std::hypot(v[0], v[1], v[2] - 1.0) > s.eps;
  };
  std::vector<detail::Vec3> lattice;
  long total = std::max(interior, static_cast<long>(std::ceil(interior * 4 * std::numbers::pi / area)));
  for (;; ++total) {
    lattice.clear();
    for (const auto& v : detail::fibonacci_sphere(total)) {
      const auto w = detail::rotate(rot, v);
      if (outside_cap(w)) lattice.push_back(w);
    }
    if (static_cast<long>(lattice.size()) >= interior) break;
  }
  // Drop any surplus nearest the cap.
  std::stable_sort(lattice.begin(), lattice.end(), [](const auto& a, const auto& b) { return a[2] < b[2]; });
  lattice.resize(static_cast<std::size_t>(interior));

  std::vector<Point> coords;
  coords.reserve(static_cast<std::size_t>(s.n));
  for (long k = 0; k < ring; ++k) {
    const double a = ring_phase + 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(ring);
    coords.push_back({std::sin(ring_polar) * std::cos(a), std::sin(ring_polar) * std::sin(a), std::cos(ring_polar)});
  }
  for (const auto& v : lattice) coords.push_back({v[0], v[1], v[2]});

  std::vector<Index> boundary;
  for (Index i = 0; i < coords.size(); ++i) {
    const double polar = std::acos(std::clamp(coords[i][2], -1.0, 1.0));
    if (chordal_to_polar_circle(polar, rim_polar) <= kSphereRimBand) boundary.push_back(i);
  }
  const std::size_t n_pts = coords.size();
  auto base = euclidean_space(numbered_labels("s", n_pts), std::move(coords));
  std::vector<double> mass(base.size(), area / static_cast<double>(s.n));
  return detail::with_extras(std::move(base), std::move(mass), 2.0, std::move(boundary));
}

inline FiniteMetricSpace generate(const HalfplaneSample& s) {
  if (s.n <= 0) throw ParameterError("sample size must be positive");
  Rng rng(s.seed);
  std::vector<Point> coords;
  coords.reserve(static_cast<std::size_t>(s.n));
  coords.push_back({0.0, 0.0});
  const double lo = std::log(1e-2), hi = std::log(1e3);
  for (long k = 1; k < s.n; ++k) {
    const double r = std::exp(rng.uniform(lo, hi));
    const double a = std::numbers::pi * rng.uniform();
    coords.push_back({r * std::cos(a), r * std::sin(a)});
  }
  const std::size_t n_pts = coords.size();
  return euclidean_space(numbered_labels("h", n_pts), std::move(coords));
}

inline FiniteMetricSpace generate(const RandomMetric& s) {
  if (s.n <= 0) throw ParameterError("sample size must be positive");
  Rng rng(s.seed);
  const auto n = static_cast<std::size_t>(s.n);
  std::vector<double> dist(n * n, 0.0);
  const double lo = std::log(1e-2), hi = std::log(1e2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) dist[i * n + j] = dist[j * n + i] = std::exp(rng.uniform(lo, hi));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = std::min(dist[i * n + j], dist[i * n + k] + dist[k * n + j]);
  // Path sums are order dependent in floating point; enforce exact symmetry.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) dist[j * n + i] = dist[i * n + j];
  SpaceData data;
  data.labels = numbered_labels("r", n);
  data.dist = std::move(dist);
  return FiniteMetricSpace(std::move(data));
}

inline FiniteMetricSpace generate(const CircleSample& s) {
  if (s.n <= 1) throw ParameterError("circle sample needs at least two points");
  if (!(s.gap_degrees >= 0.0) || !(s.gap_degrees < 360.0)) throw ParameterError("gap must lie in [0, 360)");
  const double gap = s.gap_degrees * std::numbers::pi / 180.0;
  const double span = 2 * std::numbers::pi - gap;
  const auto n = static_cast<std::size_t>(s.n);
  const double step = gap > 0.0 ? span / static_cast<double>(n - 1) : span / static_cast<double>(n);
  std::vector<Point> coords;
  coords.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = gap + step * static_cast<double>(k);
    coords.push_back({std::cos(a), std::sin(a)});
  }
  auto base = euclidean_space(numbered_labels("c", n), std::move(coords));
  std::vector<double> mass(n, step);
  return detail::with_extras(std::move(base), std::move(mass), 1.0, std::nullopt);
}

inline FiniteMetricSpace generate(const GeneratorSpec& spec) {
  return std::visit([](const auto& s) { return generate(s); }, spec);
}

}  // namespace metricforge
