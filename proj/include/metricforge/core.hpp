#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace metricforge {

// Exception hierarchy. Structural errors are malformed inputs (sizes, indices);
// parameter errors are out-of-range arguments; precondition errors are
// arguments that are well formed but violate an operation's contract.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StructuralError : Error {
  using Error::Error;
};
struct ParameterError : Error {
  using Error::Error;
};
struct PreconditionError : Error {
  using Error::Error;
};

using Index = std::size_t;
using Point = std::vector<double>;

inline constexpr double kAxiomTolerance = 1e-9;

// Raw fields of a finite metric space. Only structure is checked when this is
// turned into a FiniteMetricSpace; metric axioms are checked by validate_metric.
struct SpaceData {
  std::vector<std::string> labels;
  std::vector<double> dist;  // row-major n*n
  std::optional<std::vector<Point>> coords;
  std::optional<std::vector<double>> mass;
  // Dimension whose content each mass entry represents (2 for area weights).
  std::optional<double> mass_dimension;
  std::optional<std::vector<Index>> boundary;
};

class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;

  explicit FiniteMetricSpace(SpaceData data) : data_(std::move(data)) {
    const std::size_t n = data_.labels.size();
    if (data_.dist.size() != n * n) {
      throw StructuralError("distance matrix has " + std::to_string(data_.dist.size()) +
                            " entries, expected " + std::to_string(n) + "x" + std::to_string(n));
    }
    for (Index i = 0; i < n; ++i) {
      auto [it, inserted] = lookup_.emplace(data_.labels[i], i);
      if (!inserted) throw StructuralError("duplicate point label '" + data_.labels[i] + "'");
    }
    if (data_.coords) {
      if (data_.coords->size() != n) throw StructuralError("coords length does not match point count");
      if (n > 0) {
        const auto dim = data_.coords->front().size();
        for (const auto& c : *data_.coords)
          if (c.size() != dim) throw StructuralError("coords have inconsistent dimension");
      }
    }
    if (data_.mass) {
      if (data_.mass->size() != n) throw StructuralError("mass length does not match point count");
      for (double w : *data_.mass)
        if (!(w >= 0.0) || !std::isfinite(w)) throw StructuralError("mass entries must be finite and nonnegative");
    }
    if (data_.mass_dimension && !(*data_.mass_dimension > 0.0))
      throw StructuralError("mass_dimension must be positive");
    if (data_.boundary) {
      auto& b = *data_.boundary;
      std::sort(b.begin(), b.end());
      if (std::adjacent_find(b.begin(), b.end()) != b.end())
        throw StructuralError("boundary contains a repeated index");
      if (!b.empty() && b.back() >= n) throw StructuralError("boundary index out of range");
      is_boundary_.assign(n, false);
      for (Index i : b) is_boundary_[i] = true;
    }
  }

  std::size_t size() const noexcept { return data_.labels.size(); }
  bool empty() const noexcept { return data_.labels.empty(); }

  double d(Index i, Index j) const noexcept { return data_.dist[i * size() + j]; }
  std::span<const double> row(Index i) const noexcept { return {data_.dist.data() + i * size(), size()}; }
  std::span<const double> matrix() const noexcept { return data_.dist; }

  const std::vector<std::string>& labels() const noexcept { return data_.labels; }
  const std::string& label(Index i) const { return data_.labels.at(i); }
  std::optional<Index> index_of(std::string_view label) const {
    auto it = lookup_.find(std::string(label));
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }

  const std::optional<std::vector<Point>>& coords() const noexcept { return data_.coords; }
  const std::optional<std::vector<double>>& mass() const noexcept { return data_.mass; }
  const std::optional<double>& mass_dimension() const noexcept { return data_.mass_dimension; }
  const std::optional<std::vector<Index>>& boundary() const noexcept { return data_.boundary; }
  bool has_boundary() const noexcept { return data_.boundary.has_value() && !data_.boundary->empty(); }
  bool is_boundary(Index i) const noexcept { return !is_boundary_.empty() && is_boundary_[i]; }

  const SpaceData& data() const noexcept { return data_; }

  void check_index(Index i) const {
    if (i >= size()) throw StructuralError("point index " + std::to_string(i) + " out of range");
  }

 private:
  SpaceData data_;
  std::unordered_map<std::string, Index> lookup_;
  std::vector<bool> is_boundary_;
};

// Builds a space from coordinates with Euclidean distances.
inline FiniteMetricSpace euclidean_space(std::vector<std::string> labels, std::vector<Point> coords) {
  const std::size_t n = coords.size();
  if (labels.size() != n) throw StructuralError("label count does not match coordinate count");
  std::vector<double> dist(n * n, 0.0);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (coords[i].size() != coords[j].size()) throw StructuralError("coords have inconsistent dimension");
      double s = 0.0;
      for (std::size_t k = 0; k < coords[i].size(); ++k) {
        const double t = coords[i][k] - coords[j][k];
        s += t * t;
      }
      dist[i * n + j] = dist[j * n + i] = std::sqrt(s);
    }
  }
  SpaceData data;
  data.labels = std::move(labels);
  data.dist = std::move(dist);
  data.coords = std::move(coords);
  return FiniteMetricSpace(std::move(data));
}

inline std::vector<std::string> numbered_labels(std::string_view prefix, std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::string(prefix) + std::to_string(i));
  return out;
}

// ---------------------------------------------------------------------------
// Validation

enum class Axiom { Nonnegative, Identity, Positivity, Symmetry, Triangle, Boundary };

inline std::string_view to_string(Axiom a) {
  switch (a) {
    case Axiom::Nonnegative: return "nonnegative";
    case Axiom::Identity: return "identity";
    case Axiom::Positivity: return "positivity";
    case Axiom::Symmetry: return "symmetry";
    case Axiom::Triangle: return "triangle";
    case Axiom::Boundary: return "boundary";
  }
  return "unknown";
}

struct Violation {
  Axiom axiom;
  // Witness points; for Triangle, d(i,k) > d(i,j) + d(j,k). Unused slots are i.
  Index i = 0, j = 0, k = 0;
  double excess = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;  // first max_witnesses found
  std::size_t total = 0;              // total violations counted
  bool ok() const noexcept { return total == 0; }
};

inline ValidationReport validate_metric(const FiniteMetricSpace& m, double tol = kAxiomTolerance,
                                        std::size_t max_witnesses = 64) {
  ValidationReport rep;
  auto add = [&](Violation v) {
    ++rep.total;
    if (rep.violations.size() < max_witnesses) rep.violations.push_back(v);
  };
  const std::size_t n = m.size();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double v = m.d(i, j);
      if (!std::isfinite(v) || v < 0.0) add({Axiom::Nonnegative, i, j, i, v});
    }
  }
  for (Index i = 0; i < n; ++i)
    if (std::abs(m.d(i, i)) > tol) add({Axiom::Identity, i, i, i, m.d(i, i)});
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (std::abs(m.d(i, j) - m.d(j, i)) > tol) add({Axiom::Symmetry, i, j, i, m.d(i, j) - m.d(j, i)});
      if (!(m.d(i, j) > 0.0)) add({Axiom::Positivity, i, j, i, m.d(i, j)});
    }
  }
  // d(i,k) <= d(i,j) + d(j,k); by symmetry only i < k is needed.
  for (Index i = 0; i < n; ++i) {
    const auto ri = m.row(i);
    for (Index j = 0; j < n; ++j) {
      const double dij = ri[j];
      const auto rj = m.row(j);
      for (Index k = i + 1; k < n; ++k) {
        const double excess = ri[k] - (dij + rj[k]);
        if (excess > tol) add({Axiom::Triangle, i, j, k, excess});
      }
    }
  }
  if (m.boundary()) {
    const auto& b = *m.boundary();
    if (b.empty() || b.size() >= n) add({Axiom::Boundary, 0, 0, 0, static_cast<double>(b.size())});
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Balls and scales

// Open ball {x : d(center,x) < r}, or closed {x : d(center,x) <= r}.
inline std::vector<Index> ball(const FiniteMetricSpace& m, Index center, double r, bool closed) {
  m.check_index(center);
  if (!(r >= 0.0)) throw ParameterError("ball radius must be nonnegative");
  std::vector<Index> out;
  const auto row = m.row(center);
  for (Index x = 0; x < m.size(); ++x) {
    if (closed ? row[x] <= r : row[x] < r) out.push_back(x);
  }
  return out;
}

inline double diameter(const FiniteMetricSpace& m) {
  double best = 0.0;
  for (double v : m.matrix()) best = std::max(best, v);
  return best;
}

inline double diameter(const FiniteMetricSpace& m, std::span<const Index> subset) {
  double best = 0.0;
  for (Index a : subset)
    for (Index b : subset) best = std::max(best, m.d(a, b));
  return best;
}

// max over all points of the distance to the nearest subset point.
inline double covering_radius(const FiniteMetricSpace& m, std::span<const Index> subset) {
  if (subset.empty()) throw ParameterError("covering_radius needs a nonempty subset");
  for (Index s : subset) m.check_index(s);
  double worst = 0.0;
  for (Index x = 0; x < m.size(); ++x) {
    double nearest = std::numeric_limits<double>::infinity();
    for (Index s : subset) nearest = std::min(nearest, m.d(x, s));
    worst = std::max(worst, nearest);
  }
  return worst;
}

// Sample spacing: the largest nearest-neighbour distance. This is the covering
// radius of the sample at the scale it resolves, and sets default proximity scales.
inline double sample_spacing(const FiniteMetricSpace& m) {
  const std::size_t n = m.size();
  if (n < 2) return 0.0;
  double worst = 0.0;
  for (Index x = 0; x < n; ++x) {
    double nearest = std::numeric_limits<double>::infinity();
    const auto row = m.row(x);
    for (Index y = 0; y < n; ++y)
      if (y != x) nearest = std::min(nearest, row[y]);
    worst = std::max(worst, nearest);
  }
  return worst;
}

}  // namespace metricforge
