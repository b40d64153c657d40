#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "metricforge/core.hpp"
#include "metricforge/rng.hpp"

namespace metricforge {

// [x, y, z, w] = d(x,z) d(y,w) / (d(x,w) d(y,z)).
inline double cross_ratio(const FiniteMetricSpace& m, Index x, Index y, Index z, Index w) {
  for (Index i : {x, y, z, w}) m.check_index(i);
  if (x == y || x == z || x == w || y == z || y == w || z == w)
    throw ParameterError("cross-ratio needs four distinct points");
  const double den = m.d(x, w) * m.d(y, z);
  if (!(den > 0.0)) throw ParameterError("cross-ratio denominator vanishes");
  return m.d(x, z) * m.d(y, w) / den;
}

// Distortion gauge c * t^a.
struct PowerGauge {
  double coef = 1.0;
  double exponent = 1.0;

  double operator()(double t) const { return coef * std::pow(t, exponent); }

  std::string to_string() const {
    auto num = [](double v) {
      char buf[32];
      auto res = std::to_chars(buf, buf + sizeof buf, v);
      return std::string(buf, res.ptr);
    };
    std::string s = coef == 1.0 ? "" : num(coef);
    s += "t";
    if (exponent != 1.0) s += "^" + num(exponent);
    return s;
  }

  // Accepts "t", "16t", "16*t", "2t^0.5", "3*t^2".
  static PowerGauge parse(std::string_view text) {
    std::string s;
    for (char c : text)
      if (c != ' ') s.push_back(c);
    const auto tpos = s.find('t');
    if (tpos == std::string::npos) throw ParameterError("gauge must have the form c*t^a");
    PowerGauge g;
    std::string head = s.substr(0, tpos);
    if (!head.empty() && head.back() == '*') head.pop_back();
    if (!head.empty()) g.coef = parse_number(head);
    std::string tail = s.substr(tpos + 1);
    if (!tail.empty()) {
      if (tail.front() != '^') throw ParameterError("gauge must have the form c*t^a");
      g.exponent = parse_number(tail.substr(1));
    }
    if (!(g.coef > 0.0) || !(g.exponent > 0.0)) throw ParameterError("gauge coefficient and exponent must be positive");
    return g;
  }

 private:
  static double parse_number(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (...) {
      throw ParameterError("bad number '" + s + "' in gauge");
    }
    if (used != s.size()) throw ParameterError("bad number '" + s + "' in gauge");
    return v;
  }
};

enum class DistortionKind { QS, QM };

inline std::string_view to_string(DistortionKind k) { return k == DistortionKind::QS ? "QS" : "QM"; }

struct DistortionBin {
  double lower = 0.0;  // inclusive
  double upper = 0.0;  // exclusive
  std::size_t count = 0;
  double t_min = 0.0;  // extreme source ratios seen in the bin
  double t_max = 0.0;
  double envelope = 0.0;      // max destination ratio
  double envelope_min = 0.0;  // min destination ratio
};

struct BoundCheck {
  PowerGauge claim;
  bool two_sided = false;  // also require t <= claim(out)
  bool pass = true;
  std::size_t violations = 0;
  double worst_ratio = 0.0;  // max of out / claim(t) (and t / claim(out) when two-sided)
  std::vector<Index> worst_tuple;
  double worst_t = 0.0;
  double worst_out = 0.0;
};

struct DistortionProfile {
  DistortionKind kind = DistortionKind::QS;
  // 48 log-spaced bins over [1e-4, 1e4); underflow holds t < 1e-4 and overflow t >= 1e4.
  std::vector<DistortionBin> bins;
  DistortionBin underflow;
  DistortionBin overflow;
  bool exhaustive = true;
  std::uint64_t seed = 0;
  std::size_t evaluated = 0;
  std::size_t degenerate = 0;  // sampled tuples with repeated points or zero denominators
  std::optional<BoundCheck> bound;
};

struct SamplingPlan {
  // Exhaustive when the source has at most this many points.
  std::size_t exhaustive_limit = 60;
  std::size_t samples = 1000000;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kDistortionBins = 48;
inline constexpr double kBinLow = 1e-4;
inline constexpr double kBinHigh = 1e4;

// Source-to-destination index map; must be injective and in range.
using Correspondence = std::vector<Index>;

inline void check_correspondence(const FiniteMetricSpace& src, const FiniteMetricSpace& dst, const Correspondence& f) {
  if (f.size() != src.size()) throw StructuralError("correspondence must be defined on every source point");
  std::vector<char> hit(dst.size(), 0);
  for (Index v : f) {
    if (v >= dst.size()) throw StructuralError("correspondence maps outside the destination");
    if (hit[v]) throw StructuralError("correspondence is not injective");
    hit[v] = 1;
  }
}

// Matches points by label; destination points without a source label (such as
// an adjoined infinity) are ignored.
inline Correspondence correspondence_by_label(const FiniteMetricSpace& src, const FiniteMetricSpace& dst) {
  Correspondence f(src.size());
  for (Index i = 0; i < src.size(); ++i) {
    auto j = dst.index_of(src.label(i));
    if (!j) throw StructuralError("destination has no point labelled '" + src.label(i) + "'");
    f[i] = *j;
  }
  return f;
}

namespace detail {

class ProfileBuilder {
 public:
  ProfileBuilder(DistortionKind kind, std::optional<PowerGauge> claim, bool two_sided) {
    prof_.kind = kind;
    const double step = std::log10(kBinHigh / kBinLow) / static_cast<double>(kDistortionBins);
    for (std::size_t k = 0; k < kDistortionBins; ++k) {
      DistortionBin b;
      b.lower = kBinLow * std::pow(10.0, step * static_cast<double>(k));
      b.upper = k + 1 == kDistortionBins ? kBinHigh : kBinLow * std::pow(10.0, step * static_cast<double>(k + 1));
      prof_.bins.push_back(b);
    }
    prof_.underflow.lower = 0.0;
    prof_.underflow.upper = kBinLow;
    prof_.overflow.lower = kBinHigh;
    prof_.overflow.upper = kInfinity;
    if (claim) {
      BoundCheck bc;
      bc.claim = *claim;
      bc.two_sided = two_sided;
      prof_.bound = bc;
    }
  }

  template <std::size_t N>
  void add(double t, double out, const std::array<Index, N>& tuple) {
    ++prof_.evaluated;
    DistortionBin& b = bin_for(t);
    if (b.count == 0) {
      b.t_min = b.t_max = t;
      b.envelope = b.envelope_min = out;
    } else {
      b.t_min = std::min(b.t_min, t);
      b.t_max = std::max(b.t_max, t);
      b.envelope = std::max(b.envelope, out);
      b.envelope_min = std::min(b.envelope_min, out);
    }
    ++b.count;
    if (prof_.bound) {
      auto& bc = *prof_.bound;
      double ratio = out / bc.claim(t);
      if (bc.two_sided) ratio = std::max(ratio, t / bc.claim(out));
      if (ratio > 1.0) {
        ++bc.violations;
        bc.pass = false;
      }
      if (bc.worst_tuple.empty() || ratio > bc.worst_ratio) {
        bc.worst_ratio = ratio;
        bc.worst_tuple.assign(tuple.begin(), tuple.end());
        bc.worst_t = t;
        bc.worst_out = out;
      }
    }
  }

  void skip() { ++prof_.degenerate; }

  DistortionProfile finish(bool exhaustive, std::uint64_t seed) {
    prof_.exhaustive = exhaustive;
    prof_.seed = seed;
    return std::move(prof_);
  }

 private:
  static constexpr double kInfinity = std::numeric_limits<double>::infinity();

  DistortionBin& bin_for(double t) {
    if (t < kBinLow) return prof_.underflow;
    if (t >= kBinHigh) return prof_.overflow;
    const double step = std::log10(kBinHigh / kBinLow) / static_cast<double>(kDistortionBins);
    auto k = static_cast<std::size_t>(std::floor(std::log10(t / kBinLow) / step));
    k = std::min(k, kDistortionBins - 1);
    // Correct for rounding in the logarithm at bin edges.
    while (k > 0 && t < prof_.bins[k].lower) --k;
    while (k + 1 < kDistortionBins && t >= prof_.bins[k + 1].lower) ++k;
    return prof_.bins[k];
  }

  DistortionProfile prof_;
};

}  // namespace detail

// Triples (a, b, c): t = d(a,b)/d(a,c), image ratio d(fa,fb)/d(fa,fc).
inline DistortionProfile qs_profile(const FiniteMetricSpace& src, const FiniteMetricSpace& dst,
                                    const Correspondence& f, const SamplingPlan& plan = {},
                                    std::optional<PowerGauge> claim = std::nullopt) {
  check_correspondence(src, dst, f);
  detail::ProfileBuilder pb(DistortionKind::QS, claim, false);
  const std::size_t n = src.size();
  auto eval = [&](Index a, Index b, Index c) {
    if (a == b || a == c || b == c) {
      pb.skip();
      return;
    }
    const double sac = src.d(a, c), dac = dst.d(f[a], f[c]);
    if (!(sac > 0.0) || !(dac > 0.0)) {
      pb.skip();
      return;
    }
    pb.add(src.d(a, b) / sac, dst.d(f[a], f[b]) / dac, std::array<Index, 3>{a, b, c});
  };
  const bool exhaustive = n <= plan.exhaustive_limit;
  if (exhaustive) {
    for (Index a = 0; a < n; ++a)
      for (Index b = 0; b < n; ++b)
        for (Index c = 0; c < n; ++c)
          if (a != b && a != c && b != c) eval(a, b, c);
  } else {
    Rng rng(plan.seed);
    for (std::size_t s = 0; s < plan.samples; ++s) {
      const Index a = rng.below(n), b = rng.below(n), c = rng.below(n);
      eval(a, b, c);
    }
  }
  return pb.finish(exhaustive, plan.seed);
}

// Quadruples: t = [x1,x2,x3,x4] in the source, image cross-ratio in the destination.
inline DistortionProfile qm_profile(const FiniteMetricSpace& src, const FiniteMetricSpace& dst,
                                    const Correspondence& f, const SamplingPlan& plan = {},
                                    std::optional<PowerGauge> claim = std::nullopt, bool two_sided = false) {
  check_correspondence(src, dst, f);
  detail::ProfileBuilder pb(DistortionKind::QM, claim, two_sided);
  const std::size_t n = src.size();
  auto cr = [](const FiniteMetricSpace& m, Index x, Index y, Index z, Index w) {
    const double den = m.d(x, w) * m.d(y, z);
    return den > 0.0 ? m.d(x, z) * m.d(y, w) / den : -1.0;
  };
  auto eval = [&](Index x, Index y, Index z, Index w) {
    if (x == y || x == z || x == w || y == z || y == w || z == w) {
      pb.skip();
      return;
    }
    const double t = cr(src, x, y, z, w);
    const double out = cr(dst, f[x], f[y], f[z], f[w]);
    if (t < 0.0 || out < 0.0) {
      pb.skip();
      return;
    }
    pb.add(t, out, std::array<Index, 4>{x, y, z, w});
  };
  const bool exhaustive = n <= plan.exhaustive_limit;
  if (exhaustive) {
    for (Index x = 0; x < n; ++x)
      for (Index y = 0; y < n; ++y) {
        if (y == x) continue;
        for (Index z = 0; z < n; ++z) {
          if (z == x || z == y) continue;
          for (Index w = 0; w < n; ++w)
            if (w != x && w != y && w != z) eval(x, y, z, w);
        }
      }
  } else {
    Rng rng(plan.seed);
    for (std::size_t s = 0; s < plan.samples; ++s) {
      const Index x = rng.below(n), y = rng.below(n), z = rng.below(n), w = rng.below(n);
      eval(x, y, z, w);
    }
  }
  return pb.finish(exhaustive, plan.seed);
}

// ---------------------------------------------------------------------------
// Plane and sphere

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;

// Inverse stereographic projection from the north pole (0, 0, 1): the plane is
// the equatorial plane and the image is the unit sphere minus the pole.
inline Vec3 stereographic(const Vec2& x) {
  const double s = x[0] * x[0] + x[1] * x[1];
  const double k = 1.0 / (1.0 + s);
  return {2.0 * x[0] * k, 2.0 * x[1] * k, (s - 1.0) * k};
}

inline double chordal(const Vec2& x, const Vec2& y) {
  const auto a = stereographic(x), b = stereographic(y);
  return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}

// Closed form 2|x-y| / sqrt((1+|x|^2)(1+|y|^2)).
inline double chordal_closed_form(const Vec2& x, const Vec2& y) {
  const double nx = x[0] * x[0] + x[1] * x[1], ny = y[0] * y[0] + y[1] * y[1];
  return 2.0 * std::hypot(x[0] - y[0], x[1] - y[1]) / std::sqrt((1.0 + nx) * (1.0 + ny));
}

// |x-y| / ((1+|x|)(1+|y|)): rho about the origin in the plane.
inline double plane_rho(const Vec2& x, const Vec2& y) {
  return std::hypot(x[0] - y[0], x[1] - y[1]) / ((1.0 + std::hypot(x[0], x[1])) * (1.0 + std::hypot(y[0], y[1])));
}

// max(chordal / rho, rho / chordal) for a pair of distinct points.
inline double plane_to_sphere_ratio(const Vec2& x, const Vec2& y) {
  const double c = chordal(x, y), r = plane_rho(x, y);
  return std::max(c / r, r / c);
}

struct PlaneSphereReport {
  double worst_ratio = 0.0;
  Index i = 0, j = 0;
  bool within(double L = 4.0) const noexcept { return worst_ratio <= L; }
};

// Worst comparison ratio over all pairs of distinct points in the sample.
inline PlaneSphereReport check_plane_to_sphere_L(std::span<const Vec2> points) {
  PlaneSphereReport rep;
  std::size_t pairs = 0;
  for (Index i = 0; i < points.size(); ++i) {
    for (Index j = i + 1; j < points.size(); ++j) {
      if (points[i] == points[j]) continue;
      ++pairs;
      const double r = plane_to_sphere_ratio(points[i], points[j]);
      if (r > rep.worst_ratio) rep = {r, i, j};
    }
  }
  if (pairs == 0) throw ParameterError("need at least two distinct points");
  return rep;
}

}  // namespace metricforge
