#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace metricforge;

namespace {

FiniteMetricSpace marked_line(std::vector<Index> boundary) {
  auto data = euclidean_space(numbered_labels("x", 3), {{0.0}, {1.0}, {2.0}}).data();
  data.boundary = std::move(boundary);
  return FiniteMetricSpace(std::move(data));
}

}  // namespace

TEST(Double, MarkedLineExample) {
  const auto ds = double_space(marked_line({0}));
  ASSERT_EQ(ds.doubled.size(), 5u);
  const auto& d = ds.doubled;
  auto at = [&](const char* l) { return *d.index_of(l); };
  EXPECT_EQ(d.d(at("x1#1"), at("x1#2")), 2.0);
  EXPECT_EQ(d.d(at("x2#1"), at("x1#2")), 3.0);
  EXPECT_EQ(d.d(at("x1#1"), at("x2#1")), 1.0);
  EXPECT_EQ(d.d(at("x0"), at("x2#2")), 2.0);
  EXPECT_TRUE(validate_metric(d).ok());
  EXPECT_EQ(ds.index_of(1, 2), at("x1#2"));
  EXPECT_EQ(ds.index_of(0, 2), at("x0"));
}

TEST(Double, BoundaryPointsSeeBaseDistances) {
  const auto ds = double_space(marked_line({0, 2}));
  for (Index x = 0; x < 3; ++x)
    for (int side : {1, 2}) {
      EXPECT_EQ(ds.doubled.d(ds.index_of(0, 1), ds.index_of(x, side)), ds.base.d(0, x));
      EXPECT_EQ(ds.doubled.d(ds.index_of(2, 1), ds.index_of(x, side)), ds.base.d(2, x));
    }
}

TEST(Double, RejectsMissingEmptyOrFullBoundary) {
  const auto plain = euclidean_space(numbered_labels("x", 3), {{0.0}, {1.0}, {2.0}});
  EXPECT_THROW(double_space(plain), PreconditionError);
  EXPECT_THROW(double_space(marked_line({})), PreconditionError);
  EXPECT_THROW(double_space(marked_line({0, 1, 2})), PreconditionError);
}

TEST(Double, DiskGridCrossSideAgainstBruteForce) {
  const auto m = generate(DiskGrid{1.0, 0.125, true});
  const auto ds = double_space(m);
  const auto& bnd = *m.boundary();
  const auto& c = *m.coords();
  for (Index x = 0; x < m.size(); ++x) {
    if (m.is_boundary(x)) continue;
    for (Index y = 0; y < m.size(); ++y) {
      if (m.is_boundary(y)) continue;
      double best = 1e300;
      for (Index z : bnd) best = std::min(best, oracle::euclid(c[x], c[z]) + oracle::euclid(c[z], c[y]));
      EXPECT_NEAR(ds.doubled.d(ds.index_of(x, 1), ds.index_of(y, 2)), best, 1e-14);
      EXPECT_EQ(ds.doubled.d(ds.index_of(x, 2), ds.index_of(y, 2)), m.d(x, y));
    }
  }
  EXPECT_EQ(ds.doubled.size(), 2 * m.size() - bnd.size());
}

TEST(Project, ForgetsSideAndIsOneLipschitz) {
  const auto m = generate(DiskSample{150, 1.0, 8, true});
  const auto ds = double_space(m);
  EXPECT_EQ(project(ds, ds.index_of(5, 1)), 5u);
  EXPECT_EQ(project(ds, ds.index_of(5, 2)), 5u);
  oracle::Gen gen(9);
  for (int k = 0; k < 1000; ++k) {
    const Index q = gen.below(ds.doubled.size()), r = gen.below(ds.doubled.size());
    EXPECT_LE(m.d(project(ds, q), project(ds, r)), ds.doubled.d(q, r));
  }
  EXPECT_THROW(project(ds, ds.doubled.size()), StructuralError);
}

TEST(DiamRatio, Examples) {
  auto data = euclidean_space({"a", "b", "c"}, {{0.0}, {1.0}, {0.5}}).data();
  data.boundary = std::vector<Index>{0, 1};
  EXPECT_EQ(diam_ratio(double_space(FiniteMetricSpace(data))), 1.0);
  EXPECT_THROW(diam_ratio(double_space(marked_line({0}))), PreconditionError);
  auto alpha = [](double eps) { return diam_ratio(double_space(generate(SphereCapComplement{eps, 500, 1}))); };
  EXPECT_GT(alpha(0.1), alpha(0.4));
}

TEST(Double, PropertiesOnRandomMarkedSpaces) {
  oracle::Gen gen(77);
  for (int t = 0; t < 150; ++t) {
    const auto m = gen.with_boundary(gen.space(gen.between(2, 60)));
    const auto ds = double_space(m);
    EXPECT_TRUE(validate_metric(ds.doubled).ok());
    EXPECT_LE(diameter(ds.doubled), 2.0 * diameter(m));
    EXPECT_EQ(ds.doubled.size(), 2 * m.size() - m.boundary()->size());
    for (Index x = 0; x < m.size(); ++x)
      for (Index y = 0; y < m.size(); ++y) {
        EXPECT_EQ(ds.doubled.d(ds.index_of(x, 1), ds.index_of(y, 1)), m.d(x, y));
        EXPECT_EQ(ds.doubled.d(ds.index_of(x, 2), ds.index_of(y, 2)), m.d(x, y));
        EXPECT_GE(ds.doubled.d(ds.index_of(x, 1), ds.index_of(y, 2)), m.d(x, y) - 1e-12 * diameter(m));
      }
  }
}
