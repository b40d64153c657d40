#include <gtest/gtest.h>

#include <filesystem>

#include "oracles.hpp"

using namespace metricforge;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "metricforge_test_io";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void expect_same(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(a.labels(), b.labels());
  for (std::size_t k = 0; k < a.matrix().size(); ++k) EXPECT_EQ(a.matrix()[k], b.matrix()[k]);
}

}  // namespace

TEST(Json, RoundTripIsLossless) {
  oracle::Gen gen(5);
  for (int t = 0; t < 20; ++t) {
    const auto m = gen.with_boundary(gen.space(gen.between(2, 25)));
    const auto back = space_from_json(json::parse(to_json(m).dump()));
    expect_same(m, back);
    EXPECT_EQ(*back.boundary(), *m.boundary());
  }
  const auto g = generate(DiskSample{50, 1.0, 3, true});
  const auto back = space_from_json(json::parse(to_json(g).dump()));
  expect_same(g, back);
  EXPECT_EQ(*back.mass(), *g.mass());
  EXPECT_EQ(*back.coords(), *g.coords());
  EXPECT_EQ(*back.mass_dimension(), 2.0);
}

TEST(Csv, RoundTripAtSeventeenDigits) {
  oracle::Gen gen(6);
  for (int t = 0; t < 20; ++t) {
    const auto m = gen.space(gen.between(1, 25));
    expect_same(m, space_from_csv(to_csv(m)));
  }
}

TEST(Csv, RejectsMalformedInput) {
  EXPECT_THROW(space_from_csv(""), StructuralError);
  EXPECT_THROW(space_from_csv("a,b\n0,1\n"), StructuralError);
  EXPECT_THROW(space_from_csv("a,b\n0,1\n1,x\n"), StructuralError);
  EXPECT_THROW(space_from_csv("a,b\n0,1,2\n1,0\n"), StructuralError);
  const auto ok = space_from_csv("a, b\r\n0, 1\r\n1, 0\r\n");
  EXPECT_EQ(ok.label(1), "b");
  EXPECT_EQ(ok.d(0, 1), 1.0);
  EXPECT_THROW(to_csv(euclidean_space({"a,b", "c"}, {{0.0}, {1.0}})), StructuralError);
}

TEST(Json, RejectsMalformedInput) {
  EXPECT_THROW(space_from_json(json::parse(R"({"points":["a"]})")), StructuralError);
  EXPECT_THROW(space_from_json(json::parse(R"({"points":["a","b"],"dist":[[0,1]]})")), StructuralError);
  EXPECT_THROW(space_from_json(json::parse(R"({"points":["a","b"],"dist":[[0,1],[1]]})")), StructuralError);
  EXPECT_THROW(space_from_json(json::parse(R"({"points":["a","b"],"dist":[[0,"x"],[1,0]]})")), StructuralError);
  EXPECT_THROW(space_from_json(json::parse(R"({"points":["a","b"],"dist":[[0,1],[1,0]],"boundary":[4]})")),
               StructuralError);
}

TEST(Files, ExtensionSelectsFormat) {
  const auto m = generate(EuclideanGrid{3, 0.25});
  const auto j = scratch("grid.json"), c = scratch("grid.csv");
  save_space(j.string(), m);
  save_space(c.string(), m);
  expect_same(m, load_space(j.string()));
  expect_same(m, load_space(c.string()));
  EXPECT_TRUE(load_space(j.string()).mass().has_value());
  EXPECT_FALSE(load_space(c.string()).mass().has_value());
  EXPECT_THROW(load_space(scratch("missing.json").string()), StructuralError);
  write_file(scratch("bad.json").string(), "{not json");
  EXPECT_THROW(load_space(scratch("bad.json").string()), StructuralError);
}

TEST(Report, NonFiniteNumbersAreStrings) {
  EXPECT_EQ(num(kInf), "inf");
  EXPECT_EQ(num(-kInf), "-inf");
  EXPECT_EQ(num(1.5), 1.5);
  EXPECT_EQ(num_from(json("inf")), kInf);
  EXPECT_EQ(num_from(json(2.0)), 2.0);
}
