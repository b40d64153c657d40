#include <gtest/gtest.h>

#include <filesystem>
#include <numbers>
#include <set>
#include <sstream>

#include "cli_app.hpp"
#include "oracles.hpp"

using namespace metricforge;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("metricforge_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

void write_pab(const std::string& file) {
  SpaceData data;
  data.labels = {"p", "a", "b"};
  data.dist = {0, 1, 2, 1, 0, 1, 2, 1, 0};
  save_space(file, FiniteMetricSpace(data));
}

}  // namespace

TEST_F(Cli, GenerateGrid) {
  const auto r = call({"generate", "--kind", "grid", "--side", "33", "--spacing", "0.03125", "-o", path("grid.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = load_space(path("grid.json"));
  EXPECT_EQ(m.size(), 1089u);
  const auto j = json::parse(read_file(path("grid.json")));
  EXPECT_EQ(j.at("manifest").at("command"), "generate");
  const auto side = json::parse(read_file(path("grid.json.manifest.json")));
  EXPECT_TRUE(side.contains("duration_seconds"));
}

TEST_F(Cli, GenerateSphereCapMarksRim) {
  const auto r = call({"generate", "--kind", "sphere-cap", "--eps", "0.2", "--n", "800", "--seed", "7", "-o", path("cap.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = load_space(path("cap.json"));
  ASSERT_EQ(m.size(), 800u);
  ASSERT_TRUE(m.has_boundary());
  const double rim = 2.0 * std::asin(0.1);
  for (Index i = 0; i < m.size(); ++i)
    EXPECT_EQ(m.is_boundary(i), oracle::chordal_to_rim((*m.coords())[i], rim) <= 0.02);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(call({"generate", "--kind", "grid", "--side", "0"}).code, 2);
  EXPECT_EQ(call({"generate", "--kind", "blob", "--n", "3"}).code, 2);
  EXPECT_EQ(call({"generate", "--side", "3"}).code, 2);
  EXPECT_EQ(call({}).code, 2);
  EXPECT_EQ(call({"check", "-i", path("nope.json"), "--suite", "metric"}).code, 2);
  EXPECT_EQ(call({"check", "-i", path("nope.json"), "--suite", "bogus"}).code, 2);
  EXPECT_EQ(call({"--help"}).code, 0);
}

TEST_F(Cli, WarpThreePoint) {
  write_pab(path("pab.json"));
  const auto r = call({"warp", "-i", path("pab.json"), "--basepoint", "p", "-o", path("w.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto w = load_space(path("w.json"));
  EXPECT_DOUBLE_EQ(w.d(*w.index_of("a"), *w.index_of("b")), 1.0 / 6.0);
  EXPECT_EQ(w.d(*w.index_of("p"), *w.index_of("\xE2\x88\x9E")), 1.0);
  EXPECT_EQ(call({"warp", "-i", path("pab.json"), "--basepoint", "q"}).code, 2);
}

TEST_F(Cli, DoubleLine) {
  auto data = euclidean_space(numbered_labels("x", 3), {{0.0}, {1.0}, {2.0}}).data();
  save_space(path("plain.json"), FiniteMetricSpace(data));
  data.boundary = std::vector<Index>{0};
  save_space(path("line.json"), FiniteMetricSpace(data));
  ASSERT_EQ(call({"double", "-i", path("line.json"), "-o", path("d.json")}).code, 0);
  const auto d = load_space(path("d.json"));
  EXPECT_EQ(d.size(), 5u);
  EXPECT_EQ(d.d(*d.index_of("x1#1"), *d.index_of("x1#2")), 2.0);
  EXPECT_EQ(call({"double", "-i", path("plain.json"), "-o", path("e.json")}).code, 2);
}

TEST_F(Cli, MetricSuite) {
  write_pab(path("pab.json"));
  auto r = call({"check", "-i", path("pab.json"), "--suite", "metric"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out).at("pass"), true);
  write_file(path("bad.csv"), "a,b,c\n0,1,5\n1,0,1\n5,1,0\n");
  r = call({"check", "-i", path("bad.csv"), "--suite", "metric"});
  EXPECT_EQ(r.code, 1);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("result").at("violations").at(0).at("axiom"), "triangle");
  EXPECT_EQ(j.at("result").at("violations").at(0).at("witness"), json({"a", "b", "c"}));
}

TEST_F(Cli, RegularityOnGrid) {
  ASSERT_EQ(call({"generate", "--kind", "grid", "--side", "33", "--spacing", "0.03125", "-o", path("grid.json")}).code, 0);
  const auto r = call({"check", "-i", path("grid.json"), "--suite", "regularity", "--q", "2", "-o", path("reg.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(read_file(path("reg.json")));
  EXPECT_LE(j.at("result").at("K_hat").get<double>(), 2 * std::numbers::pi);
  EXPECT_EQ(call({"check", "-i", path("grid.json"), "--suite", "regularity"}).code, 2);
  EXPECT_EQ(call({"check", "-i", path("grid.json"), "--suite", "regularity", "--q", "1", "--max-k", "10"}).code, 1);
}

TEST_F(Cli, DistortionOfWarp) {
  ASSERT_EQ(call({"generate", "--kind", "halfplane", "--n", "25", "--seed", "3", "-o", path("h.json")}).code, 0);
  ASSERT_EQ(call({"warp", "-i", path("h.json"), "--basepoint", "h0", "-o", path("hw.json")}).code, 0);
  auto r = call({"check", "-i", path("h.json"), "--suite", "distortion", "--target", path("hw.json"), "--claim-theta",
                "16t", "--two-sided", "--csv", path("env.csv"), "-o", path("qm.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(read_file(path("qm.json")));
  EXPECT_EQ(j.at("result").at("bound").at("pass"), true);
  EXPECT_EQ(j.at("result").at("kind"), "QM");
  EXPECT_NE(read_file(path("env.csv")).find("lower,upper"), std::string::npos);
  r = call({"check", "-i", path("h.json"), "--suite", "distortion", "--target", path("hw.json"), "--claim-eta", "16t"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(call({"check", "-i", path("h.json"), "--suite", "distortion"}).code, 2);
}

TEST_F(Cli, LlcDiagnosticForTinyDelta) {
  ASSERT_EQ(call({"generate", "--kind", "disk", "--n", "200", "--seed", "1", "-o", path("disk.json")}).code, 0);
  const auto r = call({"check", "-i", path("disk.json"), "--suite", "llc", "--delta", "0.001"});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(json::parse(r.out).at("result").at("usable"), false);
  EXPECT_EQ(call({"check", "-i", path("disk.json"), "--suite", "llc"}).code, 0);
}

TEST_F(Cli, Quasicircle) {
  ASSERT_EQ(call({"generate", "--kind", "circle", "--n", "256", "-o", path("c.json")}).code, 0);
  ASSERT_EQ(call({"generate", "--kind", "circle", "--n", "256", "--gap", "90", "-o", path("arc.json")}).code, 0);
  EXPECT_EQ(call({"check", "-i", path("c.json"), "--suite", "quasicircle"}).code, 0);
  const auto r = call({"check", "-i", path("arc.json"), "--suite", "quasicircle"});
  EXPECT_EQ(r.code, 1);
  const auto w = json::parse(r.out).at("result").at("witness").at("pair");
  EXPECT_EQ(std::set<std::string>(w.begin(), w.end()), (std::set<std::string>{"c0", "c255"}));
}

TEST_F(Cli, ReplayReproducesBytes) {
  ASSERT_EQ(call({"generate", "--kind", "sphere-cap", "--eps", "0.3", "--n", "300", "--seed", "5", "-o", path("s.json")}).code, 0);
  const auto first = read_file(path("s.json"));
  ASSERT_EQ(call({"check", "-i", path("s.json"), "--suite", "llc", "--seed", "4", "-o", path("llc.json")}).code, 0);
  const auto report = read_file(path("llc.json"));
  fs::remove(path("s.json"));
  fs::remove(path("llc.json"));
  ASSERT_EQ(call({"replay", path("s.json.manifest.json")}).code, 0);
  EXPECT_EQ(read_file(path("s.json")), first);
  write_file(path("saved_report.json"), report);
  ASSERT_EQ(call({"replay", path("saved_report.json")}).code, 0);
  EXPECT_EQ(read_file(path("llc.json")), report);
}
