#include "brepforge/cli.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>

#include <unistd.h>

#include "brepforge/dataset.hpp"
#include "brepforge/mltasks.hpp"

namespace {

using namespace brepforge;
namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out, err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) files[fs::relative(e.path(), root).string()] = dataset::read_file(e.path());
  return files;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("brepforge_cli_" + std::to_string(::getpid()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }
  std::string at(const std::string& name) const { return (root_ / name).string(); }
  fs::path root_;
};

TEST_F(Cli, GenTwiceGivesByteIdenticalTrees) {
  ASSERT_EQ(run({"gen", "--count", "50", "--seed", "7", "--out", at("a")}).code, 0);
  ASSERT_EQ(run({"gen", "--count", "50", "--seed", "7", "--out", at("b"), "--jobs", "3"}).code, 0);
  const auto a = tree(root_ / "a"), b = tree(root_ / "b");
  ASSERT_TRUE(a.count("meta.npy"));
  EXPECT_EQ(a, b);
}

TEST_F(Cli, GenWritesConsistentManifest) {
  const Result r = run({"gen", "--count", "30", "--seed", "100", "--out", at("d")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto files = tree(root_ / "d");
  for (const char* f : {"meta.json", "meta.npy", "discards.csv", "manifest.json", "config.txt"})
    EXPECT_TRUE(files.count(f)) << f;
  const auto ds = dataset::parse_dataset_meta_json(files.at("meta.json"));
  const std::string manifest = files.at("manifest.json");
  EXPECT_NE(manifest.find("\"generated\": 30"), std::string::npos);
  EXPECT_NE(manifest.find("\"exported\": " + std::to_string(ds.records.size())), std::string::npos);
  EXPECT_NE(manifest.find("\"discarded\": " + std::to_string(ds.discard_log.size())), std::string::npos);
  EXPECT_EQ(ds.records.size() + ds.discard_log.size(), 30u);
  std::size_t breps = 0;
  for (const auto& [name, data] : files)
    if (name.ends_with(".brep.json")) ++breps;
  EXPECT_EQ(breps, ds.records.size());
  const auto m = dataset::parse_npy(files.at("meta.npy"));
  EXPECT_EQ(m.rows, ds.records.size());
  EXPECT_EQ(m.values, dataset::meta_matrix(ds));
}

TEST_F(Cli, ConfigOverridesChangeTheHash) {
  ASSERT_EQ(run({"gen", "--count", "3", "--out", at("a")}).code, 0);
  ASSERT_EQ(run({"gen", "--count", "3", "--out", at("b"), "--set", "output.obj=false"}).code, 0);
  dataset::write_file(root_ / "cfg.txt", "output.obj = false\n");
  ASSERT_EQ(run({"gen", "--count", "3", "--out", at("c"), "--config", at("cfg.txt")}).code, 0);
  const auto a = tree(root_ / "a"), b = tree(root_ / "b"), c = tree(root_ / "c");
  EXPECT_NE(a.at("config.txt"), b.at("config.txt"));
  EXPECT_EQ(b.at("config.txt"), c.at("config.txt"));
  for (const auto& [name, data] : b) EXPECT_FALSE(name.ends_with(".obj")) << name;
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({"gen", "--count", "0", "--out", at("x")}).code, 2);
  EXPECT_EQ(run({"gen", "--out", at("x")}).code, 2);
  EXPECT_EQ(run({"gen", "--count", "2", "--out", at("x"), "--set", "no.such=1"}).code, 2);
  EXPECT_EQ(run({"gen", "--count", "2", "--out", at("x"), "--set", "grammar.notch_gap=0.55"}).code, 2);
  EXPECT_EQ(run({"gen", "--count", "2", "--out", at("x"), "--config", at("missing.txt")}).code, 2);
  EXPECT_EQ(run({"gen", "--count", "2", "--out", "/proc/brepforge"}).code, 2);
  EXPECT_EQ(run({"points", at("x"), "--mode", "torus"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(Cli, JobsComeFromTheEnvironment) {
  ::setenv("BREPFORGE_JOBS", "2", 1);
  const Result r = run({"gen", "--count", "10", "--seed", "7", "--out", at("env")});
  ::unsetenv("BREPFORGE_JOBS");
  ASSERT_EQ(r.code, 0);
  ASSERT_EQ(run({"gen", "--count", "10", "--seed", "7", "--out", at("one"), "--jobs", "1"}).code, 0);
  EXPECT_EQ(tree(root_ / "env"), tree(root_ / "one"));
  ::setenv("BREPFORGE_JOBS", "many", 1);
  EXPECT_EQ(run({"gen", "--count", "1", "--out", at("bad")}).code, 2);
  ::unsetenv("BREPFORGE_JOBS");
}

TEST_F(Cli, ValidatePassesFreshOutputAndFailsADefect) {
  ASSERT_EQ(run({"gen", "--count", "20", "--seed", "3", "--out", at("d")}).code, 0);
  const Result ok = run({"validate", at("d")});
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_NE(ok.out.find(" 0 failed"), std::string::npos);

  ASSERT_EQ(run({"defect", at("d"), "--ratio", "1", "--out", at("def")}).code, 0);
  auto defects = tree(root_ / "def");
  ASSERT_FALSE(defects.empty());
  const auto& [name, data] = *defects.begin();
  dataset::write_file(root_ / "d" / name, data);
  const Result bad = run({"validate", at("d")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("FAIL " + name), std::string::npos);
}

TEST_F(Cli, ValidateCatchesTamperedMeta) {
  ASSERT_EQ(run({"gen", "--count", "10", "--seed", "3", "--out", at("d")}).code, 0);
  for (const auto& [name, data] : tree(root_ / "d")) {
    if (!name.ends_with(".meta.json")) continue;
    BuildingMeta m = dataset::parse_meta_json(data);
    m.room_total += 1;
    dataset::write_file(root_ / "d" / name, dataset::meta_json(m));
    break;
  }
  EXPECT_EQ(run({"validate", at("d")}).code, 1);
  // A stricter filter than the one used for generation rejects rooms.
  ASSERT_EQ(run({"gen", "--count", "10", "--seed", "3", "--out", at("e")}).code, 0);
  EXPECT_EQ(run({"validate", at("e"), "--set", "filter.min_room_area=30"}).code, 1);
}

TEST_F(Cli, ValidateEmptyDirWarns) {
  fs::create_directories(root_ / "empty");
  const Result r = run({"validate", at("empty")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_EQ(run({"validate", at("missing")}).code, 2);
}

TEST_F(Cli, StatsPrintsHistograms) {
  ASSERT_EQ(run({"gen", "--count", "20", "--seed", "0", "--out", at("d")}).code, 0);
  const Result r = run({"stats", at("d"), "--csv", at("stats.csv")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("storey histogram"), std::string::npos);
  EXPECT_NE(r.out.find("room area histogram"), std::string::npos);
  EXPECT_EQ(dataset::read_file(root_ / "stats.csv").rfind("histogram,lower,upper,count\n", 0), 0u);
}

TEST_F(Cli, PointsWriteFourThousandLinesAndLabels) {
  ASSERT_EQ(run({"gen", "--count", "8", "--seed", "0", "--out", at("d")}).code, 0);
  ASSERT_EQ(run({"points", at("d"), "--n", "4000", "--mode", "cube", "--f32"}).code, 0);
  const auto files = tree(root_ / "d" / "points");
  std::size_t clouds = 0;
  for (const auto& [name, data] : files) {
    if (name.ends_with(".xyz")) {
      ++clouds;
      EXPECT_EQ(std::count(data.begin(), data.end(), '\n'), 4000) << name;
      std::istringstream in(data);
      double x, y, z;
      while (in >> x >> y >> z) {
        ASSERT_GE(std::min({x, y, z}), 0.0);
        ASSERT_LE(std::max({x, y, z}), 1.0);
      }
    }
    if (name.ends_with(".f32")) {
      EXPECT_EQ(data.size(), 4000u * 3u * 4u);
    }
  }
  const auto labels = mltasks::parse_regression_csv(files.at("labels.csv"));
  EXPECT_EQ(labels.size(), clouds);
  for (const auto& l : labels) {
    EXPECT_EQ(l.room_total, l.storey * (l.storey + 1) / 2);
  }
  // Re-running reproduces the clouds.
  ASSERT_EQ(run({"points", at("d"), "--mode", "cube", "--f32", "--out", at("again")}).code, 0);
  EXPECT_EQ(tree(root_ / "again"), files);
}

TEST_F(Cli, SpherePointsHaveUnitMaxRadius) {
  ASSERT_EQ(run({"gen", "--count", "4", "--seed", "0", "--out", at("d")}).code, 0);
  ASSERT_EQ(run({"points", at("d"), "--mode", "sphere", "--out", at("p")}).code, 0);
  for (const auto& [name, data] : tree(root_ / "p")) {
    if (!name.ends_with(".xyz")) continue;
    std::istringstream in(data);
    double x, y, z, r = 0;
    while (in >> x >> y >> z) r = std::max(r, std::sqrt(x * x + y * y + z * z));
    EXPECT_NEAR(r, 1.0, 1e-9) << name;
  }
}

TEST_F(Cli, DefectRatioAndNames) {
  ASSERT_EQ(run({"gen", "--count", "8", "--seed", "0", "--out", at("d")}).code, 0);
  const auto ds = dataset::parse_dataset_meta_json(dataset::read_file(root_ / "d" / "meta.json"));
  ASSERT_EQ(run({"defect", at("d"), "--out", at("def")}).code, 0);
  const auto files = tree(root_ / "def");
  EXPECT_EQ(files.size(), 2 * ds.records.size());
  for (const auto& [name, data] : files) {
    EXPECT_TRUE(mltasks::is_defect_name(name));
    const auto b = dataset::parse_brep_json(data);
    EXPECT_EQ(b.solid.label, brep::Label::Defect);
    EXPECT_FALSE(brep::is_watertight(b.solid)) << name;
  }
  ASSERT_EQ(run({"defect", at("d"), "--defect-ratio", "3", "--out", at("def3")}).code, 0);
  EXPECT_EQ(tree(root_ / "def3").size(), 3 * ds.records.size());
  EXPECT_EQ(run({"defect", at("d"), "--ratio", "0"}).code, 2);
}

TEST_F(Cli, EvalBinaryOnTheReferenceConfusionMatrix) {
  std::vector<mltasks::BinaryRow> rows;
  auto add = [&](int n, const char* stem, bool defect_file, brep::Label pred) {
    for (int i = 0; i < n; ++i)
      rows.push_back({std::string(stem) + std::to_string(i) + (defect_file ? "_def1.xyz" : ".xyz"), pred});
  };
  add(41, "tp", true, brep::Label::Defect);
  add(9, "fn", true, brep::Label::Good);
  add(37, "fp", false, brep::Label::Defect);
  add(13, "tn", false, brep::Label::Good);
  dataset::write_file(root_ / "preds.csv", mltasks::binary_csv(rows));
  const Result r = run({"eval", "binary", at("preds.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("tp 41 fn 9 fp 37 tn 13"), std::string::npos);
  EXPECT_NE(r.out.find("accuracy 0.540 (54.0%)"), std::string::npos);
  EXPECT_NE(r.out.find("precision 0.526"), std::string::npos);
  EXPECT_NE(r.out.find("recall 0.820"), std::string::npos);
  EXPECT_NE(r.out.find("f1 0.641 raw 0.640625"), std::string::npos);
}

TEST_F(Cli, EvalRegressionIdentityAndErrors) {
  ASSERT_EQ(run({"gen", "--count", "10", "--seed", "0", "--out", at("d")}).code, 0);
  ASSERT_EQ(run({"points", at("d"), "--n", "16"}).code, 0);
  const Result r = run({"eval", "regression", (root_ / "d" / "points" / "labels.csv").string(), "--truth", at("d")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("storey_accuracy 1.000"), std::string::npos);
  for (const char* m : {"storey_mae", "roomtot_mae", "roomtot_rmse", "avgarea_mae", "perfloor_mae"})
    EXPECT_NE(r.out.find(std::string(m) + " 0.000 raw 0\n"), std::string::npos) << m;

  dataset::write_file(root_ / "one.csv", mltasks::regression_csv({mltasks::RegressionRow{"ghost.xyz", 3, 6, 10}}));
  const Result j = run({"eval", "regression", at("one.csv"), "--truth", at("d")});
  EXPECT_EQ(j.code, 2);
  EXPECT_NE(j.err.find("ghost"), std::string::npos);
  dataset::write_file(root_ / "junk.csv", "filename,prediction\na.xyz,MAYBE\n");
  EXPECT_EQ(run({"eval", "binary", at("junk.csv")}).code, 2);
  EXPECT_EQ(run({"eval"}).code, 2);
}

}  // namespace
