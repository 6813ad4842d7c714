#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "arfrac/cli.hpp"
#include "arfrac/corpus.hpp"
#include "arfrac/error.hpp"

using namespace arfrac;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("arfrac-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliResult run(std::vector<std::string> args, const std::string& sub = "out") {
    args.insert(args.begin(), {"--out-dir", (dir_ / sub).string()});
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
  }

  std::string corpus(const std::string& name) const { return (corpus_dir() / (name + ".json")).string(); }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  fs::path dir_;
};

}  // namespace

TEST(ParseBound, Forms) {
  EXPECT_EQ(cli::parse_bound("1000"), Integer(1000));
  EXPECT_EQ(cli::parse_bound("2^30"), Integer(1) << 30);
  EXPECT_EQ(cli::parse_bound("10^6"), Integer(1000000));
  EXPECT_EQ(cli::parse_bound("1e9"), Integer(1000000000));
  EXPECT_EQ(cli::parse_bound("2.5e3"), Integer(2500));
  EXPECT_EQ(cli::parse_bound("2^100"), Integer(1) << 100);
  EXPECT_THROW(cli::parse_bound("abc"), Error);
  EXPECT_THROW(cli::parse_bound("-5"), Error);
}

TEST_F(CliTest, DimensionOfCorpusSystem) {
  const auto r = run({"dim", corpus("z-binary")});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.out.find("s = 1\n"), std::string::npos);
  const auto doc = nlohmann::json::parse(slurp(dir_ / "out" / "dim.json"));
  EXPECT_DOUBLE_EQ(doc.at("s").get<double>(), 1.0);
  const auto manifest = nlohmann::json::parse(slurp(dir_ / "out" / "dim.manifest.json"));
  EXPECT_EQ(manifest.at("subcommand"), "dim");
  EXPECT_TRUE(manifest.at("deterministic").get<bool>());
}

TEST_F(CliTest, DimensionFromWeights) {
  const auto r = run({"dim", "--weights", "2,4"});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.out.find("0.694241913630617"), std::string::npos);
}

TEST_F(CliTest, MissingAndInvalidInputsExitTwo) {
  EXPECT_EQ(run({"dim", (dir_ / "absent.json").string()}).code, cli::kExitInvalid);
  const auto bad = dir_ / "bad.json";
  std::ofstream(bad) << R"({"space": "int", "maps": [{"a": "1", "b": "0"}], "seeds": ["0"]})";
  const auto r = run({"enumerate", bad.string(), "--bound", "100"});
  EXPECT_EQ(r.code, cli::kExitInvalid);
  EXPECT_NE((r.out + r.err).find("NonExpanding"), std::string::npos);
  std::ofstream(dir_ / "broken.json") << "{ not json";
  EXPECT_EQ(run({"dim", (dir_ / "broken.json").string()}).code, cli::kExitInvalid);
  EXPECT_EQ(run({"no-such-subcommand"}).code, cli::kExitInvalid);
}

TEST_F(CliTest, AnalysisErrorsExitThree) {
  EXPECT_EQ(run({"census", "--n", "1", "--bound", "100000"}).code, cli::kExitAnalysis);
}

TEST_F(CliTest, GrowthFitOnDigits) {
  const auto r = run({"growth", corpus("digits01"), "--bound", "1e9", "--grid", "geometric:10", "--lo", "10", "--fit",
                      "--check-lemmas", "0.35,0.25"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("fitted exponent = 0.28"), std::string::npos);
  const auto csv = slurp(dir_ / "out" / "growth.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')).substr(0, 3), "x,N");
  EXPECT_NE(csv.find("\n1000,9,"), std::string::npos);
}

TEST_F(CliTest, ReplayReproducesOutputs) {
  ASSERT_EQ(run({"growth", corpus("digits012"), "--bound", "1e6", "--grid", "geometric:10", "--lo", "10", "--fit"}).code,
            cli::kExitOk);
  const auto first = slurp(dir_ / "out" / "growth.csv");
  const auto r = run({"replay", (dir_ / "out" / "growth.manifest.json").string()}, "again");
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_EQ(slurp(dir_ / "again" / "growth.csv"), first);
  EXPECT_EQ(slurp(dir_ / "again" / "growth.json"), slurp(dir_ / "out" / "growth.json"));
}

TEST_F(CliTest, MembershipCertificate) {
  const auto yes = run({"member", corpus("z-two-three"), "72"});
  EXPECT_EQ(yes.code, cli::kExitOk);
  EXPECT_NE(yes.out.find("yes"), std::string::npos);
  const auto no = run({"member", corpus("z-two-three"), "10"});
  EXPECT_EQ(no.code, cli::kExitOk);
  EXPECT_NE(no.out.find("no"), std::string::npos);
}

TEST_F(CliTest, OtherSubcommands) {
  EXPECT_EQ(run({"census", "--n", "1", "--bound", "100"}).code, cli::kExitOk);
  EXPECT_EQ(run({"enumerate", corpus("gauss-binary"), "--bound", "2^10"}).code, cli::kExitOk);
  EXPECT_EQ(run({"audit", corpus("z-two-three"), "--bound", "100"}).code, cli::kExitOk);
  EXPECT_EQ(run({"height", corpus("p1-doubling"), "--bound", "2^20"}).code, cli::kExitOk);
  EXPECT_EQ(run({"approx", corpus("p1-doubling"), "--target", "0:1", "--delta", "0.9", "--bound", "2^20"}).code,
            cli::kExitOk);
  EXPECT_EQ(run({"intersect", corpus("q2-powers-nat"), "--curve", "x1 + x2 - 6", "--bounds", "2^4,2^8"}).code,
            cli::kExitOk);
  EXPECT_EQ(run({"ec", "height", "--curve", "0,0,1,-1,0", "--point", "0,0"}).code, cli::kExitOk);
  const auto list = run({"corpus"});
  EXPECT_EQ(list.code, cli::kExitOk);
  EXPECT_NE(list.out.find("p1-doubling"), std::string::npos);
}
