#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "pba/image_io.hpp"
#include "pba/noise.hpp"
#include "support/fixtures.hpp"

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("pba_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    pba::write_pgm(pba::fixtures::texture_image(32, 32, 1), path("clean.pgm"));
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(const std::string& args) const {
    const std::string cmd = std::string(PBA_CLI_PATH) + " " + args + " >" + path("stdout.txt") + " 2>" + path("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path dir_;
};

constexpr const char* kSmall = " --stride 2 -K 80 --iterations 2 --max-atoms 8 --seed 1 --no-timings";

TEST_F(Cli, NoisegenDenoiseEval) {
  ASSERT_EQ(run("noisegen -i " + path("clean.pgm") + " -o " + path("noisy.pgm") + " --sigma 20 --seed 3"), 0);
  ASSERT_EQ(run("denoise -i " + path("noisy.pgm") + " -o " + path("out.pgm") + kSmall), 0);
  EXPECT_TRUE(fs::exists(path("out.pgm.json")));
  const auto report = nlohmann::json::parse(pba::read_file(path("out.pgm.json")));
  EXPECT_EQ(report["command"], "denoise");
  ASSERT_EQ(run("eval -r " + path("clean.pgm") + " -t " + path("out.pgm") + " --json " + path("eval.json")), 0);
  const auto ev = nlohmann::json::parse(pba::read_file(path("eval.json")));
  EXPECT_GT(ev["psnr"].get<double>(), 0.0);
  EXPECT_LE(ev["ssim"].get<double>(), 1.0);
}

TEST_F(Cli, EvalIdenticalReportsInfinity) {
  ASSERT_EQ(run("eval -r " + path("clean.pgm") + " -t " + path("clean.pgm")), 0);
  const auto ev = nlohmann::json::parse(pba::read_file(path("stdout.txt")));
  EXPECT_EQ(ev["psnr"], "inf");
  EXPECT_EQ(ev["ssim"], 1.0);
}

TEST_F(Cli, RankWritesCsvDictAndReport) {
  ASSERT_EQ(run("rank -i " + path("clean.pgm") + " --out-prefix " + path("r") + kSmall), 0);
  const std::string csv = pba::read_file(path("r.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 81);
  EXPECT_EQ(csv.rfind("atom_index,l0_count,l1_mass,rank,selected\n", 0), 0u);
  EXPECT_EQ(pba::read_file(path("r.pbadict")).rfind("PBADICT v1 64 80\n", 0), 0u);
  EXPECT_NE(pba::read_file(path("stdout.txt")).find("P="), std::string::npos);
}

TEST_F(Cli, DespeckleRuns) {
  pba::write_pgm(pba::Image(32, 32, 100.0), path("flat.pgm"));
  ASSERT_EQ(run("noisegen -i " + path("flat.pgm") + " -o " + path("speck.pgm") + " --kind speckle --looks 4 --seed 2"), 0);
  EXPECT_EQ(run("despeckle -i " + path("speck.pgm") + " -o " + path("d.pgm") + " --looks 4 --format plain" + kSmall), 0);
  EXPECT_EQ(pba::read_file(path("d.pgm")).substr(0, 2), "P2");
}

TEST_F(Cli, OutputsAreByteIdenticalAcrossRuns) {
  ASSERT_EQ(run("denoise -i " + path("clean.pgm") + " -o " + path("a.pgm") + kSmall), 0);
  ASSERT_EQ(run("denoise -i " + path("clean.pgm") + " -o " + path("b.pgm") + kSmall), 0);
  EXPECT_EQ(pba::read_file(path("a.pgm")), pba::read_file(path("b.pgm")));
  EXPECT_EQ(pba::read_file(path("a.pgm.json")), pba::read_file(path("b.pgm.json")));
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("denoise -i " + path("clean.pgm")), 2);
  EXPECT_EQ(run("noisegen -i " + path("clean.pgm") + " -o " + path("n.pgm") + " --sigma 5"), 2);  // --seed missing
  EXPECT_EQ(run("denoise -i " + path("clean.pgm") + " -o " + path("o.pgm") + " --truncation bogus"), 2);
  EXPECT_EQ(run("denoise -i " + path("clean.pgm") + " -o " + path("o.pgm") + " --truncation fixed-p --fixed-p 0" +
                kSmall),
            2);
  EXPECT_EQ(run("denoise -i " + path("clean.pgm") + " -o " + path("o.pgm") + " --patch-side 64" + kSmall), 2);
}

TEST_F(Cli, IoErrorsExitThree) {
  EXPECT_EQ(run("denoise -i " + path("missing.pgm") + " -o " + path("o.pgm") + kSmall), 3);
  pba::write_file(path("junk.pgm"), "not an image");
  EXPECT_EQ(run("eval -r " + path("junk.pgm") + " -t " + path("clean.pgm")), 3);
}

TEST_F(Cli, NumericErrorsExitFour) {
  pba::write_pgm(pba::Image(16, 16, 10.0), path("small.pgm"));
  pba::write_pgm(pba::Image(16, 17, 10.0), path("other.pgm"));
  EXPECT_EQ(run("eval -r " + path("small.pgm") + " -t " + path("other.pgm")), 4);
}

}  // namespace
