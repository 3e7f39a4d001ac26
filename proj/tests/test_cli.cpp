#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

struct Result {
  int status = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(NNECON_CLI) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("nnecon_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

const std::string kS1 = "model=subscription\nD0=200\nalpha=10\nbeta=0.5\nrho=0.5\np_r=1\n";
const std::string kA1 =
    "model=advertisement\nK=10\nMB=1000\ndist=uniform\nv_max=10\nalpha=10\nbeta=0.5\np_r=1\n";

TEST_F(Cli, SubscriptionToFile) {
  const std::string cfg = write("s1.cfg", kS1);
  const fs::path out = dir_ / "s1.csv";
  const Result r = run("subscription-ne --config " + cfg + " --out " + out.string());
  EXPECT_EQ(r.status, 0);
  const std::string csv = slurp(out);
  EXPECT_EQ(csv.rfind("swept_var,", 0), 0u);
  EXPECT_NE(csv.find("none,,7.35983"), std::string::npos) << csv;
}

TEST_F(Cli, AdToStdout) {
  const Result r = run("ad-ne --config " + write("a1.cfg", kA1));
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("Interior"), std::string::npos) << r.out;
}

TEST_F(Cli, BargainAndSweep) {
  Result r = run("bargain --config " + write("b.cfg", kS1 + "bargain=post\n"));
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("IspPriceFloor"), std::string::npos) << r.out;

  r = run("sweep --workers 3 --config " + write("sw.cfg", kS1 + "sweep=p_t,0,5,11\nseries=rho,0.5,1.5\n"));
  EXPECT_EQ(r.status, 0);
  int lines = 0;
  for (char c : r.out) lines += c == '\n';
  EXPECT_EQ(lines, 23);
}

TEST_F(Cli, ModeMismatchAndBadConfigExitTwo) {
  EXPECT_EQ(run("ad-ne --config " + write("s.cfg", kS1)).status, 2);
  EXPECT_EQ(run("subscription-ne --config " + write("bad.cfg", kS1 + "bogus=1\n")).status, 2);
  EXPECT_EQ(run("subscription-ne --config " + write("neg.cfg",
                                                    "model=subscription\nD0=200\nalpha=10\nbeta=0.5\nrho=-1\np_r=1\n"))
                .status,
            2);
  EXPECT_EQ(run("subscription-ne --config " + (dir_ / "missing.cfg").string()).status, 2);
  EXPECT_EQ(run("bargain --config " + write("k10.cfg", kA1 + "bargain=post\n")).status, 2);
  EXPECT_EQ(run("subscription-ne").status, 2);
}

TEST_F(Cli, Verify) {
  Result r = run("verify lemma4");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("SUMMARY\tqos-shift\t"), std::string::npos) << r.out;
  EXPECT_EQ(run("verify no-such-suite").status, 2);
  r = run("verify --list");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("ne-oracle"), std::string::npos);
}

}  // namespace
