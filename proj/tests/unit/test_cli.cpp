#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Result {
  int status = -1;
  std::string out;
};

Result cli(const std::string& args) {
  const std::string cmd = std::string(LXE_CLI_PATH) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) r.out += buf;
  const int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::filesystem::path scratch() {
  const auto dir = std::filesystem::temp_directory_path() / "lxe_cli_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Cli, CftTable) {
  const auto r = cli("cft --table obc --aspect 0.5,1,2");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("model,L,T,p,q,r_xx,r_ghz,bc,scope,noise_rate,n,chi_mean,chi_stderr,seed"), std::string::npos);
  EXPECT_NE(r.out.find("cft-obc,0,0.5,"), std::string::npos);
  EXPECT_NE(r.out.find(",0.824353106199345,"), std::string::npos);
}

TEST(Cli, Leak) {
  const auto r = cli("leak --L 2 --samples 200 --seed 4");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(r.out.rfind("L,n,q_mean,q_stderr,seed\n2,200,", 0), 0u) << r.out;
}

TEST(Cli, RunThenAnalyse) {
  const auto dir = scratch();
  const auto cfg = dir / "sweep.json";
  const auto csv = dir / "sweep.csv";
  std::ofstream(cfg) << R"({
  "experiment": "LxeSweep",
  "model": "zzx",
  "L": [8, 16],
  "T_over_L": 1,
  "p": [0.3, 0.4, 0.5, 0.6, 0.7],
  "n_circuits": 200,
  "master_seed": 12,
  "output_path": ")" << csv.string() << R"("
})";
  const auto run = cli("run " + cfg.string());
  ASSERT_EQ(run.status, 0) << run.out;
  ASSERT_TRUE(std::filesystem::exists(csv));
  ASSERT_TRUE(std::filesystem::exists(dir / "sweep.meta.json"));
  EXPECT_TRUE(std::filesystem::exists(cfg));

  const auto x = cli("crossings " + csv.string());
  ASSERT_EQ(x.status, 0) << x.out;
  EXPECT_EQ(x.out.rfind("family,L1,L2,x_star,std_error\n", 0), 0u);

  const auto c = cli("collapse " + csv.string() + " --pc 0.5 --nu 1.3333");
  ASSERT_EQ(c.status, 0) << c.out;
  EXPECT_NE(c.out.find("zzx"), std::string::npos);
}

TEST(Cli, BadConfigReportsLine) {
  const auto cfg = scratch() / "bad.json";
  std::ofstream(cfg) << "{\n  \"experiment\": \"LxeSweep\",\n  \"master_seed\": 1,\n  \"L\": [8],\n  \"T\": 8,\n"
                        "  \"scope\": \"sideways\"\n}\n";
  const auto r = cli("run " + cfg.string());
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.out.find("bad.json:6"), std::string::npos) << r.out;
}

TEST(Cli, RejectsUnknownSubcommand) {
  EXPECT_NE(cli("frobnicate").status, 0);
  EXPECT_NE(cli("cft --table sideways").status, 0);
}
