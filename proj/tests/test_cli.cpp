#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nullflow/cli.hpp"

using namespace nullflow;

namespace {
struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("nullflow_cli_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string first_line(const std::filesystem::path& file) {
  std::ifstream is(file);
  std::string line;
  std::getline(is, line);
  return line;
}
}  // namespace

TEST(Cli, FlowOfSeedOne) {
  Outcome r = run({"flow", "--seed", "1", "--const", "c"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "  k1_t = 6*a*c*eps1*eps2*k2*k2' + 3*a*c*k1*k1' + c*k1'''\n"
                   "  k2_t = -3*a*c*k1*k2' - 2*c*k2'''\n");
  EXPECT_EQ(run({"flow", "--seed", "0", "--const", "b"}).out, "  k1_t = b*k1'\n  k2_t = b*k2'\n");
}

TEST(Cli, BracketOfClassicalFlows) {
  Outcome r = run({"bracket", "u', v'", "1/2*u''' + 3*u*u' - 6*v*v', -v''' - 3*u*v'"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "(0, 0)\n");
  EXPECT_EQ(run({"bracket", "k1, 0", "k1^2, 0"}).out, "(k1^2, 0)\n");
}

TEST(Cli, HierarchyVerifyPasses) {
  Outcome r = run({"hierarchy", "--upto", "3", "--verify"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("PASS V3 W2"), std::string::npos);
  EXPECT_NE(r.out.find("all checks passed"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, HierarchyVerifyWithZeroConstantsFails) {
  Outcome r = run({"hierarchy", "--upto", "3", "--verify", "--constants", "zero"});
  EXPECT_EQ(r.code, exit_code::verification);
  EXPECT_NE(r.out.find("FAIL V2 T"), std::string::npos);
}

TEST(Cli, HierarchyIsDeterministic) {
  Outcome r1 = run({"hierarchy", "--upto", "4", "--latex"});
  Outcome r2 = run({"hierarchy", "--upto", "4", "--latex"});
  EXPECT_EQ(r1.code, 0);
  EXPECT_EQ(r1.out, r2.out);
  EXPECT_NE(r1.out.find("\\varepsilon_{1}"), std::string::npos);
}

TEST(Cli, OrderCapFromEnvironment) {
  ::setenv("NULLFLOW_MAX_ORDER", "3", 1);
  Outcome r = run({"hierarchy", "--upto", "2"});
  ::unsetenv("NULLFLOW_MAX_ORDER");
  EXPECT_EQ(r.code, exit_code::usage);
  EXPECT_NE(r.err.find("cap 3"), std::string::npos);
  EXPECT_EQ(run({"hierarchy", "--upto", "2"}).code, 0);
}

TEST(Cli, Classify) {
  EXPECT_EQ(run({"classify", "b;0;0;0"}).out, "T_PLambda\n");
  EXPECT_EQ(run({"classify", "0;k1;0;0"}).out, "X_P\n");
  EXPECT_EQ(run({"classify", "0;0;c1;0"}).out, "X*_P\n");
  EXPECT_EQ(run({"classify", "0;0;c1"}).code, exit_code::usage);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, exit_code::usage);
  EXPECT_EQ(run({"nonsense"}).code, exit_code::usage);
  EXPECT_EQ(run({"bracket", "k1 +, 0", "0, 0"}).code, exit_code::usage);
  EXPECT_EQ(run({"bracket", "foo, 0", "0, 0"}).code, exit_code::usage);
  EXPECT_EQ(run({"bracket", "Dinv(k1), 0", "0, 0"}).code, exit_code::not_exact);
  EXPECT_EQ(run({"flow", "--seed", "2"}).code, exit_code::usage);
  EXPECT_EQ(run({"--help"}).code, exit_code::ok);
}

TEST(Cli, SimulateWritesCsvAndReport) {
  auto dir = scratch("nlie");
  Outcome r = run({"simulate", "--flow", "nlie", "--n", "64", "--dt", "1e-4", "--t-end", "0.01", "--length", "16",
               "--stride", "50", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (auto f : {"k1.csv", "k2.csv", "gamma0.csv", "gamma3.csv", "report.json"})
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  EXPECT_EQ(first_line(dir / "k1.csv"), "sigma,t=0,t=0.005,t=0.01");
  std::ifstream js(dir / "report.json");
  auto report = nlohmann::json::parse(js);
  EXPECT_EQ(report["steps"], 100);
  EXPECT_EQ(report["config"]["grid_points"], 64);
  EXPECT_EQ(report["mass_k1"].size(), 3u);
  EXPECT_EQ(report["gram_drift"].size(), 3u);
  std::filesystem::remove_all(dir);
}

TEST(Cli, SimulateFailures) {
  auto dir = scratch("fail");
  EXPECT_EQ(run({"simulate", "--dt", "1e-2", "--out", dir.string()}).code, exit_code::usage);
  EXPECT_EQ(run({"simulate", "--eps1", "-1", "--eps2", "-1", "--out", dir.string()}).code, exit_code::usage);

  std::filesystem::create_directories(dir);
  std::ofstream(dir / "quad.txt") << "k1^2, 0\n";
  Outcome r = run({"simulate", "--flow", "file", "--flow-file", (dir / "quad.txt").string(), "--n", "16", "--dt", "0.1",
               "--t-end", "100", "--out", (dir / "out").string()});
  EXPECT_EQ(r.code, exit_code::blow_up);
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "k1.csv"));

  std::ofstream(dir / "g.txt") << "G*k1', 0\n";
  EXPECT_EQ(run({"simulate", "--flow", "file", "--flow-file", (dir / "g.txt").string(), "--out", (dir / "g").string()})
                .code,
            exit_code::usage);
  std::filesystem::remove_all(dir);
}
