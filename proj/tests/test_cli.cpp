#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "heavytail/cli.hpp"
#include "heavytail/sample_stats.hpp"
#include "json.hpp"

using namespace heavytail;
namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int code;
  std::string out;
  std::string err;
};

CmdResult run_cmd(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("heavytail_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static std::vector<double> values(const std::string& p) {
    std::ifstream in(p);
    return read_series(in, p, {std::nullopt, false, 1}).values;
  }

  static void spit(const std::string& p, const std::string& text) { std::ofstream(p) << text; }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SimulateIsDeterministic) {
  ASSERT_EQ(run_cmd({"simulate", "--tau", "0,1,0", "--n", "1000", "--seed", "7", "--out", path("a.txt")}).code, 0);
  ASSERT_EQ(run_cmd({"simulate", "--tau", "0,1,0", "--n", "1000", "--seed", "7", "--out", path("b.txt")}).code, 0);
  EXPECT_EQ(slurp(path("a.txt")), slurp(path("b.txt")));
  EXPECT_EQ(values(path("a.txt")).size(), 1000u);
  const CmdResult stdout_run = run_cmd({"simulate", "--tau", "0,1,0", "--n", "1000", "--seed", "7"});
  EXPECT_EQ(stdout_run.out, slurp(path("a.txt")));
  ASSERT_EQ(run_cmd({"simulate", "--tau", "0,1,0", "--n", "1000", "--seed", "8", "--out", path("c.txt")}).code, 0);
  EXPECT_NE(slurp(path("a.txt")), slurp(path("c.txt")));
}

TEST_F(CliTest, SimulateHeavyTail) {
  ASSERT_EQ(run_cmd({"simulate", "--tau", "0,1,0.333", "--n", "5000", "--seed", "3", "--out", path("y.txt")}).code, 0);
  EXPECT_GT(sample_kurtosis(values(path("y.txt"))), 6.0);
}

TEST_F(CliTest, SimulateOtherFamilies) {
  EXPECT_EQ(run_cmd({"simulate", "--family", "gamma:3,1", "--delta", "0.1", "--n", "50"}).code, 0);
  EXPECT_EQ(run_cmd({"simulate", "--family", "t:5", "--tau", "0,1,0.2", "--n", "50"}).code, 0);
  EXPECT_EQ(run_cmd({"simulate", "--family", "gamma:3,1", "--n", "50"}).code, 2);
  EXPECT_EQ(run_cmd({"simulate", "--family", "gamma:3,1", "--tau", "0,1,0.1", "--n", "50"}).code, 2);
  EXPECT_EQ(run_cmd({"simulate", "--family", "weibull:2", "--delta", "0.1"}).code, 2);
}

TEST_F(CliTest, SimulateValidation) {
  EXPECT_EQ(run_cmd({"simulate", "--tau", "0,1,0", "--n", "0"}).code, 2);
  EXPECT_EQ(run_cmd({"simulate", "--tau", "0,-1,0"}).code, 2);
  EXPECT_EQ(run_cmd({"simulate", "--tau", "a,b,c"}).code, 2);
  EXPECT_EQ(run_cmd({"simulate"}).code, 2);
  EXPECT_EQ(run_cmd({}).code, 2);
  EXPECT_EQ(run_cmd({"bogus"}).code, 2);
  EXPECT_EQ(run_cmd({"--help"}).code, 0);
}

TEST_F(CliTest, FitRecoversDelta) {
  ASSERT_EQ(run_cmd({"simulate", "--tau", "0,1,0.2", "--n", "2000", "--seed", "11", "--out", path("y.txt")}).code, 0);
  const CmdResult r = run_cmd({"fit", path("y.txt"), "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["method"], "mle");
  EXPECT_EQ(j["n"], 2000);
  EXPECT_TRUE(j["converged"].get<bool>());
  double delta = -1.0;
  for (const auto& p : j["parameters"]) {
    EXPECT_TRUE(p.contains("estimate"));
    EXPECT_TRUE(p.contains("std_error"));
    EXPECT_TRUE(p.contains("t"));
    EXPECT_TRUE(p.contains("p_value"));
    if (p["name"] == "delta") delta = p["estimate"].get<double>();
  }
  EXPECT_NEAR(delta, 0.2, 0.05);
  const auto& ll = j["loglik"];
  EXPECT_NEAR(ll["total"].get<double>(), ll["input"].get<double>() + ll["penalty"].get<double>(), 1e-8);
  for (const char* block : {"y", "x"}) {
    const auto& s = j["summary"][block];
    for (const char* k : {"min", "max", "mean", "median", "sd", "skewness", "kurtosis"}) EXPECT_TRUE(s.contains(k)) << k;
    EXPECT_EQ(s["normality"]["test"], "anderson_darling");
  }
  EXPECT_TRUE(j["lr_test"].is_null());
  EXPECT_EQ(parse_tau(j["tau_string"].get<std::string>()).tail.delta(), delta);
}

TEST_F(CliTest, FitTextTableAndMethods) {
  ASSERT_EQ(run_cmd({"simulate", "--tau", "1,2,0.3", "--n", "800", "--seed", "12", "--out", path("y.txt")}).code, 0);
  const CmdResult text = run_cmd({"fit", path("y.txt")});
  ASSERT_EQ(text.code, 0) << text.err;
  EXPECT_NE(text.out.find("delta"), std::string::npos);
  EXPECT_NE(text.out.find("std_error"), std::string::npos);
  const CmdResult igmm = run_cmd({"fit", path("y.txt"), "--method", "igmm", "--json"});
  ASSERT_EQ(igmm.code, 0);
  EXPECT_EQ(nlohmann::json::parse(igmm.out)["method"], "igmm");
  EXPECT_EQ(run_cmd({"fit", path("y.txt"), "--method", "quantile"}).code, 2);
  EXPECT_EQ(run_cmd({"fit", path("y.txt"), "--tail", "hhh"}).code, 2);
}

TEST_F(CliTest, FitDoubleTailReportsLrTest) {
  ASSERT_EQ(run_cmd({"simulate", "--tau", "0,1,0.15", "--n", "1000", "--seed", "13", "--out", path("y.txt")}).code, 0);
  const CmdResult r = run_cmd({"fit", path("y.txt"), "--tail", "hh", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_TRUE(j["lr_test"].is_object());
  EXPECT_GE(j["lr_test"]["statistic"].get<double>(), 0.0);
  EXPECT_GT(j["lr_test"]["p_value"].get<double>(), 0.0);
  EXPECT_EQ(j["tail"], "hh");
}

TEST_F(CliTest, FitSymmetricDoubleTailRarelyRejects) {
  int accepted = 0;
  const int runs = 10;
  for (int s = 0; s < runs; ++s) {
    const std::string file = path("s" + std::to_string(s) + ".txt");
    ASSERT_EQ(run_cmd({"simulate", "--tau", "0,1,0.2", "--n", "500", "--seed", std::to_string(100 + s), "--out", file}).code, 0);
    const CmdResult r = run_cmd({"fit", file, "--tail", "hh", "--json"});
    ASSERT_EQ(r.code, 0);
    if (nlohmann::json::parse(r.out)["lr_test"]["p_value"].get<double>() > 0.05) ++accepted;
  }
  EXPECT_GE(accepted, 8);
}

TEST_F(CliTest, FitInsufficientData) {
  spit(path("five.txt"), "1\n2\n3\n4\n5\n");
  const CmdResult r = run_cmd({"fit", path("five.txt")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("insufficient data"), std::string::npos);
}

TEST_F(CliTest, InputErrors) {
  spit(path("bad.txt"), "1\n2\nfoo\n4\n5\n6\n7\n8\n9\n10\n11\n");
  const CmdResult r = run_cmd({"fit", path("bad.txt")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 3"), std::string::npos);
  EXPECT_EQ(run_cmd({"fit", path("missing.txt")}).code, 2);
  spit(path("empty.txt"), "");
  EXPECT_EQ(run_cmd({"transform", path("empty.txt"), "--tau", "0,1,0.1"}).code, 2);
}

TEST_F(CliTest, CsvColumnInput) {
  std::string text = "a,b\n";
  for (int i = 0; i < 30; ++i) text += std::to_string(i) + "," + std::to_string(std::sin(i) * 3.0) + "\n";
  spit(path("t.csv"), text);
  const CmdResult r = run_cmd({"transform", path("t.csv"), "--column", "2", "--header", "--tau", "0,1,0"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  const auto v = read_series(in, "out").values;
  ASSERT_EQ(v.size(), 30u);
  EXPECT_NEAR(v[5], std::sin(5) * 3.0, 1e-5);
}

TEST_F(CliTest, GaussianizeIdentityAndValidation) {
  ASSERT_EQ(run_cmd({"simulate", "--tau", "0,1,0.3", "--n", "200", "--seed", "21", "--out", path("y.txt")}).code, 0);
  ASSERT_EQ(run_cmd({"gaussianize", path("y.txt"), "--tau", "0,1,0", "--out", path("x.txt")}).code, 0);
  EXPECT_EQ(values(path("x.txt")), values(path("y.txt")));
  EXPECT_EQ(run_cmd({"gaussianize", path("y.txt"), "--tau", "0,0,0.1"}).code, 2);
  EXPECT_EQ(run_cmd({"gaussianize", path("y.txt"), "--tau", "0,-2,0.1"}).code, 2);
  EXPECT_EQ(run_cmd({"gaussianize", path("y.txt")}).code, 2);
  EXPECT_EQ(run_cmd({"gaussianize", path("y.txt"), "--tau", "0,1,0", "--fit"}).code, 2);
}

TEST_F(CliTest, GaussianizeFitIgmmHitsKurtosisThree) {
  ASSERT_EQ(run_cmd({"simulate", "--tau", "0,1,0.5", "--n", "2000", "--seed", "22", "--out", path("y.txt")}).code, 0);
  const CmdResult r = run_cmd({"gaussianize", path("y.txt"), "--fit", "--method", "igmm", "--out", path("x.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(sample_kurtosis(values(path("x.txt"))), 3.0, 10.0 * 1.22e-4);
  EXPECT_NE(r.out.find("kurtosis"), std::string::npos);
}

TEST_F(CliTest, TransformRoundTrip) {
  ASSERT_EQ(run_cmd({"simulate", "--tau", "0,1,0", "--n", "20000", "--seed", "31", "--out", path("x.txt")}).code, 0);
  ASSERT_EQ(run_cmd({"transform", path("x.txt"), "--tau", "0,1,0.1", "--out", path("y.txt")}).code, 0);
  EXPECT_NEAR(sample_sd(values(path("y.txt"))), 1.182, 0.03);
  ASSERT_EQ(run_cmd({"transform", path("y.txt"), "--tau", "0,1,0.1", "--direction", "inverse", "--out", path("x2.txt")}).code, 0);
  const auto a = values(path("x.txt")), b = values(path("x2.txt"));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-9 * std::max(1.0, std::fabs(a[i])));
  EXPECT_EQ(run_cmd({"transform", path("x.txt"), "--tau", "0,1,0.1", "--direction", "sideways"}).code, 2);
}

TEST_F(CliTest, ReplicateSmallPlan) {
  spit(path("plan.json"),
       R"({"sample_sizes":[50],"delta_values":[0.0,0.6],"replications":4,"estimators":["median","lambertw_mle"],"seed":3})");
  ASSERT_EQ(run_cmd({"replicate", "--plan", path("plan.json"), "--out", path("r1")}).code, 0);
  ASSERT_EQ(run_cmd({"replicate", "--plan", path("plan.json"), "--out", path("r2")}).code, 0);
  const std::string csv = slurp(path("r1/replication.csv"));
  EXPECT_EQ(csv, slurp(path("r2/replication.csv")));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "N,delta,estimator,parameter,mean,bias,prop_below,sd_sqrtN,rmse_sqrtN,na_ratio");
  const auto j = nlohmann::json::parse(slurp(path("r1/replication.json")));
  EXPECT_EQ(j["plan"]["replications"], 4);
  EXPECT_EQ(j["table"]["rows"].size(), 2u * (1 + 4));
  const CmdResult to_stdout = run_cmd({"replicate", "--plan", path("plan.json")});
  EXPECT_EQ(to_stdout.out, csv);
}

TEST_F(CliTest, ReplicatePlanErrors) {
  spit(path("bad.json"), R"({"estimators":["mystery"]})");
  EXPECT_EQ(run_cmd({"replicate", "--plan", path("bad.json")}).code, 2);
  spit(path("broken.json"), R"({"estimators":)");
  EXPECT_EQ(run_cmd({"replicate", "--plan", path("broken.json")}).code, 2);
  EXPECT_EQ(run_cmd({"replicate", "--plan", path("absent.json")}).code, 2);
}

TEST_F(CliTest, BinaryExitCodes) {
  const std::string bin = HEAVYTAIL_CLI;
  auto run = [&](const std::string& args) {
    const int status = std::system((bin + " " + args + " > " + path("o.txt") + " 2> " + path("e.txt")).c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  EXPECT_EQ(run("simulate --tau 0,1,0.1 --n 100 --seed 4 --out " + path("y.txt")), 0);
  EXPECT_EQ(run("fit " + path("y.txt")), 0);
  EXPECT_EQ(run("simulate --n 0 --tau 0,1,0"), 2);
  spit(path("five.txt"), "1\n2\n3\n4\n5\n");
  EXPECT_EQ(run("fit " + path("five.txt")), 2);
  EXPECT_NE(slurp(path("e.txt")).find("insufficient data"), std::string::npos);
}

TEST_F(CliTest, NumericalFailureExitsThree) {
  spit(path("neg.txt"), "-1\n-2\n3\n4\n5\n6\n7\n8\n9\n10\n");
  const CmdResult r = run_cmd({"fit", path("neg.txt"), "--family", "gamma"});
  EXPECT_EQ(r.code, 3);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, OverflowingDataIsRejected) {
  spit(path("wide.txt"), "1\n2\n3\n4\n5\n6\n7\n8\n9\n1e300\n-1e300\n");
  EXPECT_EQ(run_cmd({"fit", path("wide.txt")}).code, 2);
  EXPECT_EQ(run_cmd({"fit", path("wide.txt"), "--family", "gamma"}).code, 2);
}
