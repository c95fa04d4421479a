#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sqg/cli.hpp"

using sqg::cli::run;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string c; std::getline(is, c, ',');) v.push_back(c);
  return v;
}

std::string tmp(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("sqg_test_cli_" + name)).string();
}

}  // namespace

TEST(Cli, CurvatureCsv) {
  const Result r = call({"curvature", "--family", "negative", "--n-max", "5", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 7U);
  EXPECT_EQ(ls[0].rfind("# config: ", 0), 0U);
  const auto cfg = nlohmann::json::parse(ls[0].substr(10));
  EXPECT_EQ(cfg["family"], "negative");
  EXPECT_EQ(cfg["n_max"], 5);
  EXPECT_EQ(ls[1], "n,K,K_over_n3,method");
  for (std::size_t i = 2; i < ls.size(); ++i) {
    EXPECT_NEAR(std::stod(split(ls[i])[2]), -15.05, 0.01);
  }
}

TEST(Cli, ConjugateJson) {
  const Result r = call({"--format", "json", "conjugate", "--n-max", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["rows"].size(), 10U);
  EXPECT_NEAR(j["rows"].back()["t_nm"].get<double>(), 4.6598, 1e-4);
  EXPECT_NEAR(j["config"]["limit"].get<double>(), 4.442882938158366, 1e-15);
  EXPECT_EQ(j["config"]["format"], "json");
}

TEST(Cli, JacobiOdeSeries) {
  const Result r = call({"jacobi-ode", "--n", "3", "--m", "2", "--t-end", "1", "--dt", "0.1", "--stride", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  EXPECT_EQ(ls[1], "t,re_h,im_h,re_g,im_g,abs_g");
  EXPECT_EQ(ls.size(), 5U);  // t = 0, 0.5, 1
  EXPECT_EQ(split(ls.back())[0], "1");
}

TEST(Cli, EvolveZeroIsIdentity) {
  const std::string field = tmp("zero.bin"), report = tmp("zero.json");
  const Result r = call({"evolve", "--theta0", "zero", "--t-end", "1", "--cells", "8", "--dt", "0.25",
                         "--stride", "4", "--node-stride", "4", "--field-output", field, "--report-output",
                         report});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_GT(ls.size(), 2U);
  EXPECT_EQ(ls[1], "t,node_i,node_j,x1,x2");
  for (std::size_t i = 2; i < ls.size(); ++i) {
    const auto c = split(ls[i]);
    const double a1 = -4.0 + 0.5 * std::stoi(c[1]), a2 = -4.0 + 0.5 * std::stoi(c[2]);
    EXPECT_EQ(std::stod(c[3]), a1);
    EXPECT_EQ(std::stod(c[4]), a2);
  }
  std::ifstream is(report);
  const auto rep = nlohmann::json::parse(is);
  EXPECT_FALSE(rep["halted"].get<bool>());
  EXPECT_TRUE(rep["membership"]["in_O"].get<bool>());
  EXPECT_TRUE(std::filesystem::exists(field));
  std::filesystem::remove(field);
  std::filesystem::remove(report);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(call({}).code, 2);
  EXPECT_EQ(call({"curvature", "--family", "sideways"}).code, 2);
  EXPECT_EQ(call({"curvature", "--n-max", "0"}).code, 2);
  EXPECT_EQ(call({"conjugate", "--n-max", "1"}).code, 2);
  EXPECT_EQ(call({"--format", "xml", "conjugate"}).code, 2);
  EXPECT_EQ(call({"evolve", "--h", "0.3"}).code, 2);
  EXPECT_EQ(call({"verify", "nothing"}).code, 2);
  EXPECT_EQ(call({"curvature", "--bogus", "1"}).code, 2);
  // amplitude 1 leaves 𝒪 within the first unit of time
  const std::string report = tmp("halt.json");
  const Result halt = call({"evolve", "--theta0", "gaussian", "--amplitude", "1", "--cells", "12", "--dt",
                            "0.25", "--report-output", report});
  EXPECT_EQ(halt.code, 3) << halt.err;
  std::ifstream is(report);
  EXPECT_TRUE(nlohmann::json::parse(is)["halted"].get<bool>());
  std::filesystem::remove(report);
  EXPECT_EQ(call({"expmap", "--theta0", "gaussian", "--amplitude", "1", "--cells", "12", "--dt", "0.25"}).code, 3);
  EXPECT_EQ(call({"--help"}).code, 0);
}

TEST(Cli, VerifyReport) {
  const Result r = call({"verify", "curvature"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["suite"], "curvature");
  for (const auto& c : j["checks"]) {
    EXPECT_TRUE(c["pass"].get<bool>()) << c["name"];
    EXPECT_TRUE(c["compare"] == "<=" || c["compare"] == ">=");
  }
}

TEST(Cli, EnvironmentOverrides) {
  ::setenv("SQG_N_MAX", "3", 1);
  const Result r = call({"curvature"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out).size(), 5U);
  const Result flag_wins = call({"curvature", "--n-max", "2"});
  EXPECT_EQ(lines(flag_wins.out).size(), 4U);
  ::unsetenv("SQG_N_MAX");
  ::setenv("SQG_NO_SUCH_FLAG", "1", 1);
  const Result bad = call({"curvature"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("SQG_NO_SUCH_FLAG"), std::string::npos);
  ::unsetenv("SQG_NO_SUCH_FLAG");
}

TEST(Cli, OutputIsRepeatable) {
  const std::vector<std::string> args = {"curvature", "--family", "positive", "--n-max", "4"};
  EXPECT_EQ(call(args).out, call(args).out);
  const Result one = call({"--threads", "1", "verify", "spectral"});
  const Result two = call({"--threads", "2", "verify", "spectral"});
  EXPECT_EQ(one.out, two.out);
}
