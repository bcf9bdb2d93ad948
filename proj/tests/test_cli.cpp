#include <gtest/gtest.h>

#include <array>
#include <numbers>
#include <cstdio>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "rscd/cli.hpp"

using namespace rscd::cli;

namespace {

RunConfig config(const std::string& cmd, int n, int p, int M, double g, const std::string& format = "json") {
  RunConfig c;
  c.command = cmd;
  c.n = n;
  c.p = p;
  c.M = M;
  c.g = g;
  c.format = format;
  return c;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

struct ProcessResult {
  int exit_code;
  std::string out;
};

ProcessResult run_binary(const std::string& args) {
  const std::string cmd = std::string(RSCD_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t k = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), k);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST(Validate, ValidConfiguration) {
  const auto res = run(config("validate", 3, 1, 2, 0.5));
  ASSERT_EQ(res.exit_code, kExitOk);
  const auto doc = json::parse(res.text);
  EXPECT_EQ(doc["schema_version"], 1);
  EXPECT_TRUE(doc["valid"]);
  EXPECT_NEAR(doc["alpha"].get<double>(), 4 * std::numbers::pi / 7, 1e-15);
  EXPECT_EQ(doc["coupling_type"], "type_i");
  EXPECT_EQ(doc["dimension"], 6);
  EXPECT_TRUE(doc["g_excluded"]);
}

TEST(Validate, InvalidConfigurations) {
  EXPECT_EQ(run(config("validate", 4, 2, 1, 1.0)).exit_code, kExitInvalid);
  const auto res = run(config("validate", 4, 1, -2, 1.2));
  EXPECT_EQ(res.exit_code, kExitInvalid);
  const auto doc = json::parse(res.text);
  EXPECT_FALSE(doc["valid"]);
  EXPECT_NE(doc["error"].get<std::string>().find("M<0"), std::string::npos);
}

TEST(Spectrum, CsvHasOneRowPerLevel) {
  const auto res = run(config("spectrum", 3, 1, 2, 0.5, "csv"));
  ASSERT_EQ(res.exit_code, kExitOk);
  const auto ls = lines(res.text);
  ASSERT_EQ(ls.size(), 7u);
  EXPECT_EQ(ls[0], "lambda_index,E_1,E_2");
}

TEST(Operators, ComplexPairsAndDimension) {
  const auto res = run(config("operators", 3, 2, 1, 1.5));
  ASSERT_EQ(res.exit_code, kExitOk);
  const auto doc = json::parse(res.text);
  ASSERT_EQ(doc["operators"].size(), 6u);  // S, D, H for r = 1, 2
  for (const auto& op : doc["operators"]) {
    EXPECT_EQ(op["dim"], 3);
    ASSERT_EQ(op["entries"].size(), 3u);
    for (const auto& row : op["entries"])
      for (const auto& z : row) {
        ASSERT_EQ(z.size(), 2u);
        EXPECT_EQ(z[1].get<double>(), 0.0);
      }
  }
  EXPECT_LE(doc["max_commutator_norm"].get<double>(), 1e-12);
}

TEST(Verify, PassesIncludingExcludedCoupling) {
  for (const auto& c : {config("verify", 3, 1, 2, 0.5), config("verify", 3, 2, -1, 1.6)}) {
    const auto res = run(c);
    EXPECT_EQ(res.exit_code, kExitOk) << res.text;
    const auto doc = json::parse(res.text);
    EXPECT_TRUE(doc["pass"]);
    for (const auto& ch : doc["checks"]) EXPECT_TRUE(ch["pass"]) << ch["name"];
  }
}

TEST(Verify, TightToleranceFails) {
  auto c = config("verify", 3, 2, 1, 1.5);
  c.tol_gram = 1e-300;
  EXPECT_EQ(run(c).exit_code, kExitFailure);
}

TEST(Output, ReproducibleAcrossRuns) {
  for (const std::string cmd : {"eigenbasis", "classical", "verify"}) {
    const auto a = run(config(cmd, 3, 2, 1, 1.5));
    const auto b = run(config(cmd, 3, 2, 1, 1.5));
    EXPECT_EQ(a.text, b.text) << cmd;
  }
}

TEST(Output, UnknownFormatRejected) { EXPECT_EQ(run(config("lattice", 3, 1, 2, 0.5, "xml")).exit_code, kExitInvalid); }

TEST(Binary, ExitCodes) {
  const auto ok = run_binary("validate --n 3 --p 1 --M 2 --g 0.5");
  EXPECT_EQ(ok.exit_code, 0);
  EXPECT_NE(ok.out.find("\"valid\": true"), std::string::npos);
  EXPECT_EQ(run_binary("validate --n 4 --p 2 --M 1 --g 1").exit_code, 2);
  EXPECT_EQ(run_binary("validate --n 3 --p 1 --M 2").exit_code, 2);
  EXPECT_EQ(run_binary("lattice --n 3 --p 2 --M -1 --g 1.6 --format csv").exit_code, 0);
  EXPECT_EQ(run_binary("verify --n 3 --p 2 --M 1 --g 1.5 --tol-gram 1e-300").exit_code, 1);
}
