#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "detlab/detlab.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int rc = -1;
  std::string out;
  std::string err;
};

CliResult cli(const std::string& args, const std::string& env = "") {
  fs::path err = fs::temp_directory_path() / "detlab_cli_stderr.txt";
  std::string cmd = env + " " + DETLAB_CLI + " " + args + " 2>" + err.string();
  CliResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream e(err);
  std::stringstream ss;
  ss << e.rdbuf();
  r.err = ss.str();
  return r;
}

std::string data(const std::string& f) { return std::string(DETLAB_TEST_DATA) + "/" + f; }

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> v;
  std::stringstream ss(line);
  for (std::string t; std::getline(ss, t, ',');) v.push_back(t);
  return v;
}

std::string line_starting(const std::string& text, const std::string& prefix) {
  std::stringstream ss(text);
  for (std::string l; std::getline(ss, l);)
    if (l.rfind(prefix, 0) == 0) return l;
  return {};
}

}  // namespace

TEST(Cli, AnalyzeF3) {
  CliResult r = cli("analyze --spec F3");
  ASSERT_EQ(r.rc, 0) << r.err;
  EXPECT_EQ(line_starting(r.out, "winding,"), "winding,-1");
  EXPECT_NEAR(std::stod(fields(line_starting(r.out, "z_list,"))[1]), 1.6, 1e-12);
  EXPECT_NE(line_starting(r.out, "contour,").find("radius=2 "), std::string::npos);
}

TEST(Cli, AnalyzeF5Json) {
  CliResult r = cli("analyze --spec F5 --format json");
  ASSERT_EQ(r.rc, 0) << r.err;
  auto j = detlab::json::parse(r.out);
  EXPECT_EQ(j["winding"], -2);
  ASSERT_EQ(j["z_list"].size(), 2u);
  EXPECT_NEAR(j["z_list"][0][0].get<double>(), 1.9, 1e-12);
  EXPECT_NEAR(j["z_list"][1][0].get<double>(), 1.5, 1e-12);
  EXPECT_NEAR(j["contour"]["components"][0]["radius"].get<double>(), 2.375, 1e-12);
}

TEST(Cli, ToeplitzCsv) {
  CliResult r = cli("toeplitz --spec F1 --x 6..7");
  ASSERT_EQ(r.rc, 0) << r.err;
  EXPECT_EQ(r.out, "x,re,im\n6,11.390625,0\n7,17.0859375,0\n");
}

TEST(Cli, ToeplitzJson) {
  CliResult r = cli("toeplitz --spec F6 --x 1..3 --format json");
  ASSERT_EQ(r.rc, 0) << r.err;
  auto j = detlab::json::parse(r.out);
  ASSERT_EQ(j.size(), 3u);
  EXPECT_NEAR(j[2]["value"][0].get<double>(), -10.625, 1e-12);
}

TEST(Cli, OutFlagWritesFile) {
  fs::path f = fs::temp_directory_path() / "detlab_cli_out.csv";
  CliResult a = cli("toeplitz --spec F2 --x 1..4 --out " + f.string());
  ASSERT_EQ(a.rc, 0) << a.err;
  EXPECT_TRUE(a.out.empty());
  std::ifstream in(f);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), cli("toeplitz --spec F2 --x 1..4").out);
  fs::remove(f);
  // --out json selects the format
  EXPECT_NO_THROW(detlab::json::parse(cli("toeplitz --spec F2 --x 1..2 --out json").out));
}

TEST(Cli, FredholmMatchesOracle) {
  CliResult r = cli("fredholm --spec F4 --x 1..3");
  ASSERT_EQ(r.rc, 0) << r.err;
  std::stringstream ss(r.out);
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line, "x,re,im,m_used,err_estimate,rel_gap_vs_oracle");
  while (std::getline(ss, line)) EXPECT_LT(std::stod(fields(line)[5]), 1e-10) << line;
}

TEST(Cli, AsymMethods) {
  CliResult r = cli("asym --spec F2 --x 3..5 --method bo");
  ASSERT_EQ(r.rc, 0) << r.err;
  std::stringstream ss(r.out);
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line, "x,re,im,abs_err_vs_oracle");
  while (std::getline(ss, line)) EXPECT_LT(std::stod(fields(line)[3]), 1e-10) << line;
  EXPECT_EQ(cli("asym --spec F2 --method nonsense").rc, 2);
  EXPECT_EQ(cli("asym --spec F2 --method hf").rc, 2);
}

TEST(Cli, FormFactorJson) {
  CliResult r = cli("ff --spec F1 --x 2 --L 8 --format json");
  ASSERT_EQ(r.rc, 0) << r.err;
  auto j = detlab::json::parse(r.out);
  EXPECT_EQ(j["L"], 8);
  EXPECT_EQ(j["N"], 8);
  EXPECT_NEAR(j["value"][0].get<double>(), 2.25, 1e-12);
  EXPECT_LT(j["oracle_gap"].get<double>(), 1e-12);
}

TEST(Cli, CompareNotAvailableCells) {
  CliResult r = cli("compare --spec F3 --x 2..3 --method toeplitz,szego,hf");
  ASSERT_EQ(r.rc, 0) << r.err;
  EXPECT_EQ(line_starting(r.out, "x,"), "x,toeplitz_re,toeplitz_im,toeplitz_gap,szego_re,szego_im,szego_gap,hf_re,hf_im,hf_gap");
  auto f = fields(line_starting(r.out, "2,"));
  ASSERT_EQ(f.size(), 10u);
  EXPECT_EQ(f[4], "n/a(WindingNonzero)");
  EXPECT_LT(std::stod(f[9]), 1e-7);
}

TEST(Cli, Deterministic) {
  std::string args = "compare --spec F4 --x 1..4 --method toeplitz,fredholm_S,slavnov,hf_leading";
  CliResult a = cli(args), b = cli(args);
  ASSERT_EQ(a.rc, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  CliResult v1 = cli("verify --only appendixA --seed 5"), v2 = cli("verify --only appendixA --seed 5");
  EXPECT_EQ(v1.out, v2.out);
}

TEST(Cli, NumbersUseFullPrecision) {
  CliResult r = cli("toeplitz --spec F2 --x 1");
  auto f = fields(line_starting(r.out, "1,"));
  ASSERT_EQ(f.size(), 3u);
  // %.17g round-trips the in-process value bit for bit
  EXPECT_EQ(std::stod(f[1]), detlab::toeplitz_det(detlab::load_fixture("F2"), 1).real());
}

TEST(Cli, MalformedJson) {
  CliResult r = cli("toeplitz --spec " + data("malformed.json"));
  EXPECT_EQ(r.rc, 2);
  EXPECT_NE(r.err.find("parse error"), std::string::npos) << r.err;
}

TEST(Cli, InputErrors) {
  EXPECT_EQ(cli("toeplitz --spec does_not_exist").rc, 2);
  EXPECT_EQ(cli("toeplitz").rc, 2);
  EXPECT_EQ(cli("toeplitz --spec F1 --x 5..2").rc, 2);
  EXPECT_EQ(cli("toeplitz --spec F1 --format xml").rc, 2);
  EXPECT_EQ(cli("frobnicate").rc, 2);
  EXPECT_EQ(cli("toeplitz --spec " + data("zero_on_circle.json")).rc, 2);
}

TEST(Cli, NonConvergence) {
  CliResult r = cli("toeplitz --spec " + data("near_pole.json") + " --x 3");
  EXPECT_EQ(r.rc, 3) << r.err;
  EXPECT_NE(r.err.find("AliasingSuspected"), std::string::npos);
}

TEST(Cli, VerifyOnlyGroup) {
  CliResult r = cli("verify --only appendixA");
  EXPECT_EQ(r.rc, 0) << r.err;
  EXPECT_NE(r.out.find("PASS appendixA.m_dual_route [F4]"), std::string::npos);
  EXPECT_EQ(r.out.find("fredholm."), std::string::npos);
}

TEST(Cli, VerifyJsonReport) {
  fs::path f = fs::temp_directory_path() / "detlab_verify.json";
  CliResult r = cli("verify --spec F6 --only fredholm --out " + f.string());
  EXPECT_EQ(r.rc, 0) << r.err;
  std::ifstream in(f);
  auto j = detlab::json::parse(in);
  EXPECT_EQ(j["failed"], 0);
  EXPECT_GT(j["passed"].get<int>(), 3);
  fs::remove(f);
}

TEST(Cli, VerifyNamesFailingInvariant) {
  CliResult r = cli("verify --spec " + data("zero_on_circle.json"));
  EXPECT_EQ(r.rc, 1);
  EXPECT_NE(r.out.find("FAIL symbol.spec_invariants"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("numerator root on the unit circle"), std::string::npos) << r.out;
}

TEST(Cli, FixtureDirectoryOverride) {
  fs::path dir = fs::temp_directory_path() / "detlab_cli_fixtures";
  fs::create_directories(dir);
  std::ofstream(dir / "H1.json") << R"({"kind":"rational","numer":[[2,0]],"denom":[[1,0]]})";
  CliResult r = cli("toeplitz --spec H1 --x 3", "DETLAB_FIXTURES=" + dir.string());
  EXPECT_EQ(r.rc, 0) << r.err;
  EXPECT_EQ(r.out, "x,re,im\n3,8,0\n");
  CliResult v = cli("verify --only symbol.winding_consistency", "DETLAB_FIXTURES=" + dir.string());
  EXPECT_EQ(v.rc, 0);
  EXPECT_NE(v.out.find("[H1]"), std::string::npos);
  fs::remove_all(dir);
}
