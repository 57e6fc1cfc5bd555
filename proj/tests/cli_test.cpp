#include "fibnim/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <set>
#include <sstream>

#include "oracle.hpp"

using namespace fibnim;
using namespace fibnim::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run table(Tokens max_n, OutputFormat format) {
  std::ostringstream out, err;
  CliConfig cfg;
  cfg.max_n = max_n;
  cfg.format = format;
  const int code = cmd_table(cfg, out, err);
  return {code, out.str(), err.str()};
}

Run analyze(std::string_view heaps, OutputFormat format = OutputFormat::pretty) {
  std::ostringstream out, err;
  CliConfig cfg;
  cfg.format = format;
  const int code = cmd_analyze(cfg, heaps, out, err);
  return {code, out.str(), err.str()};
}

Run verify(Tokens max_n, VerifySelection sel, OutputFormat format = OutputFormat::json) {
  std::ostringstream out, err;
  CliConfig cfg;
  cfg.max_n = max_n;
  cfg.format = format;
  const int code = cmd_verify(cfg, sel, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(CmdTable, CsvMatchesFixture) {
  const auto r = table(20, OutputFormat::csv);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, oracle::read_file(FIBNIM_TABLE1_FIXTURE));
}

TEST(CmdTable, SingleCell) {
  const auto r = table(0, OutputFormat::csv);
  EXPECT_EQ(r.out, "n,r,g\n0,0,0\n");
}

TEST(CmdTable, PrettyRowThirteen) {
  const auto r = table(13, OutputFormat::pretty);
  std::istringstream lines(r.out);
  std::string line;
  for (int i = 0; i <= 13; ++i) std::getline(lines, line);
  EXPECT_EQ(line, "13 | 0 0 0 0 0 0 0 0 0 0 0 0 0 6");
}

TEST(CmdTable, Json) {
  const auto j = nlohmann::json::parse(table(3, OutputFormat::json).out);
  EXPECT_EQ(j["rows"][3], nlohmann::json({0, 0, 0, 3}));
}

TEST(CmdTable, CeilingExceeded) {
  std::ostringstream out, err;
  CliConfig cfg;
  cfg.max_n = 50;
  cfg.ceiling = 10;
  EXPECT_EQ(cmd_table(cfg, out, err), 1);
  EXPECT_NE(err.str().find("ceiling"), std::string::npos);
}

TEST(CmdAnalyze, NPosition) {
  const auto r = analyze("11");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("winning move: take 3 from heap 0"), std::string::npos) << r.out;
}

TEST(CmdAnalyze, PPosition) {
  const auto r = analyze("13");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("P-position"), std::string::npos);
}

TEST(CmdAnalyze, TwoHeaps) {
  const auto r = analyze("4:3,7:6");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("take 3 from heap 1"), std::string::npos);
  EXPECT_NE(r.out.find("take 4 from heap 1"), std::string::npos);
  const auto j = nlohmann::json::parse(analyze("4:3,7:6", OutputFormat::json).out);
  EXPECT_EQ(j["winning_moves"].size(), 2u);
}

TEST(CmdAnalyze, ParseErrorNamesToken) {
  const auto r = analyze("12,abc");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("abc"), std::string::npos);
}

TEST(CmdVerify, SmallValues) {
  EXPECT_EQ(verify(2000, {.small_values = true}).code, 0);
}

TEST(CmdVerify, GrowthAtDeskScale) {
  const auto r = verify(20, {.growth = true});
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["endpoint"]["g"], 7);
  EXPECT_EQ(j["endpoint"]["upper_bound"], 10);
  const auto pretty = verify(20, {.growth = true}, OutputFormat::pretty);
  EXPECT_NE(pretty.out.find("G(20)=7 <= ceil(2 sqrt 20)+1 = 10"), std::string::npos) << pretty.out;
}

TEST(CmdVerify, AllChecksByDefault) {
  const auto r = verify(300, {});
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  std::set<std::string> ids;
  for (const auto& c : j["checks"]) ids.insert(c["id"]);
  for (const char* id : {"small.v0", "growth.step", "lemma.neighbour", "strategy.z1"}) EXPECT_TRUE(ids.count(id)) << id;
}

TEST(CmdVerify, OutputIsStableApartFromElapsed) {
  auto strip = [](const std::string& s) {
    auto j = nlohmann::json::parse(s);
    j.erase("elapsed_ms");
    return j.dump();
  };
  EXPECT_EQ(strip(verify(500, {}).out), strip(verify(500, {}).out));
}

TEST(ResolveHorizon, FlagThenEnvironmentThenDefault) {
  ::unsetenv(kHorizonEnv);
  EXPECT_EQ(resolve_horizon(std::nullopt, 77), 77u);
  ::setenv(kHorizonEnv, "123", 1);
  EXPECT_EQ(resolve_horizon(std::nullopt, 77), 123u);
  EXPECT_EQ(resolve_horizon(9, 77), 9u);
  ::setenv(kHorizonEnv, "12x", 1);
  EXPECT_THROW(resolve_horizon(std::nullopt, 77), std::invalid_argument);
  ::unsetenv(kHorizonEnv);
}
