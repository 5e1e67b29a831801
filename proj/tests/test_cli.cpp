#include <plqi/cli.hpp>

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

std::string sample(const std::string &name) { return std::string(PLQI_SAMPLES_DIR) + "/" + name; }

Result run(std::vector<std::string> args)
{
  args.insert(args.begin(), "plqi");
  std::vector<const char *> argv;
  for (auto &a : args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = plqi::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string &name, const std::string &content)
{
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path.string();
}

} // namespace

TEST(Cli, EquivCounterexample)
{
  auto r = run({"equiv", sample("id.map"), sample("ex36-g.map")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("verdict: Equal"), std::string::npos);
}

TEST(Cli, InvariantInterval)
{
  auto r = run({"invariant", sample("rep-1-2.map")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("S = [1, 2] (exact)"), std::string::npos);
}

TEST(Cli, Eval)
{
  auto r = run({"eval", sample("ex36-g.map"), "3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "3/2\n");
  auto d = run({"--decimal", "5", "eval", sample("ex36-g.map"), "4"});
  EXPECT_EQ(d.out, "2.37500\n");
}

TEST(Cli, ExitCodes)
{
  EXPECT_EQ(run({}).code, 64);
  EXPECT_EQ(run({"frobnicate"}).code, 64);
  EXPECT_EQ(run({"eval", sample("id.map"), "3/0"}).code, 65);
  EXPECT_EQ(run({"eval", sample("missing.map"), "1"}).code, 65);
  EXPECT_EQ(run({"equiv", sample("f2.map"), sample("id.map")}).code, 1);
  EXPECT_EQ(run({"construct", "interval", "1"}).code, 64);
  auto bad = temp_file("plqi_bad.map", R"({"head": [{"break": "0", "slope": "-1"}],
    "tail": {"ratio": "2", "anchor": "1", "pieces": [{"pos": {"geo": "1", "const": "0"}, "slope": {"c0": "1"}}]}})");
  EXPECT_EQ(run({"validate", bad}).code, 1);
  EXPECT_EQ(run({"validate", sample("ex36-g.map")}).code, 0);
}

TEST(Cli, Deterministic)
{
  auto a = run({"word-probe", sample("rep-1-2.map"), sample("g-lambda-2.map"), "--random", "5", "--seed", "9"});
  auto b = run({"word-probe", sample("rep-1-2.map"), sample("g-lambda-2.map"), "--random", "5", "--seed", "9"});
  EXPECT_EQ(a.code, b.code);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, ConstructRoundTrip)
{
  auto r = run({"construct", "interval", "1", "2", "--lambda", "4"});
  ASSERT_EQ(r.code, 0);
  auto m = plqi::parse_map(r.out);
  auto ref = plqi::interval_representative(1, 2, plqi::Rat(4));
  for (long n = 0; n <= 10; ++n)
    EXPECT_EQ(m.anchor_value(n), ref.anchor_value(n));
  auto path = temp_file("plqi_rep.map", r.out);
  auto e = run({"eval", path, "16"});
  EXPECT_EQ(e.out, "31\n");
}

TEST(Cli, Breakpoints)
{
  auto r = run({"--format", "tabular", "breakpoints", sample("ex36-g.map"), "2", "4"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "position\tleft_slope\tright_slope\n3\t1/2\t7/8\n");
}

TEST(Cli, OrderAndCommute)
{
  auto s = run({"order-sign", sample("f2.map"), sample("f-half.map")});
  EXPECT_EQ(s.code, 0);
  auto c = run({"commute-check", sample("noncommute-f.map"), sample("noncommute-g.map"), "--eps", "1/4", "--K", "2",
                "--Kp", "8/3"});
  EXPECT_EQ(c.code, 1);
  EXPECT_NE(c.out.find("verdict: NotEqual"), std::string::npos);
  auto a = run({"condition-a", sample("g-lambda-2.map"), "--lambda", "3/2", "--delta", "1/4"});
  EXPECT_EQ(a.code, 1);
  auto f = run({"condition-a", sample("f2.map"), "--lambda", "3/2", "--delta", "1/4"});
  EXPECT_EQ(f.code, 0);
}

TEST(Cli, Mobius)
{
  auto r = run({"mobius-verify"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  auto p = run({"mobius-verify", "--plot"});
  EXPECT_EQ(p.code, 0);
  EXPECT_EQ(p.out.substr(0, 2), "t\t");
}

TEST(Cli, BinaryExitCodes)
{
  std::string cmd = std::string(PLQI_CLI_PATH) + " equiv " + sample("id.map") + " " + sample("ex36-g.map") + " > /dev/null";
  EXPECT_EQ(WEXITSTATUS(std::system(cmd.c_str())), 0);
  cmd = std::string(PLQI_CLI_PATH) + " eval " + sample("id.map") + " abc 2> /dev/null";
  EXPECT_EQ(WEXITSTATUS(std::system(cmd.c_str())), 65);
}
