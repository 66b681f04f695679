#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include <sys/wait.h>

#include "kripke/cli.hpp"
#include "kripke/error.hpp"

using namespace kripke;

namespace {

std::string data(const char* f) { return std::string(KRIPKE_DATA_DIR) + "/" + f; }

struct Out {
  int code;
  std::string out, err;
  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Out cli(std::vector<std::string> args) {
  std::ostringstream o, e;
  int code = cli_main(args, o, e);
  return {code, o.str(), e.str()};
}

}  // namespace

TEST(Cli, Parse) {
  auto r = cli({"parse", "--lang", "fo", "forall x (P(x) | ~P(x))"});
  EXPECT_EQ(r.code, kExitPass);
  EXPECT_EQ(r.json()["result"], "PASS");
  EXPECT_EQ(cli({"parse", "--lang", "prop", "p &"}).code, kExitInput);
}

TEST(Cli, CheckAndDecide) {
  auto r = cli({"check", "--model", data("chain2_prop.json"), "--formula", "p | ~p"});
  EXPECT_EQ(r.code, kExitRefuted);
  auto j = r.json();
  EXPECT_EQ(j["result"], "REFUTED");
  EXPECT_EQ(j["first_counterexample"]["node"], "0");
  EXPECT_EQ(j["model_hash"].get<std::string>().size(), 16u);

  EXPECT_EQ(cli({"check", "--model", data("chain2_prop.json"), "--formula", "p -> p"}).code, kExitPass);
  EXPECT_EQ(cli({"decide", "--bound", "4", "p | ~p"}).code, kExitRefuted);
  EXPECT_EQ(cli({"decide", "--bound", "4", "~~(p | ~p)"}).code, kExitPass);
}

TEST(Cli, FirstOrder) {
  auto r = cli({"check-fo", "--model", data("CD_fo.json"), "--formula", "forall x (P(x) | q) -> (forall x P(x)) | q"});
  EXPECT_EQ(r.code, kExitRefuted);
  EXPECT_EQ(r.json()["first_counterexample"]["node"], "0");
}

TEST(Cli, SetCommands) {
  auto e = cli({"exp-failure", "--model", data("exp_chain2_set.json")});
  EXPECT_EQ(e.code, kExitRefuted);
  auto a = cli({"audit", "--model", data("v3_v4_set.json"), "--axioms", "ikp", "--matrix", "D0Separation=x in c"});
  EXPECT_EQ(a.code, kExitRefuted);  // finite levels refute pairing
  EXPECT_EQ(a.json()["first_counterexample"]["axiom"], "Pairing");
  EXPECT_EQ(cli({"equality-collapse", "--model", data("v3_v4_set.json")}).code, kExitPass);
  EXPECT_EQ(cli({"equality-collapse", "--model", data("TwoElementEq_fo.json")}).code, kExitRefuted);
}

TEST(Cli, DeJongh) {
  EXPECT_EQ(cli({"dejongh", "prop", "--model", data("chain2_prop.json"), "--formula", "p | ~p"}).code, kExitPass);
  EXPECT_EQ(cli({"dejongh", "relative", "--model", data("CD_fo.json"), "--formula",
                 "forall x (P(x) | q) -> (forall x P(x)) | q"})
                .code,
            kExitPass);
  auto m = cli({"dejongh", "mimic", "--model", data("DecidableP_fo.json"), "--depth", "1", "--random", "5", "--seed", "9"});
  EXPECT_EQ(m.code, kExitPass);
  EXPECT_EQ(m.json()["seed"], 9);
}

TEST(Cli, ReportsAreDeterministic) {
  std::vector<std::string> args{"dejongh", "mimic", "--model", data("CD_fo.json"), "--depth", "1", "--random", "5", "--seed", "3"};
  auto a = cli(args), b = cli(args);
  EXPECT_EQ(a.out, b.out);
  auto args2 = args;
  args2.back() = "4";
  EXPECT_NE(cli(args2).json()["seed"], a.json()["seed"]);
}

TEST(Cli, FrameExport) {
  auto r = cli({"frame", "export", "--model", data("chain2_prop.json"), "--dot"});
  EXPECT_EQ(r.code, kExitPass);
  EXPECT_NE(r.out.find("digraph"), std::string::npos);
}

TEST(Cli, Help) {
  auto r = cli({"--help"});
  EXPECT_EQ(r.code, kExitPass);
  EXPECT_NE(r.out.find("Usage: kripke"), std::string::npos);
  EXPECT_NE(cli({"dejongh", "mimic", "--help"}).out.find("--depth"), std::string::npos);
}

TEST(Cli, InputErrors) {
  EXPECT_EQ(cli({"nonsense"}).code, kExitInput);
  auto missing = cli({"check", "--model", data("missing.json"), "--formula", "p"});
  EXPECT_EQ(missing.code, kExitInput);
  EXPECT_FALSE(missing.err.empty());
  EXPECT_EQ(missing.json()["result"], "INPUT_ERROR");
  EXPECT_EQ(cli({"check", "--model", data("CD_fo.json"), "--formula", "p"}).code, kExitInput);
  EXPECT_EQ(cli({"exp-failure", "--model", data("v3_v4_set.json"), "--size-budget", "5"}).code, kExitInput);
  EXPECT_EQ(cli({"dejongh", "mimic", "--model", data("CD_fo.json"), "--depth", "3"}).code, kExitInput);
}

TEST(Cli, BinaryExitCodes) {
  const char* exe = std::getenv("KRIPKE_CLI");
  if (!exe) GTEST_SKIP() << "KRIPKE_CLI not set";
  std::string cmd = std::string(exe) + " decide --bound 3 'p | ~p' > /dev/null";
  int status = std::system(cmd.c_str());
  EXPECT_EQ(WEXITSTATUS(status), kExitRefuted);
}
