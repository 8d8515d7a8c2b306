#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fixtures.hpp"
#include "pclor/cli.hpp"
#include "pclor/random_circuit.hpp"

using namespace pclor;
using namespace pclor::cli;
using namespace pclor::testing;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("pclor_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  void write(const std::string& p, const std::string& text) const { std::ofstream(p) << text; }

  std::filesystem::path dir_;
  std::ostringstream out, err;
};

}  // namespace

TEST_F(Cli, CheckStuckAtZeroHolds) {
  CheckFlags f;
  f.witness = path("stuck0.inv.cnf");
  EXPECT_EQ(cmd_check(fixture_path("stuck0.scirc"), f, out, err), kHolds) << err.str();
  EXPECT_NE(out.str().find("holds"), std::string::npos);
  EXPECT_EQ(cmd_verify_witness(fixture_path("stuck0.scirc"), f.witness, "", out, err), kHolds);
  EXPECT_NE(slurp(f.witness).find("c var 1 s"), std::string::npos);
}

TEST_F(Cli, CheckToggleFailsWithTrace) {
  CheckFlags f;
  f.witness = path("toggle.trace");
  EXPECT_EQ(cmd_check(fixture_path("toggle.scirc"), f, out, err), kFails) << err.str();
  std::string t = slurp(f.witness);
  EXPECT_NE(t.find("step 0: inputs 1 state 0\nstep 1: inputs - state 1\n"), std::string::npos) << t;
  EXPECT_EQ(cmd_verify_witness(fixture_path("toggle.scirc"), f.witness, "", out, err), kHolds);
}

TEST_F(Cli, InputErrors) {
  CheckFlags f;
  f.witness = path("w");
  EXPECT_EQ(cmd_check(fixture_path("bad_syntax.scirc"), f, out, err), kInputError);
  EXPECT_NE(err.str().find("line 2"), std::string::npos);
  EXPECT_EQ(cmd_check(path("missing.scirc"), f, out, err), kInputError);
  f.guess = "keep:interface";
  EXPECT_EQ(cmd_check(fixture_path("stuck0.scirc"), f, out, err), kInputError);
  EXPECT_EQ(cmd_sec(fixture_path("dff.scirc"), fixture_path("counter2.scirc"), CheckFlags{}, out, err),
            kInputError);
}

TEST_F(Cli, SecVerdicts) {
  CheckFlags f;
  f.engine = "lor-ic";
  f.guess = "drop:interface";
  f.witness = path("same.inv.cnf");
  EXPECT_EQ(cmd_sec(fixture_path("dff.scirc"), fixture_path("dff.scirc"), f, out, err), kHolds);
  EXPECT_NE(out.str().find("equivalent"), std::string::npos);
  f.witness = path("diff.trace");
  EXPECT_EQ(cmd_sec(fixture_path("dff.scirc"), fixture_path("inverted_dff.scirc"), f, out, err), kFails);
  EXPECT_NE(out.str().find("inequivalent"), std::string::npos);
  EXPECT_EQ(cmd_verify_witness(fixture_path("dff.scirc"), f.witness, fixture_path("inverted_dff.scirc"),
                               out, err),
            kHolds);
  // Without the second circuit the trace does not even fit the latches.
  EXPECT_EQ(cmd_verify_witness(fixture_path("dff.scirc"), f.witness, "", out, err), kFails);
}

TEST_F(Cli, SecEnginesAgree) {
  for (const char* other : {"recoded_dff.scirc", "inverted_dff.scirc", "dff.scirc"}) {
    int verdicts[2];
    for (int e = 0; e < 2; ++e) {
      CheckFlags f;
      f.engine = e ? "lor-ic" : "lor";
      f.guess = "drop:interface";
      f.witness = path("w" + std::to_string(e));
      verdicts[e] = cmd_sec(fixture_path("dff.scirc"), fixture_path(other), f, out, err);
    }
    EXPECT_EQ(verdicts[0], verdicts[1]) << other;
  }
}

TEST_F(Cli, PqeCommand) {
  EXPECT_EQ(cmd_pqe(fixture_path("small.pqe"), false, 1'000'000, out, err), kHolds) << err.str();
  EXPECT_EQ(out.str(), "1 2 0\n");
  out.str("");
  EXPECT_EQ(cmd_pqe(fixture_path("empty_a.pqe"), false, 1'000'000, out, err), kHolds);
  EXPECT_EQ(out.str(), "");
  EXPECT_EQ(cmd_pqe(fixture_path("small.pqe"), true, 1'000'000, out, err), kHolds);
  EXPECT_NE(out.str().find("c verified"), std::string::npos);
}

TEST_F(Cli, PqeMalformedAndBudget) {
  write(path("bad.pqe"), "p pqe 2 1 0\n1 x 0\n");
  EXPECT_EQ(cmd_pqe(path("bad.pqe"), false, 1000, out, err), kInputError);
  write(path("range.pqe"), "p pqe 2 1 0\n1 3 0\n");
  EXPECT_EQ(cmd_pqe(path("range.pqe"), false, 1000, out, err), kInputError);
  // Too many variables for the enumeration fallback and no nodes to spend.
  std::ostringstream big;
  big << "p pqe 40 1 39\nw";
  for (int i = 2; i <= 40; ++i) big << " " << i;
  big << " 0\n1 2 0\n%\n";
  for (int i = 2; i < 40; ++i) big << -i << " " << i + 1 << " 0\n";
  big << "-40 -1 0\n";
  write(path("big.pqe"), big.str());
  EXPECT_EQ(cmd_pqe(path("big.pqe"), false, 1, out, err), kUnknown) << out.str();
}

TEST_F(Cli, VerifyWitnessRejectsCorruption) {
  write(path("t"), "step 0: inputs 0 state 0\nstep 1: inputs - state 1\n");
  EXPECT_EQ(cmd_verify_witness(fixture_path("toggle.scirc"), path("t"), "", out, err), kFails);
  EXPECT_NE(out.str().find("step 0"), std::string::npos);
  out.str("");
  // I and consecution hold for the empty invariant, the property does not.
  write(path("inv"), "c var 1 s\np cnf 1 0\n");
  EXPECT_EQ(cmd_verify_witness(fixture_path("stuck0.scirc"), path("inv"), "", out, err), kFails);
  EXPECT_NE(out.str().find("condition 2"), std::string::npos);
  out.str("");
  write(path("inv2"), "c var 1 s\np cnf 1 1\n1 0\n");
  EXPECT_EQ(cmd_verify_witness(fixture_path("stuck0.scirc"), path("inv2"), "", out, err), kFails);
  EXPECT_NE(out.str().find("condition 1"), std::string::npos);
  write(path("odd"), "hello\n");
  EXPECT_EQ(cmd_verify_witness(fixture_path("stuck0.scirc"), path("odd"), "", out, err), kFails);
}

TEST_F(Cli, EmittedWitnessesRoundTrip) {
  std::vector<std::string> files;
  for (const auto& name : single_circuit_fixtures()) files.push_back(fixture_path(name));
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    files.push_back(path("r" + std::to_string(seed) + ".scirc"));
    std::ostringstream g;
    cmd_gen(seed, 3, 2, 2, g);
    write(files.back(), g.str());
  }
  for (const auto& file : files) {
    for (const char* engine : {"lor", "lor-ic"}) {
      CheckFlags f;
      f.engine = engine;
      f.witness = path("witness");
      int rc = cmd_check(file, f, out, err);
      ASSERT_TRUE(rc == kHolds || rc == kFails) << file << "\n" << err.str();
      EXPECT_EQ(cmd_verify_witness(file, f.witness, "", out, err), kHolds) << file;
    }
  }
}

TEST_F(Cli, DeterministicOutput) {
  std::string a, b;
  for (std::string* dst : {&a, &b}) {
    CheckFlags f;
    f.seed = 7;
    f.witness = path("w");
    cmd_check(fixture_path("two_stage.scirc"), f, out, err);
    *dst = slurp(f.witness);
  }
  EXPECT_EQ(a, b);
  std::ostringstream g1, g2;
  cmd_gen(42, 4, 1, 3, g1);
  cmd_gen(42, 4, 1, 3, g2);
  EXPECT_EQ(g1.str(), g2.str());
  EXPECT_NO_THROW(parse_circuit(g1.str()));
}

TEST_F(Cli, JsonReport) {
  CheckFlags f;
  f.json = true;
  f.witness = path("w");
  ASSERT_EQ(cmd_check(fixture_path("ring3.scirc"), f, out, err), kHolds);
  auto j = nlohmann::json::parse(out.str());
  EXPECT_EQ(j["verdict"], "holds");
  EXPECT_EQ(j["witness"], f.witness);
  EXPECT_EQ(j["frame_sizes"].size(), j["frames"].get<std::size_t>() + 1);
}

TEST_F(Cli, FrameBoundGivesUnknown) {
  CheckFlags f;
  f.max_frames = 1;
  f.witness = path("w");
  EXPECT_EQ(cmd_check(fixture_path("counter2.scirc"), f, out, err), kUnknown);
  EXPECT_NE(out.str().find("unknown"), std::string::npos);
}
