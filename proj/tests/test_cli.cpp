// Drives the procshadow executable and checks exit codes and outputs.

#include <gtest/gtest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliResult {
  int code;
  std::string out;
};

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("procshadow_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

CliResult run(const std::string& args, const fs::path& dir) {
  const fs::path out = dir / "stdout.txt";
  const std::string cmd = std::string(PROCSHADOW_CLI) + " " + args + " > " + out.string() + " 2> " +
                          (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
  const fs::path d = scratch("usage");
  EXPECT_EQ(run("", d).code, 2);
  EXPECT_EQ(run("frobnicate", d).code, 2);
  EXPECT_EQ(run("acquire --m notanumber --records x.jsonl", d).code, 2);
  EXPECT_EQ(run("reconstruct", d).code, 2);  // --records missing
  EXPECT_EQ(run("acquire --records " + (d / "r.jsonl").string() + " --channel bogus", d).code, 2);
  EXPECT_EQ(run("acquire --records " + (d / "r.jsonl").string() + " --ensemble-in haar", d).code, 2);
  EXPECT_EQ(run("--help", d).code, 0);
}

TEST(Cli, AcquireReconstructEstimate) {
  const fs::path d = scratch("pipeline");
  const std::string rec = (d / "r.jsonl").string();
  ASSERT_EQ(run("acquire --n 1 --channel pauli-x --m 20000 --seed 3 --records " + rec, d).code, 0);
  const json acq = json::parse(run("reconstruct --records " + rec + " --channel pauli-x --output " +
                                       (d / "choi.json").string(),
                                   d)
                                   .out);
  EXPECT_EQ(acq["records"], 20000);
  EXPECT_NEAR(acq["trace"].get<double>(), 1.0, 1e-12);
  EXPECT_LT(acq["operator_norm_error"].get<double>(), 0.1);
  EXPECT_TRUE(fs::exists(d / "choi.json"));

  const CliResult t = run("estimate --records " + rec + " --transition 0,1", d);
  ASSERT_EQ(t.code, 0);
  EXPECT_NEAR(json::parse(t.out)["transition_raw"].get<double>(), 1.0, 0.1);

  const CliResult o = run("estimate --records " + rec + " --input-state 0 --observable Z --k 3", d);
  ASSERT_EQ(o.code, 0);
  EXPECT_NEAR(json::parse(o.out)["value"].get<double>(), -1.0, 0.1);

  const CliResult c = run("estimate --records " + rec + " --input-state mixed --early X --late X", d);
  ASSERT_EQ(c.code, 0);
  EXPECT_TRUE(json::parse(c.out)["fast_path"].get<bool>());

  const CliResult v = run("verify-unitarity --records " + rec + " --seed 1", d);
  ASSERT_EQ(v.code, 0);
  EXPECT_EQ(json::parse(v.out)["verdict"], "unitary");

  EXPECT_EQ(run("estimate --records " + rec + " --observable ZZ", d).code, 2);
}

TEST(Cli, AcquisitionIsDeterministic) {
  const fs::path d = scratch("determinism");
  for (const char* name : {"a.jsonl", "b.jsonl"}) {
    ASSERT_EQ(run("acquire --n 2 --channel random-full-rank --ensemble-in clifford --m 500 --seed 11 --records " +
                      (d / name).string(),
                  d)
                  .code,
              0);
  }
  EXPECT_EQ(slurp(d / "a.jsonl"), slurp(d / "b.jsonl"));
}

TEST(Cli, ConfigFileSuppliesOptions) {
  const fs::path d = scratch("config");
  const std::string rec = (d / "r.jsonl").string();
  std::ofstream(d / "cfg.json") << json{{"n", 2}, {"m", 123}, {"channel", "dephasing:0.5"}, {"records", rec}}.dump();
  ASSERT_EQ(run("acquire --config " + (d / "cfg.json").string(), d).code, 0);
  EXPECT_EQ(json::parse(run("reconstruct --records " + rec, d).out)["records"], 123);
  // command line wins over the file
  ASSERT_EQ(run("acquire --m 7 --config " + (d / "cfg.json").string(), d).code, 0);
  EXPECT_EQ(json::parse(run("reconstruct --records " + rec, d).out)["records"], 7);

  std::ofstream(d / "bad.json") << json{{"n", 2}, {"mm", 3}}.dump();
  EXPECT_EQ(run("acquire --records " + rec + " --config " + (d / "bad.json").string(), d).code, 2);
  std::ofstream(d / "broken.json") << "{ not json";
  EXPECT_EQ(run("acquire --records " + rec + " --config " + (d / "broken.json").string(), d).code, 2);
  std::ofstream(d / "wrongtype.json") << json{{"m", "many"}}.dump();
  EXPECT_EQ(run("acquire --records " + rec + " --config " + (d / "wrongtype.json").string(), d).code, 2);
}

TEST(Cli, CorruptRecordsExitTwo) {
  const fs::path d = scratch("corrupt");
  const std::string rec = (d / "r.jsonl").string();
  ASSERT_EQ(run("acquire --n 1 --m 5 --records " + rec, d).code, 0);
  std::string text = slurp(rec);
  text += "{\"b_in\": \"0\"\n";
  std::ofstream(rec, std::ios::binary) << text;
  EXPECT_EQ(run("reconstruct --records " + rec, d).code, 2);
  EXPECT_NE(slurp(d / "stderr.txt").find("line 7"), std::string::npos) << slurp(d / "stderr.txt");
  EXPECT_EQ(run("reconstruct --records " + (d / "missing.jsonl").string(), d).code, 2);
}

TEST(Cli, OversizedRequestsExitThree) {
  const fs::path d = scratch("infeasible");
  const std::string rec = (d / "big.jsonl").string();
  ASSERT_EQ(run("acquire --n 5 --channel identity --m 3 --records " + rec, d).code, 0);
  EXPECT_EQ(run("compose --records " + rec + " --records-second " + rec, d).code, 3);
  EXPECT_EQ(run("reconstruct --records " + rec, d).code, 3);
  EXPECT_EQ(run("verify-unitarity --records " + rec, d).code, 3);
  EXPECT_EQ(run("acquire --n 5 --channel random-unitary --m 3 --records " + rec, d).code, 3);
}

TEST(Cli, ComposeAndBudget) {
  const fs::path d = scratch("compose");
  const std::string x = (d / "x.jsonl").string();
  const std::string y = (d / "y.jsonl").string();
  ASSERT_EQ(run("acquire --n 1 --channel hadamard --m 200 --seed 1 --records " + x, d).code, 0);
  ASSERT_EQ(run("acquire --n 1 --channel pauli-x --m 300 --seed 2 --records " + y, d).code, 0);
  const CliResult c = run("compose --records " + x + " --records-second " + y + " --output " + (d / "c.json").string(), d);
  ASSERT_EQ(c.code, 0);
  EXPECT_EQ(json::parse(c.out)["terms"], 60000);

  const CliResult b = run("budget --n 1 --epsilon 0.1 --delta 0.1 --observable Z --input 0", d);
  ASSERT_EQ(b.code, 0);
  const json bj = json::parse(b.out);
  EXPECT_EQ(bj["K"], 6);
  EXPECT_EQ(bj["N"], 217600);
  const CliResult s = run("budget --n 2 --observable ZI --observable XX", d);
  ASSERT_EQ(s.code, 0);
  EXPECT_EQ(json::parse(s.out)["mode"], "state");
  EXPECT_EQ(run("budget --n 1 --observable ZZ", d).code, 2);
  EXPECT_EQ(run("budget --n 1", d).code, 2);
}

TEST(Cli, ExperimentAndGnuplot) {
  const fs::path d = scratch("experiment");
  std::ofstream(d / "exp.json") << json{{"experiment", "choi-convergence"},
                                        {"n_qubits", 1},
                                        {"grid", {30, 60}},
                                        {"trials", 2},
                                        {"seed", 4}}
                                       .dump();
  const std::string cfg = (d / "exp.json").string();
  ASSERT_EQ(run("experiment --config " + cfg + " --out " + (d / "a").string() + " --records " + (d / "a/rec").string(), d).code, 0);
  ASSERT_EQ(run("experiment --config " + cfg + " --out " + (d / "b").string() + " --records " + (d / "b/rec").string(), d).code, 0);
  EXPECT_EQ(slurp(d / "a/results.csv"), slurp(d / "b/results.csv"));
  EXPECT_EQ(slurp(d / "a/rec/trial_001_leg_0.jsonl"), slurp(d / "b/rec/trial_001_leg_0.jsonl"));
  ASSERT_EQ(run("experiment --config " + cfg + " --seed 5 --out " + (d / "c").string(), d).code, 0);
  EXPECT_NE(slurp(d / "a/results.csv"), slurp(d / "c/results.csv"));
  EXPECT_FALSE(fs::exists(d / "c/records"));

  ASSERT_EQ(run("gnuplot --results " + (d / "a").string(), d).code, 0);
  EXPECT_TRUE(fs::exists(d / "a/convergence.gp"));

  std::ofstream(d / "bad.json") << json{{"experiment", "choi-convergence"}, {"colour", "red"}}.dump();
  EXPECT_EQ(run("experiment --config " + (d / "bad.json").string() + " --out " + (d / "x").string(), d).code, 2);
}
