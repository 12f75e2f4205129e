#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "optdesign/graph.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Output {
  int code = -1;
  std::vector<json> records;
  std::vector<std::string> raw;
};

Output run(const std::string& args) {
  const std::string cmd = std::string(OPTDESIGN_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  Output out;
  if (!pipe) return out;
  std::string text;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) text += buf;
  const int status = pclose(pipe);
  out.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    out.raw.push_back(line);
    out.records.push_back(json::parse(line, nullptr, false));
  }
  return out;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("optdesign_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string write(const std::string& name, const std::string& content) {
    const auto path = dir_ / name;
    std::ofstream(path) << content;
    return path.string();
  }
  fs::path dir_;
};

const char* kFano = "v=7 k=3\n1 2 3\n1 4 5\n1 6 7\n2 4 6\n2 5 7\n3 4 7\n3 5 6\n";

}  // namespace

TEST_F(Cli, ManifestComesFirst) {
  const auto path = write("fano.txt", kFano);
  const auto out = run("eval --design " + path);
  ASSERT_EQ(out.code, 0);
  ASSERT_GE(out.records.size(), 2u);
  const auto& m = out.records[0];
  EXPECT_EQ(m["type"], "manifest");
  EXPECT_EQ(m["command"], "eval");
  ASSERT_EQ(m["inputs"].size(), 1u);
  EXPECT_EQ(m["inputs"][0]["sha256"].get<std::string>().size(), 64u);
  EXPECT_EQ(out.records[1]["type"], "criteria");
  EXPECT_NEAR(out.records[1]["e_value"].get<double>(), 7.0 / 3.0, 1e-12);
}

TEST_F(Cli, EvalPetersenIsRecognisedAsGdd) {
  std::string text = "v=10 k=2\n";
  for (const auto& [u, v] : std::vector<std::pair<int, int>>{{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 1}, {1, 6}, {2, 7},
                                                               {3, 8}, {4, 9}, {5, 10}, {6, 8}, {8, 10}, {10, 7},
                                                               {7, 9}, {9, 6}})
    text += std::to_string(u) + " " + std::to_string(v) + "\n";
  const auto out = run("eval --design " + write("petersen.txt", text) + " --p 1");
  ASSERT_EQ(out.code, 0);
  const auto& rec = out.records[1];
  EXPECT_NEAR(rec["trace_c"].get<double>(), 15.0, 1e-12);
  EXPECT_EQ(rec["distinct_count"], 2);
}

TEST_F(Cli, EvalErrors) {
  EXPECT_EQ(run("eval --design " + write("bad.txt", "v=3 k=2\n1 9\n")).code, 2);
  EXPECT_EQ(run("eval --design " + write("split.txt", "v=4 k=2\n1 2\n3 4\n")).code, 3);
  EXPECT_EQ(run("eval --design " + (dir_ / "missing.txt").string()).code, 2);
  EXPECT_EQ(run("eval").code, 2);
  EXPECT_EQ(run("no-such-command").code, 2);
}

TEST_F(Cli, GddSpectrum) {
  const auto out = run("gdd-spectrum --m 3 --n 2 --k 2 --l1 0 --l2 1");
  ASSERT_EQ(out.code, 0);
  const auto& rec = out.records[1];
  EXPECT_EQ(rec["r"], 4);
  EXPECT_EQ(rec["spectrum"].size(), 2u);
  EXPECT_EQ(rec["distinct_count"], 2);
  EXPECT_EQ(run("gdd-spectrum --m 2 --n 2 --k 3 --l1 1 --l2 1").code, 3);
}

TEST_F(Cli, VerifyIneqSingleton) {
  const auto out = run("verify-ineq --m1 3 --m2 1 --theta1 1 --theta2 1.8 --p 2 --samples 3000 --seed 4");
  EXPECT_EQ(out.code, 0);
  const auto& rec = out.records.back();
  EXPECT_EQ(rec["type"], "inequality");
  EXPECT_EQ(rec["violations"], 0);
}

TEST_F(Cli, VerifyIneqSmallProblem) {
  const auto out = run("verify-ineq --m1 2 --m2 1 --theta1 1 --theta2 2 --p 1 --samples 100000 --seed 7");
  EXPECT_EQ(out.code, 0);
  EXPECT_GE(out.records.back()["min_gap"].get<double>(), -1e-12);
}

TEST_F(Cli, VerifyIneqFindsCounterexamples) {
  // Both groups larger than one: the sampler turns up points below the target.
  const auto out = run("verify-ineq --m1 4 --m2 5 --theta1 1 --theta2 2.5 --p 10 --samples 20000 --seed 1");
  EXPECT_EQ(out.code, 4);
  EXPECT_GT(out.records.back()["violations"].get<int>(), 0);
}

TEST_F(Cli, VerifyIneqRejectsBadProblem) {
  EXPECT_EQ(run("verify-ineq --m1 2 --m2 2 --theta1 1 --theta2 1 --p 1").code, 2);
}

TEST_F(Cli, EnumGraphsWritesFile) {
  const auto path = (dir_ / "g.g6").string();
  const auto out = run("enum-graphs 6 7 --out " + path);
  ASSERT_EQ(out.code, 0);
  EXPECT_EQ(out.records[1]["count"], 19);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("# ", 0), 0u);
  std::size_t n = 0;
  while (std::getline(in, line)) ++n;
  EXPECT_EQ(n, 19u);
  EXPECT_EQ(run("enum-graphs 11 3").code, 3);
}

TEST_F(Cli, SearchWritesDesign) {
  const auto path = (dir_ / "best.txt").string();
  const auto out = run("search 6 9 2 --criterion D --binary --restarts 5 --seed 2 --out " + path);
  ASSERT_EQ(out.code, 0);
  EXPECT_EQ(out.records.back()["spanning_trees"], 81);  // K_{3,3}
  EXPECT_EQ(run("eval --design " + path).code, 0);
  EXPECT_EQ(run("search 10 3 2").code, 3);
  EXPECT_EQ(run("search 6 9 2 --criterion Q").code, 2);
}

TEST_F(Cli, SearchTrace) {
  const auto out = run("search 5 6 2 --criterion A --restarts 2 --iterations 100 --trace");
  ASSERT_EQ(out.code, 0);
  std::size_t traces = 0;
  for (const auto& r : out.records) traces += r["type"] == "trace";
  EXPECT_GE(traces, 2u);
}

TEST_F(Cli, KktCheck) {
  EXPECT_EQ(run("kkt-check --point " + write("c.json", R"({"m1":2,"m2":3,"theta1":1,"theta2":2,"p":1,"canonical":true,"tolerance":1e-10})"))
                .code,
            0);
  const auto bad = run("kkt-check --point " + write("z.json", R"({"m1":2,"m2":3,"theta1":1,"theta2":2,"p":1,"e":[1,1,2,2,2]})"));
  EXPECT_EQ(bad.code, 4);
  EXPECT_EQ(run("kkt-check --point " + write("m.json", "{not json")).code, 5);
  EXPECT_EQ(run("kkt-check --point " + write("i.json", R"({"m1":2,"m2":3,"theta1":3,"theta2":2,"p":1,"canonical":true})"))
                .code,
            2);
}

TEST_F(Cli, VerifyPetersenOnFile) {
  const auto g6 = optdesign::encode_graph6(optdesign::petersen());
  EXPECT_EQ(run("verify-petersen --graphs " + write("p.g6", g6 + "\n")).code, 0);
  EXPECT_EQ(run("verify-petersen --graphs " + write("corrupt.g6", g6 + "\n!!!\n")).code, 5);
  EXPECT_EQ(run("verify-petersen --graphs " + write("small.g6", "Bw\n")).code, 5);
  auto fourteen = optdesign::petersen();
  const auto e = fourteen.edges().front();
  fourteen.remove_edge(e.first, e.second);
  EXPECT_EQ(run("verify-petersen --graphs " + write("m14.g6", optdesign::encode_graph6(fourteen) + "\n")).code, 5);
}

TEST_F(Cli, TheoremMainOnClassDir) {
  const auto cls = dir_ / "class";
  fs::create_directories(cls);
  ASSERT_EQ(run("enum-graphs 6 9 --out " + (cls / "all.g6").string()).code, 0);
  const auto cand = write("k33.txt", "v=6 k=2\n1 4\n1 5\n1 6\n2 4\n2 5\n2 6\n3 4\n3 5\n3 6\n");
  const auto out = run("theorem-main --candidate " + cand + " --class-dir " + cls.string() + " --p 1,2");
  EXPECT_EQ(out.code, 0);
  EXPECT_EQ(out.records.back()["consistent"], true);
  EXPECT_EQ(run("theorem-main --candidate " + cand).code, 2);
}
