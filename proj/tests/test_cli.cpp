#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "adaedit/cli.hpp"
#include "adaedit/formats.hpp"
#include "support.hpp"

using namespace adaedit;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out;
  std::ostringstream err;
  const int status = run_cli(args, in, out, err);
  return {status, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) / ("adaedit_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& content) {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p.string();
  }

  fs::path dir_;
};

const char* kOld = "import os\n\ndef f(x):\n    if x:\n        return 1\n    return 2\n";
const char* kNew = "import os\n\ndef f(x):\n    if x:\n        return 10\n    return 2\n";

} // namespace

TEST_F(CliTest, DiffBlockdiff) {
  const auto r = run({"diff", write("a.py", kOld), write("b.py", kNew), "--format", "blockdiff"});
  EXPECT_EQ(r.status, kExitOk) << r.err;
  EXPECT_EQ(r.out, "```diff\n@@ .. @@\n-    if x:\n-        return 1\n+    if x:\n+        return 10\n\n```\n");
  const auto bare = run({"diff", write("a.py", kOld), write("b.py", kNew), "--format", "blockdiff", "--no-fence"});
  EXPECT_EQ(bare.out, "@@ .. @@\n-    if x:\n-        return 1\n+    if x:\n+        return 10\n");
}

TEST_F(CliTest, DiffNoChange) {
  const auto a = write("a.py", kOld);
  const auto r = run({"diff", a, a, "--format", "funcdiff"});
  EXPECT_EQ(r.status, kExitFailure);
  const auto error = nlohmann::json::parse(r.err);
  EXPECT_EQ(error["error"], "NoChange");
}

TEST_F(CliTest, UsageErrors) {
  const auto a = write("a.py", kOld);
  EXPECT_EQ(run({"diff", a, a, "--format", "nosuchformat"}).status, kExitUsage);
  EXPECT_EQ(run({"tree", a, "--lang", "cobol"}).status, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).status, kExitUsage);
  EXPECT_EQ(run({"diff", a}).status, kExitUsage);
  EXPECT_EQ(run({"diff", a, (dir_ / "missing.py").string()}).status, kExitUsage);
  EXPECT_EQ(run({"select", a, write("b.py", kNew), "--tokenizer", "bpe:/nope.json"}).status, kExitUsage);
}

TEST_F(CliTest, PatchAmbiguousAnchor) {
  const auto src = write("s.py", "x = 1\ny = 2\nx = 1\n");
  const auto d = write("d.patch", "```diff\n@@ .. @@\n-x = 1\n+x = 3\n```\n");
  const auto r = run({"patch", src, "--diff", d, "--format", "contentdiff"});
  EXPECT_EQ(r.status, kExitFailure);
  EXPECT_EQ(nlohmann::json::parse(r.err)["error"], "AmbiguousMatch");
}

TEST_F(CliTest, DiffThenPatchRoundTripsForEveryFormat) {
  const auto pairs = corpus::mutation_corpus(91, 15, 5, 80, 3);
  for (const auto& pair : pairs) {
    const std::string ext = pair.language == corpus::Language::Python ? ".py" : ".js";
    const auto a = write("a" + ext, pair.source.to_text());
    const auto b = write("b" + ext, pair.target.to_text());
    for (Format f : kAllFormats) {
      const std::string name(format_name(f));
      const auto d = run({"diff", a, b, "--format", name});
      ASSERT_EQ(d.status, kExitOk) << d.err;
      EXPECT_EQ(run({"diff", a, b, "--format", name}).out, d.out);
      const auto p = run({"patch", a, "--diff", "-", "--format", name}, d.out);
      ASSERT_EQ(p.status, kExitOk) << name << " " << p.err;
      EXPECT_EQ(p.out, pair.target.to_text()) << name << " pair " << pair.id;
    }
  }
}

TEST_F(CliTest, Tree) {
  const auto r = run({"tree", write("a.py", kOld)});
  EXPECT_EQ(r.status, kExitOk);
  EXPECT_EQ(r.out,
            "Root module [1..6]\n"
            "  Synthetic synthetic [1..2]\n"
            "  Function function_definition [3..6]\n"
            "    Control if_statement [4..5]\n");
  EXPECT_EQ(run({"tree", write("e.py", "")}).out, "Root module [1..0]\n");
}

TEST_F(CliTest, Select) {
  const auto r = run({"select", write("a.py", kOld), write("b.py", kNew), "--format", "blockdiff", "--tokenizer", "ws"});
  EXPECT_EQ(r.status, kExitOk) << r.err;
  EXPECT_NE(r.out.find("tokenizer: ws\n"), std::string::npos);
  EXPECT_NE(r.out.find("tokens_full: "), std::string::npos);
  EXPECT_NE(r.out.find("tokens_diff: "), std::string::npos);
  EXPECT_NE(r.out.find("```"), std::string::npos);
}

TEST_F(CliTest, PrepAndEval) {
  const std::string samples =
      nlohmann::json{{"id", "a"}, {"instruction", "Bump."}, {"input", kOld}, {"output", kNew}}.dump() + "\n" +
      nlohmann::json{{"id", "b"}, {"instruction", "Same."}, {"input", kOld}, {"output", kOld}}.dump() + "\n";
  const auto out_path = (dir_ / "records.jsonl").string();
  const auto report_path = (dir_ / "report.json").string();
  const auto r = run({"prep", "--in", write("s.jsonl", samples), "--out", out_path, "--report", report_path, "--format",
                      "blockdiff", "--adaptive", "--tokenizer", "chars"});
  EXPECT_EQ(r.status, kExitOk) << r.err;
  std::ifstream report(report_path);
  EXPECT_EQ(nlohmann::json::parse(report),
            nlohmann::json::parse(R"({"kept":1,"dropped_syntax":0,"dropped_nochange":1,"dropped_malformed":0})"));
  std::ifstream records(out_path);
  std::string line;
  ASSERT_TRUE(std::getline(records, line));
  const auto record = nlohmann::json::parse(line);
  EXPECT_EQ(record["sample_id"], "a");

  // Serial and parallel runs print the same bytes.
  const auto serial = run({"prep", "--format", "minunidiff", "--serial"}, samples);
  const auto parallel = run({"prep", "--format", "minunidiff", "--threads", "3"}, samples);
  EXPECT_EQ(serial.out, parallel.out);

  const std::string replies =
      nlohmann::json{{"sample_id", "a"}, {"input", kOld}, {"response", record["response"]}, {"output", kNew}}.dump() +
      "\n";
  const auto e = run({"eval", "--format", "blockdiff", "--tokenizer", "chars"}, replies);
  EXPECT_EQ(e.status, kExitOk) << e.err;
  const auto eval = nlohmann::json::parse(e.out);
  EXPECT_EQ(eval["patch_success_rate"], 1.0);
  EXPECT_LE(eval["latency_tokens"].get<double>(), eval["cost_tokens"].get<double>());
}

TEST_F(CliTest, Bench) {
  const auto r = run({"bench", "--synthesize", "300", "--seed", "5", "--format", "blockdiff"});
  EXPECT_EQ(r.status, kExitOk) << r.err;
  const auto report = nlohmann::json::parse(r.out);
  EXPECT_EQ(report["round_trip"], true);
  EXPECT_GE(report["lines"].get<std::size_t>(), 300u);
  for (const char* key : {"blocktree_seconds", "diff_seconds", "patch_seconds"}) EXPECT_GE(report[key].get<double>(), 0.0);
  const auto again = nlohmann::json::parse(run({"bench", "--synthesize", "300", "--seed", "5", "--format", "blockdiff"}).out);
  EXPECT_EQ(again["payload_bytes"], report["payload_bytes"]);

  const auto empty = run({"bench", write("e.py", ""), "--format", "blockdiff"});
  EXPECT_EQ(empty.status, kExitOk) << empty.err;
}

TEST(SanitizeUtf8, ReplacesInvalidBytes) {
  EXPECT_EQ(sanitize_utf8("ok \xce\xbb"), "ok \xce\xbb");
  EXPECT_EQ(sanitize_utf8("a\xff" "b"), "a\xef\xbf\xbd" "b");
}
