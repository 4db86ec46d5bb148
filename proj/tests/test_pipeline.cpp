#include <gtest/gtest.h>

#include <json.hpp>
#include <sstream>

#include "adaedit/pipeline.hpp"
#include "support.hpp"

using namespace adaedit;
using nlohmann::json;

namespace {

std::string sample_line(const std::string& id, const std::string& instruction, const std::string& input,
                        const std::string& output) {
  return json{{"id", id}, {"instruction", instruction}, {"input", input}, {"output", output}}.dump();
}

std::string long_source() {
  std::string text;
  for (int i = 1; i <= 40; ++i) {
    const std::string n = std::to_string(i);
    text += "def step_" + n + "(x):\n    return x + " + n + "\n\n";
  }
  return text;
}

std::string fixture() {
  std::string src = long_source();
  std::string tgt = src;
  tgt.replace(tgt.find("return x + 7\n"), 13, "return x + 70\n");
  return sample_line("syntax", "Break it.", "x = 1\n", "def f(:\n") + "\n" +
         sample_line("same", "Nothing.", "x = 1\n", "x = 1\n") + "\n" +
         sample_line("valid", "Change step 7.", src, tgt) + "\n";
}

std::vector<json> read_records(const std::string& text) {
  std::vector<json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(json::parse(line));
  return out;
}

std::vector<PrepInput> corpus_inputs(std::uint64_t seed, std::size_t n) {
  std::vector<PrepInput> inputs;
  const auto pairs = corpus::mutation_corpus(seed, n, 5, 150, 0);
  for (const auto& pair : pairs) {
    PrepInput input;
    input.sample_id = std::to_string(pair.id);
    input.sample = EditSample{"Edit.", pair.source, pair.target};
    inputs.push_back(std::move(input));
  }
  inputs.push_back(parse_sample_line("{\"instruction\": 3}", inputs.size()));
  return inputs;
}

} // namespace

TEST(PrepareDataset, FilterRulesOnFixture) {
  const CharCounter chars;
  PrepOptions options;
  options.format = Format::BlockDiff;
  options.adaptive = true;
  std::istringstream in(fixture());
  std::ostringstream out;
  const FilterReport report = prepare_dataset(in, out, options, chars);
  EXPECT_EQ(report, (FilterReport{1, 1, 1, 0}));
  const auto records = read_records(out.str());
  ASSERT_EQ(records.size(), 1u);
  const json& r = records[0];
  EXPECT_EQ(r["sample_id"], "valid");
  EXPECT_EQ(r["format"], "blockdiff");
  EXPECT_LT(r["tokens_diff"].get<std::size_t>(), r["tokens_full"].get<std::size_t>());
  std::vector<std::string> keys;
  for (auto it = r.begin(); it != r.end(); ++it) keys.push_back(it.key());
  std::sort(keys.begin(), keys.end());
  EXPECT_EQ(keys, (std::vector<std::string>{"format", "prompt", "response", "sample_id", "tokens_diff", "tokens_full"}));
  EXPECT_TRUE(r["response"].get<std::string>().starts_with("```diff\n"));
  EXPECT_TRUE(r["prompt"].get<std::string>().ends_with("### Response\n"));
  EXPECT_EQ(report_to_json(report), R"({"kept":1,"dropped_syntax":1,"dropped_nochange":1,"dropped_malformed":0})");
}

TEST(PrepareDataset, EmptyInput) {
  const CharCounter chars;
  std::istringstream in("");
  std::ostringstream out;
  EXPECT_EQ(prepare_dataset(in, out, PrepOptions{}, chars), FilterReport{});
  EXPECT_TRUE(out.str().empty());
}

TEST(PrepareDataset, MalformedLinesAreCounted) {
  const CharCounter chars;
  std::istringstream in("not json\n{\"instruction\": \"x\"}\n\n" + sample_line("ok", "i", "a = 1\n", "a = 2\n") + "\n");
  std::ostringstream out;
  const FilterReport report = prepare_dataset(in, out, PrepOptions{}, chars);
  EXPECT_EQ(report, (FilterReport{1, 0, 0, 2}));
}

TEST(PrepareDataset, AdaptivePayloadCountIsTheMinimum) {
  const WhitespaceCounter ws;
  PrepOptions options;
  options.adaptive = true;
  options.format = Format::ContentDiff;
  const auto inputs = corpus_inputs(81, 60);
  for (const auto& result : prepare_samples(inputs, options, ws, Execution::Serial)) {
    if (!result.record) continue;
    const auto fenced = unfence(result.record->response);
    ASSERT_TRUE(fenced.has_value());
    EXPECT_EQ(ws.count(fenced->payload), std::min(result.record->tokens_full, result.record->tokens_diff));
  }
}

TEST(PrepareDataset, ConservationAndParallelDeterminism) {
  const CharCounter chars;
  const auto inputs = corpus_inputs(82, 120);
  for (Format f : {Format::MinUniDiff, Format::BlockDiff, Format::FuncDiff}) {
    for (bool adaptive : {false, true}) {
      PrepOptions options;
      options.format = f;
      options.adaptive = adaptive;
      options.threads = 4;
      const auto serial = prepare_samples(inputs, options, chars, Execution::Serial);
      const auto parallel = prepare_samples(inputs, options, chars, Execution::Parallel);
      ASSERT_EQ(serial.size(), inputs.size());
      ASSERT_EQ(parallel.size(), inputs.size());
      FilterReport report;
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        EXPECT_EQ(serial[i].drop, parallel[i].drop);
        ASSERT_EQ(serial[i].record.has_value(), parallel[i].record.has_value());
        if (serial[i].record) {
          EXPECT_EQ(record_to_json(*serial[i].record), record_to_json(*parallel[i].record));
          ++report.kept;
        } else if (serial[i].drop == DropReason::Syntax) {
          ++report.dropped_syntax;
        } else if (serial[i].drop == DropReason::NoChange) {
          ++report.dropped_nochange;
        } else {
          EXPECT_EQ(serial[i].drop, DropReason::Malformed);
          ++report.dropped_malformed;
        }
      }
      EXPECT_EQ(report.total(), inputs.size());
      EXPECT_GE(report.dropped_malformed, 1u);
    }
  }
}

TEST(PrepareDataset, NumberedSourceForNumberIndexedFormats) {
  const CharCounter chars;
  const PrepInput input = parse_sample_line(sample_line("n", "i", "a = 1\nb = 2\n", "a = 1\nb = 3\n"), 0);
  PrepOptions options;
  options.format = Format::UniDiff;
  auto result = prepare_sample(input, options, chars);
  ASSERT_TRUE(result.record);
  EXPECT_NE(result.record->prompt.find("1: a = 1\n2: b = 2\n"), std::string::npos);
  EXPECT_NE(result.record->response.find("@@ -1,2 +1,2 @@"), std::string::npos);
  options.format = Format::ContentDiff;
  result = prepare_sample(input, options, chars);
  ASSERT_TRUE(result.record);
  EXPECT_EQ(result.record->prompt.find("1: a = 1"), std::string::npos);
}

TEST(PrepareDataset, FormatterHook) {
  const CharCounter chars;
  PrepOptions options;
  options.formatter_command = "tr -d ' '";
  // The spaces are all the formatter removes, so the pair becomes a no-op.
  const PrepInput input = parse_sample_line(sample_line("f", "i", "a = 1\n", "a=1\n"), 0);
  EXPECT_EQ(prepare_sample(input, options, chars).drop, DropReason::NoChange);
  EXPECT_EQ(run_formatter("cat", "x\n"), "x\n");
  EXPECT_THROW(run_formatter("exit 3", "x\n"), Error);
}

TEST(FirstRenderable, Rules) {
  const CharCounter chars;
  const std::string full = "```python\nx = 1\n```";
  EXPECT_EQ(first_renderable_tokens(full, chars), chars.count(full));
  const std::string one = "```diff\n@@ .. @@\n-a\n+b\n```";
  EXPECT_EQ(first_renderable_tokens(one, chars), chars.count(one));
  const std::string first = "```diff\n@@ .. @@\n-a\n+b\n";
  const std::string two = first + "@@ .. @@\n-c\n+d\n```";
  EXPECT_EQ(first_renderable_tokens(two, chars), chars.count(first));
  const std::string sr = "<<<<<<< SEARCH\na\n=======\nb\n>>>>>>> REPLACE\n";
  EXPECT_EQ(first_renderable_tokens("```diff\n" + sr + sr + "```", chars), chars.count("```diff\n" + sr));
  EXPECT_EQ(first_renderable_tokens("garbage", chars), chars.count("garbage"));
}

TEST(EvaluateUsability, GroundTruthOutputsAlwaysPatch) {
  const CharCounter chars;
  const auto pairs = corpus::mutation_corpus(83, 80, 5, 150, 0);
  for (Format f : {Format::FullCode, Format::MinContentDiff, Format::BlockDiff}) {
    std::vector<EvalInput> inputs;
    for (const auto& pair : pairs) {
      const std::string payload = generate_payload(pair.source, pair.target, f);
      inputs.push_back({std::to_string(pair.id), pair.source,
                        fence(payload, f == Format::FullCode ? "python" : "diff"), pair.target});
    }
    const auto report = evaluate_usability(inputs, Format::BlockDiff == f ? f : Format::MinContentDiff, chars);
    EXPECT_DOUBLE_EQ(report.patch_success_rate, 1.0) << format_name(f);
    EXPECT_LE(report.latency_tokens, report.cost_tokens);
    for (const auto& row : report.rows) {
      EXPECT_LE(row.latency_tokens, row.cost_tokens);
      EXPECT_EQ(row.matches_expected, true) << format_name(f) << " " << row.sample_id;
      if (f == Format::FullCode) EXPECT_EQ(row.latency_tokens, row.cost_tokens);
    }
    const auto serial = evaluate_usability(inputs, Format::MinContentDiff, chars, {}, Execution::Serial);
    const auto parallel = evaluate_usability(inputs, Format::MinContentDiff, chars, {}, Execution::Parallel, 4);
    EXPECT_EQ(report_to_json(serial), report_to_json(parallel));
  }
}

TEST(EvaluateUsability, OneAmbiguousOutput) {
  const CharCounter chars;
  std::vector<EvalInput> inputs;
  for (int i = 0; i < 5; ++i) {
    const auto source = LineSequence::from_text("a = " + std::to_string(i) + "\nb = 1\nb = 1\n");
    const auto target = LineSequence::from_text("a = " + std::to_string(i + 10) + "\nb = 1\nb = 1\n");
    inputs.push_back({std::to_string(i), source,
                      fence(generate_payload(source, target, Format::MinContentDiff), "diff"), std::nullopt});
  }
  inputs[2].output = "```diff\n@@ .. @@\n-b = 1\n+b = 2\n```";
  const auto report = evaluate_usability(inputs, Format::MinContentDiff, chars);
  EXPECT_DOUBLE_EQ(report.patch_success_rate, 4.0 / 5.0);
  EXPECT_EQ(report.rows[2].failure, Reason::AmbiguousMatch);
  EXPECT_FALSE(report.rows[2].patched);
}

TEST(EvaluateUsability, ParseEvalLine) {
  const auto input = parse_eval_line(R"({"sample_id": "s1", "input": "a\n", "response": "```python\nb\n```", "output": "b\n"})", 0);
  EXPECT_EQ(input.sample_id, "s1");
  EXPECT_EQ(input.source.to_text(), "a\n");
  ASSERT_TRUE(input.expected.has_value());
  EXPECT_EQ(input.expected->to_text(), "b\n");
  EXPECT_EQ(parse_eval_line(R"({"input": "a", "response": "r"})", 7).sample_id, "7");
  EXPECT_THROW(parse_eval_line("{}", 0), Error);
  const auto report = evaluate_usability(std::span<const EvalInput>(), Format::BlockDiff, CharCounter{});
  EXPECT_EQ(report.samples, 0u);
}
