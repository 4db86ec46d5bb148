#include <gtest/gtest.h>

#include <algorithm>

#include "adaedit/error.hpp"
#include "adaedit/select.hpp"
#include "support.hpp"

using namespace adaedit;

namespace {

const std::string kVocab = std::string(ADAEDIT_TEST_DATA) + "/bpe_code.json";

// 25 four-line functions, 100 lines in total.
LineSequence function_file() {
  std::vector<std::string> lines;
  for (int i = 1; i <= 25; ++i) {
    const std::string n = std::to_string(i);
    lines.insert(lines.end(), {"def step_" + n + "(x):", "    y = x * " + n, "    return y", ""});
  }
  return LineSequence::from_lines(lines);
}

EditSample one_line_edit() {
  EditSample s{"Fix step 13.", function_file(), function_file()};
  s.target.lines[49] = "    y = x * 130";
  return s;
}

std::string reply(const EditRepresentation& rep, const LanguageProfile& profile = python_profile()) {
  return fence(rep.payload, rep.kind == RepresentationKind::Full ? profile.fence_tag : "diff");
}

// Counts a fixed number of tokens per payload, chosen by the test.
class TableCounter final : public TokenCounter {
public:
  TableCounter(std::string full, std::size_t full_count, std::size_t other_count)
      : full_(std::move(full)), full_count_(full_count), other_count_(other_count) {}
  std::size_t count(std::string_view text) const override {
    if (text.empty()) return 0;
    return text == full_ ? full_count_ : other_count_;
  }
  const std::string& name() const override { return name_; }

private:
  std::string full_;
  std::size_t full_count_;
  std::size_t other_count_;
  std::string name_ = "table";
};

} // namespace

TEST(SelectFormat, OneLineEditInLongFilePicksDiff) {
  const CharCounter chars;
  const auto sel = select_format(one_line_edit(), Format::BlockDiff, chars);
  EXPECT_EQ(sel.representation.kind, RepresentationKind::Diff);
  EXPECT_EQ(sel.representation.format, Format::BlockDiff);
  ASSERT_TRUE(sel.tokens_diff.has_value());
  EXPECT_LT(*sel.tokens_diff * 10, sel.tokens_full);
}

TEST(SelectFormat, DisjointFilesPickFull) {
  EditSample s{"Rewrite.", oracle::seq({"a = 1", "b = 2", "c = 3"}), oracle::seq({"x = 9", "y = 8"})};
  const CharCounter chars;
  const auto sel = select_format(s, Format::ContentDiff, chars);
  EXPECT_EQ(sel.representation.kind, RepresentationKind::Full);
  EXPECT_EQ(sel.representation.format, Format::FullCode);
  EXPECT_EQ(sel.representation.payload, s.target.to_text());
}

TEST(SelectFormat, Errors) {
  const CharCounter chars;
  EditSample same{"", oracle::seq({"a"}), oracle::seq({"a"})};
  try {
    select_format(same, Format::BlockDiff, chars);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.reason(), Reason::NoChange);
  }
  try {
    select_format(one_line_edit(), Format::FullCode, chars);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.reason(), Reason::Usage);
  }
}

TEST(SelectFormat, EmptySourceForcesFull) {
  EditSample s{"Create.", LineSequence::from_text(""), oracle::seq({"x = 1"})};
  const WhitespaceCounter ws;
  EXPECT_EQ(select_format(s, Format::MinContentDiff, ws).representation.kind, RepresentationKind::Full);
}

TEST(SelectFormat, TieGoesToDiff) {
  const auto sample = one_line_edit();
  const TableCounter tie(sample.target.to_text(), 7, 7);
  const auto sel = select_format(sample, Format::BlockDiff, tie);
  EXPECT_EQ(sel.representation.kind, RepresentationKind::Diff);
  const TableCounter full_cheaper(sample.target.to_text(), 6, 7);
  EXPECT_EQ(select_format(sample, Format::BlockDiff, full_cheaper).representation.kind, RepresentationKind::Full);
}

TEST(SelectFormat, OptimalityOverCorpusForEveryCounter) {
  const auto pairs = corpus::mutation_corpus(71, 80, 5, 200, 4);
  for (const std::string& spec : std::vector<std::string>{"chars", "ws", "bpe:" + kVocab}) {
    const auto counter = make_counter(spec);
    for (const auto& pair : pairs) {
      FormatOptions options;
      options.profile = &oracle::profile(pair.language);
      const EditSample sample{"", pair.source, pair.target};
      for (Format f : {Format::MinUniDiff, Format::ContentDiff, Format::BlockDiff, Format::FuncDiff}) {
        const auto sel = select_format(sample, f, *counter, options);
        const std::size_t full = counter->count(pair.target.to_text());
        const std::size_t diff = counter->count(generate_payload(pair.source, pair.target, f, options));
        const std::size_t chosen = counter->count(sel.representation.payload);
        EXPECT_EQ(sel.tokens_full, full);
        if (pair.source.empty()) {
          EXPECT_EQ(sel.representation.kind, RepresentationKind::Full);
          continue;
        }
        EXPECT_EQ(sel.tokens_diff, diff);
        EXPECT_EQ(chosen, std::min(full, diff)) << spec;
        EXPECT_EQ(sel.representation.kind, diff <= full ? RepresentationKind::Diff : RepresentationKind::Full);
      }
    }
  }
}

TEST(TrainingRecord, PromptAndResponse) {
  const EditSample s{"Do it.", oracle::seq({"a = 1"}), oracle::seq({"a = 2"})};
  const auto full = fixed_representation(s, Format::FullCode);
  auto record = build_training_record(s, full, python_profile());
  EXPECT_EQ(record.prompt, "### Instruction\nDo it.\n\n### Input Code\n```python\na = 1\n\n```\n\n### Response\n");
  EXPECT_EQ(record.response, "```python\na = 2\n\n```");

  const auto diff = fixed_representation(s, Format::MinContentDiff);
  record = build_training_record(s, diff, python_profile());
  EXPECT_TRUE(record.response.starts_with("```diff\n"));
  EXPECT_TRUE(record.response.ends_with("\n```"));
  EXPECT_TRUE(record.prompt.ends_with("### Response\n"));

  record = build_training_record(s, full, python_profile(), std::string_view("1: a = 1\n"));
  EXPECT_NE(record.prompt.find("```python\n1: a = 1\n\n```"), std::string::npos);
}

TEST(TrainingRecord, InferencePrefix) {
  EXPECT_EQ(inference_prefix(Format::FullCode, false, python_profile()), "```python\n");
  EXPECT_EQ(inference_prefix(Format::BlockDiff, false, python_profile()), "```diff\n");
  EXPECT_EQ(inference_prefix(Format::BlockDiff, true, python_profile()), "```");
  EXPECT_EQ(inference_prefix(Format::FullCode, false, javascript_profile()), "```javascript\n");
}

TEST(Classify, Deviation) {
  EXPECT_DOUBLE_EQ(selection_deviation(10, 10), 0.0);
  EXPECT_NEAR(selection_deviation(100, 60), 0.6667, 1e-3);
  EXPECT_DOUBLE_EQ(selection_deviation(12, 10), 0.2);
}

TEST(Classify, OptimalRepliesAreCorrect) {
  const auto pairs = corpus::mutation_corpus(72, 60, 5, 150, 0);
  for (const std::string spec : {"chars", "ws"}) {
    const auto counter = make_counter(spec);
    for (const auto& pair : pairs) {
      const EditSample sample{"", pair.source, pair.target};
      const auto sel = select_format(sample, Format::BlockDiff, *counter);
      EXPECT_EQ(classify_selection(reply(sel.representation), sample, Format::BlockDiff, *counter),
                SelectionCategory::Correct)
          << pair.id;
    }
  }
}

TEST(Classify, InflatedRepliesLandInTheComputedBucket) {
  const auto sample = one_line_edit();
  const std::string full_text = sample.target.to_text();
  const auto full = fixed_representation(sample, Format::FullCode);
  // Diff 40% cheaper than full: full has 100, diff 60, deviation 2/3.
  EXPECT_EQ(classify_selection(reply(full), sample, Format::BlockDiff, TableCounter(full_text, 100, 60)),
            SelectionCategory::BiasGT50);
  EXPECT_EQ(classify_selection(reply(full), sample, Format::BlockDiff, TableCounter(full_text, 115, 100)),
            SelectionCategory::BiasLE20);
  EXPECT_EQ(classify_selection(reply(full), sample, Format::BlockDiff, TableCounter(full_text, 140, 100)),
            SelectionCategory::BiasLE50);
  EXPECT_EQ(classify_selection(reply(full), sample, Format::BlockDiff, TableCounter(full_text, 100, 100)),
            SelectionCategory::Correct);
  const auto diff = fixed_representation(sample, Format::BlockDiff);
  EXPECT_EQ(classify_selection(reply(diff), sample, Format::BlockDiff, TableCounter(full_text, 50, 90)),
            SelectionCategory::BiasGT50);
  EXPECT_EQ(classify_selection(reply(diff), sample, Format::BlockDiff, TableCounter(full_text, 50, 60)),
            SelectionCategory::BiasLE20);
}

TEST(Classify, NoValidEditIsNoChange) {
  const auto sample = one_line_edit();
  const CharCounter chars;
  const std::string echo = fence(sample.source.to_text(), "python");
  EXPECT_EQ(classify_selection(echo, sample, Format::BlockDiff, chars), SelectionCategory::NoChange);
  EXPECT_EQ(classify_selection("```diff\n@@ .. @@\n-nothing like this\n+x\n```", sample, Format::BlockDiff, chars),
            SelectionCategory::NoChange);
  EXPECT_EQ(classify_selection("no fence at all", sample, Format::BlockDiff, chars), SelectionCategory::NoChange);
  EXPECT_EQ(category_name(SelectionCategory::NoChange), "nochange");
}
