#include <gtest/gtest.h>

#include <fstream>
#include <json.hpp>

#include "adaedit/error.hpp"
#include "adaedit/tokens.hpp"

using namespace adaedit;

namespace {

const std::string kVocab = std::string(ADAEDIT_TEST_DATA) + "/bpe_code.json";

nlohmann::json expected_cases() {
  std::ifstream in(std::string(ADAEDIT_TEST_DATA) + "/bpe_expected.json");
  return nlohmann::json::parse(in);
}

} // namespace

TEST(CharCounter, CountsCodePoints) {
  const CharCounter c;
  EXPECT_EQ(c.count(""), 0u);
  EXPECT_EQ(c.count("abc"), 3u);
  EXPECT_EQ(c.count("caf\xc3\xa9"), 4u);
  EXPECT_EQ(c.count("\xce\xbb\n"), 2u);
  EXPECT_EQ(c.count("\xff\xfe"), 2u);
  EXPECT_EQ(c.name(), "chars");
}

TEST(WhitespaceCounter, CountsWords) {
  const WhitespaceCounter c;
  EXPECT_EQ(c.count(""), 0u);
  EXPECT_EQ(c.count("a b c"), 3u);
  EXPECT_EQ(c.count("  a\n\tb  "), 2u);
  EXPECT_EQ(c.count(" \n "), 0u);
  EXPECT_EQ(c.name(), "ws");
}

TEST(BpeCounter, MatchesReferenceTokenizer) {
  const BpeCounter bpe(kVocab);
  for (const auto& c : expected_cases()) {
    const std::string text = c["text"];
    EXPECT_EQ(bpe.count(text), c["count"].get<std::size_t>()) << text;
    EXPECT_EQ(bpe.tokenize(text), c["tokens"].get<std::vector<std::string>>()) << text;
  }
}

TEST(BpeCounter, FixtureIncludesAOneKibSnippet) {
  const auto cases = expected_cases();
  EXPECT_GE(cases.back()["text"].get<std::string>().size(), 1024u);
}

TEST(BpeCounter, Unavailable) {
  for (const char* spec : {"bpe:/nonexistent/tokenizer.json", "bpe:", "sentencepiece", ""}) {
    try {
      make_counter(spec);
      FAIL() << spec;
    } catch (const Error& e) {
      EXPECT_EQ(e.reason(), Reason::CounterUnavailable) << spec;
    }
  }
  const std::string bad = ::testing::TempDir() + "/bad_tokenizer.json";
  std::ofstream(bad) << "{\"model\": {\"type\": \"Unigram\"}}";
  EXPECT_THROW(BpeCounter{bad}, Error);
}

TEST(Counters, Axioms) {
  const std::vector<std::string> texts = {"", "x", "def f():\n    pass\n", "a  b\n\nc", "\xce\xbb x \xf0\x9f\x99\x82"};
  for (const char* spec : {"chars", "ws"}) {
    const auto counter = make_counter(spec);
    EXPECT_EQ(counter->name(), spec);
    EXPECT_EQ(counter->count(""), 0u);
    for (const auto& t : texts) EXPECT_EQ(counter->count(t), counter->count(t));
  }
  const auto bpe = make_counter("bpe:" + kVocab);
  EXPECT_EQ(bpe->count(""), 0u);
  for (const auto& t : texts) EXPECT_EQ(bpe->count(t), bpe->count(t));
}

TEST(Counters, BpeIsThreadSafe) {
  const BpeCounter bpe(kVocab);
  const auto cases = expected_cases();
  std::vector<std::size_t> counts(64);
#pragma omp parallel for
  for (int i = 0; i < 64; ++i) counts[i] = bpe.count(cases[i % cases.size()]["text"].get<std::string>());
  for (int i = 0; i < 64; ++i) EXPECT_EQ(counts[i], cases[i % cases.size()]["count"].get<std::size_t>());
}

TEST(Pretokenize, Gpt2Pattern) {
  auto split = [](std::string_view s) {
    std::vector<std::string> out;
    for (auto p : gpt2_pretokenize(s)) out.emplace_back(p);
    return out;
  };
  EXPECT_EQ(split("it's a  test\n"), (std::vector<std::string>{"it", "'s", " a", " ", " test", "\n"}));
  EXPECT_EQ(split("x=12;"), (std::vector<std::string>{"x", "=", "12", ";"}));
  EXPECT_TRUE(split("").empty());
  std::string joined;
  for (const auto& p : split("  def  f(x):\n\t\treturn x\n  ")) joined += p;
  EXPECT_EQ(joined, "  def  f(x):\n\t\treturn x\n  ");
}

TEST(Counters, DefaultSpec) {
  unsetenv("ADAEDIT_TOKENIZER");
  EXPECT_EQ(default_counter_spec(), "chars");
  setenv("ADAEDIT_TOKENIZER", "ws", 1);
  EXPECT_EQ(default_counter_spec(), "ws");
  unsetenv("ADAEDIT_TOKENIZER");
}
