#include <gtest/gtest.h>

#include "adaedit/error.hpp"
#include "adaedit/linediff.hpp"
#include "support.hpp"

using namespace adaedit;
using oracle::seq;

namespace {

std::size_t changed_lines(const LineDiffScript& script) {
  std::size_t n = 0;
  for (const auto& run : script.runs) {
    if (run.kind != RunKind::Keep) n += run.lines.size();
  }
  return n;
}

NumberedHunk substitution(std::size_t line, const char* from, const char* to) {
  return NumberedHunk{line, 1, line, 1, {{BodyKind::Deleted, from}, {BodyKind::Inserted, to}}};
}

} // namespace

TEST(LineSequence, TextRoundTrip) {
  for (std::string text : {"", "a", "a\n", "\n", "\n\n", "a\nb", "a\nb\n", "a\r\nb\n", "  \n\tx"}) {
    EXPECT_EQ(LineSequence::from_text(text).to_text(), text) << text;
  }
  const LineSequence s = LineSequence::from_text("a\nb");
  EXPECT_EQ(s.lines, (std::vector<std::string>{"a", "b"}));
  EXPECT_FALSE(s.trailing_newline);
  EXPECT_TRUE(s.unterminated(1));
  EXPECT_FALSE(s.unterminated(0));
}

TEST(LineSequence, RandomBytesRoundTrip) {
  corpus::Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    std::string text(rng.below(40), ' ');
    for (char& c : text) c = "ab \n\t\r"[rng.below(6)];
    EXPECT_EQ(LineSequence::from_text(text).to_text(), text);
  }
}

TEST(LineSequence, CountOccurrencesMatchesNaiveScan) {
  corpus::Rng rng(12);
  for (int i = 0; i < 500; ++i) {
    const LineSequence hay = oracle::random_lines(rng, 0, 12);
    const LineSequence needle_seq = oracle::random_lines(rng, 1, 3);
    const bool unterminated = !needle_seq.trailing_newline;
    const std::size_t expected = oracle::occurrences(hay, needle_seq.lines, unterminated);
    EXPECT_EQ(count_occurrences(hay, needle_seq.lines, unterminated, 1000), expected);
    EXPECT_EQ(count_occurrences(hay, needle_seq.lines, unterminated, 2), std::min<std::size_t>(expected, 2));
  }
}

TEST(ComputeLineDiff, IdentityIsOneKeepRun) {
  const LineDiffScript script = compute_line_diff(seq({"a", "b", "c"}), seq({"a", "b", "c"}));
  ASSERT_EQ(script.runs.size(), 1u);
  EXPECT_EQ(script.runs[0].kind, RunKind::Keep);
  EXPECT_EQ(script.runs[0].lines.size(), 3u);
}

TEST(ComputeLineDiff, SingleSubstitution) {
  const LineDiffScript script = compute_line_diff(seq({"a", "b", "c"}), seq({"a", "x", "c"}));
  const std::vector<DiffRun> expected = {{RunKind::Keep, {"a"}},
                                         {RunKind::Delete, {"b"}},
                                         {RunKind::Insert, {"x"}},
                                         {RunKind::Keep, {"c"}}};
  EXPECT_EQ(script.runs, expected);
}

TEST(ComputeLineDiff, EmptySides) {
  EXPECT_TRUE(compute_line_diff(seq({}), seq({})).runs.empty());
  const auto ins = compute_line_diff(seq({}), seq({"a", "b"}));
  ASSERT_EQ(ins.runs.size(), 1u);
  EXPECT_EQ(ins.runs[0].kind, RunKind::Insert);
  const auto del = compute_line_diff(seq({"a", "b"}), seq({}));
  ASSERT_EQ(del.runs.size(), 1u);
  EXPECT_EQ(del.runs[0].kind, RunKind::Delete);
}

TEST(ComputeLineDiff, ReplayAndMinimalityOnRandomPairs) {
  corpus::Rng rng(13);
  for (int i = 0; i < 500; ++i) {
    const LineSequence a = oracle::random_lines(rng, 5, 40);
    const LineSequence b = oracle::random_lines(rng, 5, 40);
    const LineDiffScript script = compute_line_diff(a, b);
    const auto [old_side, new_side] = oracle::replay(script);
    EXPECT_EQ(old_side, a.lines);
    EXPECT_EQ(new_side, b.lines);
    // A shortest edit script changes exactly n + m - 2 * LCS lines.
    EXPECT_EQ(changed_lines(script), a.size() + b.size() - 2 * oracle::lcs(a, b));
    for (std::size_t r = 1; r < script.runs.size(); ++r) {
      EXPECT_NE(script.runs[r].kind, script.runs[r - 1].kind);
      // Deletions come before insertions inside a change region.
      EXPECT_FALSE(script.runs[r - 1].kind == RunKind::Insert && script.runs[r].kind == RunKind::Delete);
    }
  }
}

TEST(ComputeLineDiff, FinalLineNewlineStateIsAChange) {
  const LineDiffScript script = compute_line_diff(seq({"a", "b"}, true), seq({"a", "b"}, false));
  EXPECT_EQ(changed_lines(script), 2u);
}

TEST(GroupHunks, ZeroContextSubstitution) {
  const auto hunks = group_hunks(compute_line_diff(seq({"a", "b", "c"}), seq({"a", "x", "c"})), 0);
  ASSERT_EQ(hunks.size(), 1u);
  EXPECT_EQ(hunks[0].old_start, 2u);
  EXPECT_EQ(hunks[0].old_count, 1u);
  EXPECT_EQ(hunks[0].new_start, 2u);
  EXPECT_EQ(hunks[0].new_count, 1u);
}

TEST(GroupHunks, OverlappingWindowsMerge) {
  std::vector<std::string> a;
  for (int i = 1; i <= 10; ++i) a.push_back("l" + std::to_string(i));
  std::vector<std::string> b = a;
  b[1] = "X";
  b[5] = "Y";
  const auto hunks =
      group_hunks(compute_line_diff(LineSequence::from_lines(a), LineSequence::from_lines(b)), 3);
  ASSERT_EQ(hunks.size(), 1u);
  EXPECT_EQ(hunks[0].old_start, 1u);
  EXPECT_EQ(hunks[0].old_count, 9u);
}

TEST(GroupHunks, DisjointWindowsStaySeparate) {
  std::vector<std::string> a;
  for (int i = 1; i <= 30; ++i) a.push_back("l" + std::to_string(i));
  std::vector<std::string> b = a;
  b[1] = "X";
  b[19] = "Y";
  const auto hunks =
      group_hunks(compute_line_diff(LineSequence::from_lines(a), LineSequence::from_lines(b)), 3);
  ASSERT_EQ(hunks.size(), 2u);
  EXPECT_LT(hunks[0].old_start + hunks[0].old_count, hunks[1].old_start);
}

TEST(GroupHunks, ZeroContextNeighboursSeparatedByOneLineStaySeparate) {
  const auto hunks = group_hunks(compute_line_diff(seq({"a", "b", "c"}), seq({"x", "b", "y"})), 0);
  EXPECT_EQ(hunks.size(), 2u);
}

TEST(GroupHunks, CountsMatchBodiesAndContextIsVerbatim) {
  corpus::Rng rng(14);
  for (int i = 0; i < 300; ++i) {
    const LineSequence a = oracle::random_lines(rng, 0, 30);
    const LineSequence b = oracle::random_lines(rng, 0, 30);
    for (std::size_t context : {0u, 1u, 3u}) {
      for (const NumberedHunk& h : group_hunks(compute_line_diff(a, b), context)) {
        std::size_t old_lines = 0;
        std::size_t new_lines = 0;
        std::size_t pos = h.old_position();
        for (const BodyLine& line : h.body) {
          if (line.kind != BodyKind::Inserted) {
            ASSERT_LT(pos, a.size());
            EXPECT_EQ(line.text, a.lines[pos]);
            ++pos;
            ++old_lines;
          }
          if (line.kind != BodyKind::Deleted) ++new_lines;
        }
        EXPECT_EQ(old_lines, h.old_count);
        EXPECT_EQ(new_lines, h.new_count);
      }
    }
  }
}

TEST(RenderUnified, Examples) {
  const std::vector<NumberedHunk> hunks = {substitution(2, "b", "x")};
  EXPECT_EQ(render_unified(hunks, true), "@@ -2 +2 @@\n-b\n+x\n");
  EXPECT_EQ(render_unified(hunks, false), "@@ .. @@\n-b\n+x\n");
  EXPECT_EQ(render_unified({}, true), "");
}

TEST(RenderUnified, MatchesConventionalHeadersForInsertionsAndDeletions) {
  // Same numbering GNU diff -U0 prints for these pairs.
  auto render = [](const LineSequence& a, const LineSequence& b) {
    return render_unified(group_hunks(compute_line_diff(a, b), 0), true);
  };
  EXPECT_EQ(render(seq({"a", "b"}), seq({"a", "n", "b"})), "@@ -1,0 +2 @@\n+n\n");
  EXPECT_EQ(render(seq({"a", "b"}), seq({"n", "a", "b"})), "@@ -0,0 +1 @@\n+n\n");
  EXPECT_EQ(render(seq({"a", "b", "c"}), seq({"a", "c"})), "@@ -2 +1,0 @@\n-b\n");
  EXPECT_EQ(render(seq({"a", "b", "c", "d"}), seq({"a", "x", "y", "z", "d"})),
            "@@ -2,2 +2,3 @@\n-b\n-c\n+x\n+y\n+z\n");
  EXPECT_EQ(render(seq({"a"}, true), seq({"a"}, false)), "@@ -1 +1 @@\n-a\n+a\n\\ No newline at end of file\n");
}

TEST(ParseUnified, RoundTripsRenderedHunks) {
  corpus::Rng rng(15);
  for (int i = 0; i < 300; ++i) {
    const LineSequence a = oracle::random_lines(rng, 0, 20);
    const LineSequence b = oracle::random_lines(rng, 0, 20);
    const auto hunks = group_hunks(compute_line_diff(a, b), rng.below(4));
    if (hunks.empty()) continue;
    EXPECT_EQ(parse_unified(render_unified(hunks, true)), hunks);
    // Without headers only the bodies survive.
    const auto bare = parse_unified(render_unified(hunks, false));
    ASSERT_EQ(bare.size(), hunks.size());
    for (std::size_t k = 0; k < hunks.size(); ++k) EXPECT_EQ(bare[k].body, hunks[k].body);
  }
}

TEST(ParseUnified, Leniency) {
  const auto hunks = parse_unified("@@ -2 +2 @@\n-b\n+x");
  ASSERT_EQ(hunks.size(), 1u);
  EXPECT_EQ(hunks[0], substitution(2, "b", "x"));
  const auto with_preamble = parse_unified("Here is the diff:\n```diff\n@@ -2 +2 @@\n-b\n+x\n```\ntrailing words\n");
  ASSERT_EQ(with_preamble.size(), 1u);
  EXPECT_EQ(with_preamble[0], substitution(2, "b", "x"));
  EXPECT_EQ(parse_unified("--- a.py\n+++ b.py\n@@ -2 +2 @@\n-b\n+x\n").size(), 1u);
}

TEST(ParseUnified, Errors) {
  try {
    parse_unified("no header here");
    FAIL() << "expected MalformedDiff";
  } catch (const Error& e) {
    EXPECT_EQ(e.reason(), Reason::MalformedDiff);
  }
  EXPECT_THROW(parse_unified("@@ -1 +1 @@\n?what\n"), Error);
}

TEST(ApplyNumbered, Examples) {
  const LineSequence abc = seq({"a", "b", "c"});
  const std::vector<NumberedHunk> ok = {substitution(2, "b", "x")};
  auto out = apply_numbered(abc, ok);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(*out.patched, seq({"a", "x", "c"}));

  const std::vector<NumberedHunk> far = {substitution(9, "b", "x")};
  out = apply_numbered(abc, far);
  ASSERT_FALSE(out.ok());
  EXPECT_EQ(*out.failure, Reason::MalformedDiff);
  EXPECT_FALSE(out.patched.has_value());

  const std::vector<NumberedHunk> mismatched = {substitution(2, "Z", "x")};
  out = apply_numbered(abc, mismatched);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(*out.patched, seq({"a", "x", "c"}));
}

TEST(ApplyNumbered, OverlappingHunksFail) {
  const std::vector<NumberedHunk> overlap = {
      NumberedHunk{1, 2, 1, 1, {{BodyKind::Deleted, "a"}, {BodyKind::Deleted, "b"}, {BodyKind::Inserted, "x"}}},
      substitution(2, "b", "y")};
  const auto out = apply_numbered(seq({"a", "b", "c"}), overlap);
  ASSERT_FALSE(out.ok());
  EXPECT_EQ(*out.failure, Reason::MalformedDiff);
}

TEST(ApplyNumbered, HunkSoundnessOnRandomPairs) {
  corpus::Rng rng(16);
  for (int i = 0; i < 500; ++i) {
    const LineSequence a = oracle::random_lines(rng, 0, 30);
    const LineSequence b = oracle::random_lines(rng, 0, 30);
    for (std::size_t context : {0u, 3u}) {
      const auto hunks = group_hunks(compute_line_diff(a, b), context);
      const auto out = apply_numbered(a, hunks);
      ASSERT_TRUE(out.ok()) << out.detail;
      EXPECT_EQ(*out.patched, b);
      if (hunks.empty()) continue;
      // Through the wire format as well.
      const auto reparsed = apply_numbered(a, parse_unified(render_unified(hunks, true)));
      ASSERT_TRUE(reparsed.ok());
      EXPECT_EQ(reparsed.patched->to_text(), b.to_text());
    }
  }
}

TEST(RenderNumberedSource, Examples) {
  EXPECT_EQ(render_numbered_source(seq({"a", "b"})), "1: a\n2: b\n");
  EXPECT_EQ(render_numbered_source(seq({})), "");
  EXPECT_EQ(render_numbered_source(seq({"", "x"})), "1: \n2: x\n");
}
