#include <gtest/gtest.h>

#include <algorithm>

#include "adaedit/contentdiff.hpp"
#include "adaedit/error.hpp"
#include "adaedit/patch.hpp"
#include "support.hpp"

using namespace adaedit;
using oracle::seq;

namespace {

ContentHunk example_hunk() {
  ContentHunk h;
  h.anchor = {"y = 2", "x = 1", "z = 3"};
  h.replacement = {"y = 2", "x = 9", "z = 3"};
  return h;
}

std::vector<std::string> distinct_lines(std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 1; i <= n; ++i) v.push_back("line " + std::to_string(i));
  return v;
}

Reason reason_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.reason();
  }
  ADD_FAILURE() << "no error thrown";
  return Reason::Usage;
}

bool contains_run(const std::vector<std::string>& outer, const std::vector<std::string>& inner) {
  return inner.empty() || std::search(outer.begin(), outer.end(), inner.begin(), inner.end()) != outer.end();
}

} // namespace

TEST(GenerateContentDiff, AmbiguousLineGrowsOneStep) {
  const auto source = seq({"x = 1", "y = 2", "x = 1", "z = 3"});
  const auto target = seq({"x = 1", "y = 2", "x = 9", "z = 3"});
  const auto hunks = generate_content_diff(source, target, 0);
  ASSERT_EQ(hunks.size(), 1u);
  EXPECT_EQ(hunks[0].anchor, example_hunk().anchor);
  EXPECT_EQ(hunks[0].replacement, example_hunk().replacement);
  EXPECT_EQ(hunks[0].anchor_span, (LineRange{2, 4}));
}

TEST(GenerateContentDiff, UniqueChangeNeedsNoContext) {
  const auto source = LineSequence::from_lines(distinct_lines(10));
  auto lines = distinct_lines(10);
  lines[4] = "changed";
  const auto target = LineSequence::from_lines(lines);
  auto hunks = generate_content_diff(source, target, 0);
  ASSERT_EQ(hunks.size(), 1u);
  EXPECT_EQ(hunks[0].anchor, (std::vector<std::string>{"line 5"}));
  EXPECT_EQ(hunks[0].replacement, (std::vector<std::string>{"changed"}));

  hunks = generate_content_diff(source, target, 3);
  ASSERT_EQ(hunks.size(), 1u);
  EXPECT_EQ(hunks[0].anchor.size(), 7u);
  EXPECT_EQ(hunks[0].anchor_span, (LineRange{2, 8}));

  // Near the top the minimum window is clamped; the anchor is already unique.
  lines = distinct_lines(10);
  lines[0] = "changed";
  hunks = generate_content_diff(source, LineSequence::from_lines(lines), 3);
  ASSERT_EQ(hunks.size(), 1u);
  EXPECT_EQ(hunks[0].anchor_span, (LineRange{1, 4}));
}

TEST(GenerateContentDiff, NoChange) {
  EXPECT_EQ(reason_of([] { generate_content_diff(seq({"a"}), seq({"a"}), 0); }), Reason::NoChange);
}

TEST(GenerateContentDiff, InsertionIntoEmptyFileUsesEmptyAnchor) {
  const auto hunks = generate_content_diff(seq({}, false), seq({"a", "b"}), 0);
  ASSERT_EQ(hunks.size(), 1u);
  EXPECT_TRUE(hunks[0].anchor.empty());
  const auto out = apply_content_diff(seq({}, false), hunks);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(*out.patched, seq({"a", "b"}));
}

TEST(GenerateContentDiff, AdjacentAnchorsMerge) {
  const auto source = LineSequence::from_lines(distinct_lines(10));
  auto lines = distinct_lines(10);
  lines[2] = "X";
  lines[4] = "Y";
  const auto hunks = generate_content_diff(source, LineSequence::from_lines(lines), 1);
  // Windows [2..4] and [4..6] overlap.
  ASSERT_EQ(hunks.size(), 1u);
  EXPECT_EQ(hunks[0].anchor_span, (LineRange{2, 6}));
}

TEST(GenerateContentDiff, UniquenessRoundTripAndMonotoneContext) {
  corpus::Rng rng(31);
  for (int i = 0; i < 400; ++i) {
    const LineSequence a = oracle::random_lines(rng, 0, 30);
    const LineSequence b = oracle::random_lines(rng, 0, 30);
    if (a == b) continue;
    std::vector<ContentHunk> minimal;
    for (std::size_t context : {0u, 1u, 3u}) {
      const auto hunks = generate_content_diff(a, b, context);
      for (const auto& h : hunks) {
        if (h.anchor.empty()) continue;
        EXPECT_EQ(oracle::occurrences(a, h.anchor, h.anchor_no_newline), 1u);
      }
      const auto out = apply_content_diff(a, hunks);
      ASSERT_TRUE(out.ok()) << out.detail;
      EXPECT_EQ(out.patched->to_text(), b.to_text());
      EXPECT_TRUE(std::all_of(out.tolerance_used.begin(), out.tolerance_used.end(), [](int r) { return r == 0; }));
      if (context == 0) {
        minimal = hunks;
      } else if (context == 3) {
        for (const auto& m : minimal) {
          const bool inside = std::any_of(hunks.begin(), hunks.end(), [&](const ContentHunk& h) {
            return h.anchor_span->contains(*m.anchor_span) && contains_run(h.anchor, m.anchor);
          });
          EXPECT_TRUE(inside);
        }
      }
    }
  }
}

TEST(RenderHunks, Examples) {
  const std::vector<ContentHunk> hunks = {example_hunk()};
  EXPECT_EQ(render_hunks(hunks, HunkStyle::Rewrite), "@@ .. @@\n-y = 2\n-x = 1\n-z = 3\n+y = 2\n+x = 9\n+z = 3\n");
  EXPECT_EQ(render_hunks(hunks, HunkStyle::Interlaced), "@@ .. @@\n y = 2\n-x = 1\n+x = 9\n z = 3\n");
  EXPECT_EQ(render_hunks(hunks, HunkStyle::SearchReplace),
            "<<<<<<< SEARCH\ny = 2\nx = 1\nz = 3\n=======\ny = 2\nx = 9\nz = 3\n>>>>>>> REPLACE\n");
}

TEST(RenderHunks, DelimiterCollision) {
  ContentHunk h = example_hunk();
  h.anchor.insert(h.anchor.begin() + 1, "=======");
  const std::vector<ContentHunk> hunks = {h};
  EXPECT_EQ(reason_of([&] { render_hunks(hunks, HunkStyle::SearchReplace); }), Reason::DelimiterCollision);
  EXPECT_NO_THROW(render_hunks(hunks, HunkStyle::Rewrite));
  ContentHunk g = example_hunk();
  g.replacement.push_back(">>>>>>> other");
  const std::vector<ContentHunk> more = {g};
  EXPECT_EQ(reason_of([&] { render_hunks(more, HunkStyle::SearchReplace); }), Reason::DelimiterCollision);
}

TEST(ParseContentDiff, Leniency) {
  const auto hunks = parse_content_diff("```diff\n@@ .. @@\n-a\n+b\n```", HunkStyle::Rewrite);
  ASSERT_EQ(hunks.size(), 1u);
  EXPECT_EQ(hunks[0].anchor, (std::vector<std::string>{"a"}));
  EXPECT_EQ(hunks[0].replacement, (std::vector<std::string>{"b"}));
  EXPECT_FALSE(hunks[0].anchor_span.has_value());
  EXPECT_EQ(reason_of([] { parse_content_diff("+++ garbage", HunkStyle::Rewrite); }), Reason::MalformedDiff);
  EXPECT_EQ(reason_of([] { parse_content_diff("no markers", HunkStyle::SearchReplace); }), Reason::MalformedDiff);
}

TEST(ParseContentDiff, RoundTripAndStyleEquivalence) {
  corpus::Rng rng(32);
  for (int i = 0; i < 300; ++i) {
    const LineSequence a = oracle::random_lines(rng, 1, 25);
    const LineSequence b = oracle::random_lines(rng, 0, 25);
    if (a == b) continue;
    auto hunks = generate_content_diff(a, b, rng.below(4));
    std::vector<ContentHunk> bare = hunks;
    for (auto& h : bare) h.anchor_span.reset();
    std::optional<std::string> result;
    for (HunkStyle style : {HunkStyle::Rewrite, HunkStyle::Interlaced, HunkStyle::SearchReplace}) {
      std::string text;
      try {
        text = render_hunks(hunks, style);
      } catch (const Error&) {
        continue;
      }
      const auto parsed = parse_content_diff(text, style);
      EXPECT_EQ(parsed, bare) << style_name(style);
      const auto out = apply_content_diff(a, parsed);
      ASSERT_TRUE(out.ok());
      if (result) EXPECT_EQ(out.patched->to_text(), *result);
      result = out.patched->to_text();
    }
    EXPECT_EQ(result, b.to_text());
  }
}

TEST(ParseContentDiff, NoNewlineMarkerSurvives) {
  const auto source = seq({"a", "b"}, false);
  const auto target = seq({"a", "c"}, false);
  const auto hunks = generate_content_diff(source, target, 0);
  for (HunkStyle style : {HunkStyle::Rewrite, HunkStyle::Interlaced, HunkStyle::SearchReplace}) {
    const auto out = apply_content_diff(source, parse_content_diff(render_hunks(hunks, style), style));
    ASSERT_TRUE(out.ok());
    EXPECT_EQ(out.patched->to_text(), "a\nc");
  }
}

TEST(HunkStyle, Names) {
  for (HunkStyle style : {HunkStyle::Rewrite, HunkStyle::Interlaced, HunkStyle::SearchReplace}) {
    EXPECT_EQ(parse_style(style_name(style)), style);
  }
  EXPECT_FALSE(parse_style("sideways").has_value());
}
