#include <gtest/gtest.h>

#include "adaedit/patch.hpp"
#include "support.hpp"

using namespace adaedit;
using oracle::seq;

namespace {

ContentHunk hunk(std::vector<std::string> anchor, std::vector<std::string> replacement) {
  ContentHunk h;
  h.anchor = std::move(anchor);
  h.replacement = std::move(replacement);
  return h;
}

std::size_t matches(const LineSequence& hay, const std::vector<std::string>& anchor, int rung) {
  return locate_anchor(hay, anchor, false, rung).size();
}

} // namespace

TEST(LocateAnchor, Rungs) {
  const auto file = seq({"def f():", "    x = 1", "", "    return x"});
  EXPECT_EQ(locate_anchor(file, std::vector<std::string>{"    x = 1"}, false, 0),
            (std::vector<AnchorMatch>{{1, 2}}));

  const std::vector<std::string> trailing = {"    x = 1  "};
  EXPECT_EQ(matches(file, trailing, 0), 0u);
  EXPECT_EQ(matches(file, trailing, 1), 1u);

  const std::vector<std::string> indented = {"x = 1", "return x"};
  EXPECT_EQ(matches(file, {"x = 1"}, 1), 0u);
  EXPECT_EQ(matches(file, {"x = 1"}, 2), 1u);
  EXPECT_EQ(matches(file, indented, 2), 0u);
  EXPECT_EQ(matches(file, indented, 3), 1u);

  const std::vector<std::string> extra_blank = {"def f():", "", "    x = 1"};
  for (int rung = 0; rung <= 2; ++rung) EXPECT_EQ(matches(file, extra_blank, rung), 0u);
  const auto found = locate_anchor(file, extra_blank, false, 3);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_EQ(found[0], (AnchorMatch{0, 2}));
}

TEST(LocateAnchor, EmptyAndBlankAnchorsMatchNowhere) {
  const auto file = seq({"a", "", "b"});
  EXPECT_TRUE(locate_anchor(file, std::vector<std::string>{}, false, 0).empty());
  EXPECT_TRUE(locate_anchor(file, std::vector<std::string>{"", "  "}, false, 3).empty());
}

TEST(LocateAnchor, EndOfFileStateAtExactRung) {
  const auto file = seq({"a", "b"}, false);
  EXPECT_EQ(locate_anchor(file, std::vector<std::string>{"b"}, true, 0).size(), 1u);
  EXPECT_EQ(locate_anchor(file, std::vector<std::string>{"b"}, false, 0).size(), 0u);
}

TEST(ApplyContentDiff, ExactReplacement) {
  const std::vector<ContentHunk> hunks = {hunk({"b"}, {"x", "y"})};
  const auto out = apply_content_diff(seq({"a", "b", "c"}), hunks);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(*out.patched, seq({"a", "x", "y", "c"}));
  EXPECT_EQ(out.tolerance_used, (std::vector<int>{0}));
}

TEST(ApplyContentDiff, AmbiguousAnchorFails) {
  const std::vector<ContentHunk> hunks = {hunk({"b"}, {"x"})};
  const auto out = apply_content_diff(seq({"a", "b", "c", "b"}), hunks);
  EXPECT_FALSE(out.ok());
  EXPECT_EQ(out.failure, Reason::AmbiguousMatch);
  EXPECT_EQ(out.failed_hunk, 0u);
}

TEST(ApplyContentDiff, AmbiguityAtALowerRungIsFatal) {
  // Exact match is absent, rung 1 finds two: no further relaxation is tried.
  const std::vector<ContentHunk> hunks = {hunk({"b  "}, {"x"})};
  const auto out = apply_content_diff(seq({"a", "b", "b "}), hunks);
  EXPECT_EQ(out.failure, Reason::AmbiguousMatch);
}

TEST(ApplyContentDiff, MissingAnchorFails) {
  const std::vector<ContentHunk> hunks = {hunk({"a"}, {"x"}), hunk({"zzz"}, {"y"})};
  const auto out = apply_content_diff(seq({"a", "b"}), hunks);
  EXPECT_FALSE(out.ok());
  EXPECT_FALSE(out.patched.has_value());
  EXPECT_EQ(out.failure, Reason::NoMatch);
  EXPECT_EQ(out.failed_hunk, 1u);
}

TEST(ApplyContentDiff, ToleratedLocationKeepsReplacementVerbatim) {
  const std::vector<ContentHunk> hunks = {hunk({"x = 1"}, {"\tx = 2  "})};
  const auto out = apply_content_diff(seq({"def f():", "    x = 1   ", "    return x"}), hunks);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out.tolerance_used, (std::vector<int>{2}));
  EXPECT_EQ(out.patched->lines[1], "\tx = 2  ");
  EXPECT_EQ(out.patched->lines[0], "def f():");
  EXPECT_EQ(out.patched->lines[2], "    return x");
}

TEST(ApplyContentDiff, HunksApplyAgainstEvolvingText) {
  const std::vector<ContentHunk> hunks = {hunk({"a"}, {"b"}), hunk({"b"}, {"c"})};
  const auto out = apply_content_diff(seq({"a"}), hunks);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(*out.patched, seq({"c"}));
}

TEST(ApplyContentDiff, EmptyAnchorReplacesEverything) {
  const std::vector<ContentHunk> hunks = {hunk({}, {"new"})};
  const auto out = apply_content_diff(seq({"a", "b"}), hunks);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(*out.patched, seq({"new"}));
}

TEST(ApplyContentDiff, DeterministicAndPreservesUntouchedLines) {
  corpus::Rng rng(41);
  for (int i = 0; i < 300; ++i) {
    const LineSequence a = oracle::random_lines(rng, 3, 25);
    const std::size_t at = rng.below(a.size());
    std::vector<std::string> anchor = {a.lines[at]};
    if (at + 1 < a.size()) anchor.push_back(a.lines[at + 1]);
    std::vector<ContentHunk> hunks = {hunk(anchor, {"REPLACED"})};
    hunks[0].anchor_no_newline = a.unterminated(at + anchor.size() - 1);
    const auto first = apply_content_diff(a, hunks);
    const auto second = apply_content_diff(a, hunks);
    EXPECT_EQ(first.patched, second.patched);
    EXPECT_EQ(first.failure, second.failure);
    EXPECT_EQ(first.tolerance_used, second.tolerance_used);
    if (!first.ok()) {
      EXPECT_EQ(first.failure, Reason::AmbiguousMatch);
      continue;
    }
    // The unique match must be `at`, so everything else is untouched.
    const auto& p = first.patched->lines;
    ASSERT_EQ(p.size(), a.size() - anchor.size() + 1);
    for (std::size_t k = 0; k < at; ++k) EXPECT_EQ(p[k], a.lines[k]);
    EXPECT_EQ(p[at], "REPLACED");
    for (std::size_t k = at + anchor.size(); k < a.size(); ++k) EXPECT_EQ(p[k - anchor.size() + 1], a.lines[k]);
  }
}
