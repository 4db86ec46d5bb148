#include <gtest/gtest.h>

#include "adaedit/error.hpp"
#include "adaedit/formats.hpp"
#include "support.hpp"

using namespace adaedit;

TEST(Formats, Names) {
  for (Format f : kAllFormats) EXPECT_EQ(parse_format(format_name(f)), f);
  EXPECT_EQ(format_name(Format::BlockDiff), "blockdiff");
  EXPECT_EQ(format_name(Format::FuncDiff), "funcdiff");
  EXPECT_FALSE(parse_format("BlockDiff").has_value());
  EXPECT_FALSE(parse_format("patch").has_value());
  EXPECT_TRUE(is_number_indexed(Format::MinUniDiff));
  EXPECT_TRUE(is_number_indexed(Format::UniDiff));
  EXPECT_FALSE(is_number_indexed(Format::ContentDiff));
}

TEST(Formats, Fence) {
  EXPECT_EQ(fence("x = 1", "python"), "```python\nx = 1\n```");
  const auto f = unfence("```diff\n@@ .. @@\n-a\n+b\n```");
  ASSERT_TRUE(f.has_value());
  EXPECT_EQ(f->tag, "diff");
  EXPECT_EQ(f->payload, "@@ .. @@\n-a\n+b");
  EXPECT_FALSE(unfence("plain text").has_value());

  const auto open = unfence("```python\nx = 1\n");
  ASSERT_TRUE(open.has_value());
  EXPECT_EQ(open->payload, "x = 1\n");

  // Payloads may contain fences themselves; the last bare ``` closes.
  const std::string inner = "s = '''\n```\n'''";
  const auto nested = unfence(fence(inner, "python") + "\ntrailing chatter");
  ASSERT_TRUE(nested.has_value());
  EXPECT_EQ(nested->payload, inner);
}

TEST(Formats, FullCodePayloadIsTarget) {
  const auto source = LineSequence::from_text("a\n");
  const auto target = LineSequence::from_text("b\nc");
  EXPECT_EQ(generate_payload(source, target, Format::FullCode), "b\nc");
  const auto out = apply_payload(source, "b\nc", Format::FullCode);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(*out.patched, target);
}

TEST(Formats, DiffFormatsRejectNoChange) {
  const auto s = LineSequence::from_text("a\n");
  for (Format f : kAllFormats) {
    if (f == Format::FullCode) continue;
    try {
      generate_payload(s, s, f);
      FAIL() << format_name(f);
    } catch (const Error& e) {
      EXPECT_EQ(e.reason(), Reason::NoChange);
    }
  }
}

TEST(Formats, MalformedPayloadIsAFailureNotAnException) {
  const auto s = LineSequence::from_text("a\n");
  for (Format f : kAllFormats) {
    if (f == Format::FullCode) continue;
    const auto out = apply_payload(s, "garbage without structure", f);
    EXPECT_FALSE(out.ok()) << format_name(f);
    EXPECT_EQ(out.failure, Reason::MalformedDiff) << format_name(f);
  }
}

TEST(Formats, ReconstructionIdentityOnCorpus) {
  const auto pairs = corpus::mutation_corpus(61, 150, 5, 200, 3);
  for (const auto& pair : pairs) {
    FormatOptions options;
    options.profile = &oracle::profile(pair.language);
    for (Format f : kAllFormats) {
      const std::string payload = generate_payload(pair.source, pair.target, f, options);
      const auto out = apply_payload(pair.source, payload, f, options);
      ASSERT_TRUE(out.ok()) << format_name(f) << " pair " << pair.id << ": " << out.detail;
      EXPECT_EQ(out.patched->to_text(), pair.target.to_text()) << format_name(f) << " pair " << pair.id;
      // Through a fence as well, the way replies arrive.
      const auto fenced = unfence(fence(payload, "diff"));
      ASSERT_TRUE(fenced.has_value());
      EXPECT_EQ(fenced->payload, payload);
    }
  }
}

TEST(Formats, StylesRoundTrip) {
  const auto pairs = corpus::mutation_corpus(62, 40, 5, 120, 0);
  for (const auto& pair : pairs) {
    for (HunkStyle style : {HunkStyle::Rewrite, HunkStyle::Interlaced, HunkStyle::SearchReplace}) {
      FormatOptions options;
      options.style = style;
      for (Format f : {Format::MinContentDiff, Format::ContentDiff, Format::BlockDiff, Format::FuncDiff}) {
        std::string payload;
        try {
          payload = generate_payload(pair.source, pair.target, f, options);
        } catch (const Error& e) {
          EXPECT_EQ(e.reason(), Reason::DelimiterCollision);
          continue;
        }
        const auto out = apply_payload(pair.source, payload, f, options);
        ASSERT_TRUE(out.ok()) << out.detail;
        EXPECT_EQ(out.patched->to_text(), pair.target.to_text());
      }
    }
  }
}
