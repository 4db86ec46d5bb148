#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adaedit/lines.hpp"

namespace adaedit {

/// A content-addressed edit: the verbatim `anchor` run is located in the text
/// and replaced by `replacement`.
struct ContentHunk {
  std::vector<std::string> anchor;
  std::vector<std::string> replacement;
  bool anchor_no_newline = false;
  bool replacement_no_newline = false;
  /// Source lines the anchor was taken from; only set on generated hunks.
  std::optional<LineRange> anchor_span;

  friend bool operator==(const ContentHunk&, const ContentHunk&) = default;
};

enum class HunkStyle { Rewrite, Interlaced, SearchReplace };

std::string_view style_name(HunkStyle style);
std::optional<HunkStyle> parse_style(std::string_view name);

/// Zero-context hunks grown to `min_context` lines of symmetric context, then
/// one line per side per step until each anchor is unique in the source.
/// Overlapping or adjacent anchors are merged. Throws Error(NoChange).
///
/// Hunks are also guaranteed to locate uniquely when applied one after the
/// other, i.e. no earlier hunk's replacement duplicates a later anchor.
std::vector<ContentHunk> generate_content_diff(const LineSequence& source, const LineSequence& target,
                                               std::size_t min_context);

/// Throws Error(DelimiterCollision) for SearchReplace when a line equals one
/// of its delimiter lines or starts with `>>>>>>>`.
std::string render_hunks(std::span<const ContentHunk> hunks, HunkStyle style);

/// Rewrite and Interlaced share one grammar on the way in: ` ` lines belong to
/// both sides, `-` to the anchor, `+` to the replacement. A leading code fence
/// and anything after a closing fence are ignored. Throws Error(MalformedDiff).
std::vector<ContentHunk> parse_content_diff(std::string_view text, HunkStyle style);

} // namespace adaedit
