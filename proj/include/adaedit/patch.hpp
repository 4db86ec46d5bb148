#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "adaedit/contentdiff.hpp"
#include "adaedit/lines.hpp"
#include "adaedit/outcome.hpp"

namespace adaedit {

/// Tolerance ladder for locating anchors, least to most permissive:
///   0  exact (including the end-of-file newline state)
///   1  trailing whitespace ignored
///   2  leading and trailing whitespace ignored
///   3  as 2, and blank lines skipped on both sides
/// Rungs only affect location; replacement lines are always inserted verbatim.
inline constexpr int kExactRung = 0;
inline constexpr int kMaxRung = 3;

struct AnchorMatch {
  std::size_t begin;  // 0-based first line of the matched region
  std::size_t end;    // one past the last matched line

  friend bool operator==(const AnchorMatch&, const AnchorMatch&) = default;
};

/// Every region of `haystack` matching `anchor` under `rung`. An empty anchor,
/// or at rung 3 an anchor made only of blank lines, matches nowhere.
std::vector<AnchorMatch> locate_anchor(const LineSequence& haystack, std::span<const std::string> anchor,
                                       bool anchor_no_newline, int rung);

/// Applies hunks in order against the evolving text. For each hunk the first
/// rung with exactly one match wins; two or more matches at any rung fail with
/// AmbiguousMatch, no match at any rung with NoMatch. An empty anchor replaces
/// the whole current text.
PatchOutcome apply_content_diff(const LineSequence& source, std::span<const ContentHunk> hunks);

} // namespace adaedit
