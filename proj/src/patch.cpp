#include "adaedit/patch.hpp"

#include <string_view>

#include "detail/changes.hpp"

namespace adaedit {
namespace {

constexpr std::string_view kSpace = " \t\r\f\v";

std::string_view rstrip(std::string_view s) {
  const std::size_t last = s.find_last_not_of(kSpace);
  return last == std::string_view::npos ? std::string_view{} : s.substr(0, last + 1);
}

std::string_view strip(std::string_view s) {
  s = rstrip(s);
  const std::size_t first = s.find_first_not_of(kSpace);
  return first == std::string_view::npos ? std::string_view{} : s.substr(first);
}

std::string_view normalize(std::string_view s, int rung) { return rung == 1 ? rstrip(s) : strip(s); }

std::vector<AnchorMatch> locate_exact(const LineSequence& hay, std::span<const std::string> anchor,
                                      bool anchor_no_newline) {
  std::vector<AnchorMatch> out;
  const std::size_t n = hay.size();
  const std::size_t m = anchor.size();
  for (std::size_t pos = 0; pos + m <= n; ++pos) {
    bool match = true;
    for (std::size_t i = 0; i < m && match; ++i) match = hay.lines[pos + i] == anchor[i];
    if (match && hay.unterminated(pos + m - 1) == anchor_no_newline) out.push_back({pos, pos + m});
  }
  return out;
}

std::vector<AnchorMatch> locate_normalized(const LineSequence& hay, std::span<const std::string> anchor,
                                           int rung) {
  std::vector<AnchorMatch> out;
  const std::size_t n = hay.size();
  const std::size_t m = anchor.size();
  std::vector<std::string_view> needle;
  needle.reserve(m);
  for (const std::string& line : anchor) needle.push_back(normalize(line, rung));
  for (std::size_t pos = 0; pos + m <= n; ++pos) {
    bool match = true;
    for (std::size_t i = 0; i < m && match; ++i) match = normalize(hay.lines[pos + i], rung) == needle[i];
    if (match) out.push_back({pos, pos + m});
  }
  return out;
}

std::vector<AnchorMatch> locate_skipping_blanks(const LineSequence& hay, std::span<const std::string> anchor) {
  std::vector<std::string_view> needle;
  for (const std::string& line : anchor) {
    const std::string_view s = strip(line);
    if (!s.empty()) needle.push_back(s);
  }
  std::vector<AnchorMatch> out;
  if (needle.empty()) return out;
  std::vector<std::size_t> index;
  std::vector<std::string_view> lines;
  for (std::size_t i = 0; i < hay.size(); ++i) {
    const std::string_view s = strip(hay.lines[i]);
    if (s.empty()) continue;
    index.push_back(i);
    lines.push_back(s);
  }
  const std::size_t m = needle.size();
  for (std::size_t p = 0; p + m <= lines.size(); ++p) {
    bool match = true;
    for (std::size_t i = 0; i < m && match; ++i) match = lines[p + i] == needle[i];
    if (match) out.push_back({index[p], index[p + m - 1] + 1});
  }
  return out;
}

} // namespace

std::vector<AnchorMatch> locate_anchor(const LineSequence& haystack, std::span<const std::string> anchor,
                                       bool anchor_no_newline, int rung) {
  if (anchor.empty()) return {};
  switch (rung) {
  case 0: return locate_exact(haystack, anchor, anchor_no_newline);
  case 1:
  case 2: return locate_normalized(haystack, anchor, rung);
  case 3: return locate_skipping_blanks(haystack, anchor);
  default: return {};
  }
}

PatchOutcome apply_content_diff(const LineSequence& source, std::span<const ContentHunk> hunks) {
  LineSequence text = source;
  std::vector<int> rungs;
  rungs.reserve(hunks.size());
  for (std::size_t h = 0; h < hunks.size(); ++h) {
    const ContentHunk& hunk = hunks[h];
    if (hunk.anchor.empty() && hunk.replacement.empty()) {
      return PatchOutcome::fail(Reason::MalformedDiff, "hunk has neither anchor nor replacement", h);
    }
    if (hunk.anchor.empty()) {
      text = LineSequence::from_lines(hunk.replacement, !hunk.replacement_no_newline);
      rungs.push_back(kExactRung);
      continue;
    }
    bool applied = false;
    for (int rung = kExactRung; rung <= kMaxRung && !applied; ++rung) {
      const std::vector<AnchorMatch> matches = locate_anchor(text, hunk.anchor, hunk.anchor_no_newline, rung);
      if (matches.size() > 1) {
        return PatchOutcome::fail(Reason::AmbiguousMatch,
                                  "anchor of hunk " + std::to_string(h + 1) + " matches " +
                                      std::to_string(matches.size()) + " regions",
                                  h);
      }
      if (matches.size() == 1) {
        detail::splice_into(text, matches[0].begin, matches[0].end, hunk.replacement,
                            hunk.replacement_no_newline);
        rungs.push_back(rung);
        applied = true;
      }
    }
    if (!applied) {
      return PatchOutcome::fail(Reason::NoMatch, "anchor of hunk " + std::to_string(h + 1) + " not found", h);
    }
  }
  return PatchOutcome::success(std::move(text), std::move(rungs));
}

} // namespace adaedit
