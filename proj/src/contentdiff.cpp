#include "adaedit/contentdiff.hpp"

#include <algorithm>
#include <array>

#include "adaedit/error.hpp"
#include "adaedit/linediff.hpp"
#include "detail/changes.hpp"

namespace adaedit {
namespace {

constexpr std::string_view kHunkMarker = "@@ .. @@";
constexpr std::string_view kSearch = "<<<<<<< SEARCH";
constexpr std::string_view kDivider = "=======";
constexpr std::string_view kReplace = ">>>>>>> REPLACE";
constexpr std::string_view kNoNewline = "\\ No newline at end of file";

using detail::Change;

struct Region {
  std::size_t begin;
  std::size_t end;
  std::vector<std::size_t> owned;
};

bool is_unique(const LineSequence& source, std::size_t begin, std::size_t end) {
  if (begin == end) return source.empty();
  return detail::occurrences_of_range(source, source, begin, end) == 1;
}

// One growth step: a line on each side that is not at a file boundary.
bool grow(Region& region, std::size_t n) {
  bool grew = false;
  if (region.begin > 0) {
    --region.begin;
    grew = true;
  }
  if (region.end < n) {
    ++region.end;
    grew = true;
  }
  return grew;
}

void grow_until_unique(const LineSequence& source, Region& region) {
  while (!is_unique(source, region.begin, region.end)) {
    if (!grow(region, source.size())) break;
  }
}

std::vector<Region> merge_touching(std::vector<Region> regions) {
  std::sort(regions.begin(), regions.end(), [](const Region& a, const Region& b) {
    return a.begin != b.begin ? a.begin < b.begin : a.end < b.end;
  });
  std::vector<Region> merged;
  for (Region& r : regions) {
    if (!merged.empty() && r.begin <= merged.back().end) {
      Region& last = merged.back();
      last.end = std::max(last.end, r.end);
      last.owned.insert(last.owned.end(), r.owned.begin(), r.owned.end());
    } else {
      merged.push_back(std::move(r));
    }
  }
  return merged;
}

void append_line(std::string& out, char prefix, const std::string& line) {
  out += prefix;
  out += line;
  out += '\n';
}

void append_marker(std::string& out) {
  out += kNoNewline;
  out += '\n';
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  while (begin < text.size()) {
    const std::size_t nl = text.find('\n', begin);
    if (nl == std::string_view::npos) {
      out.push_back(text.substr(begin));
      break;
    }
    out.push_back(text.substr(begin, nl - begin));
    begin = nl + 1;
  }
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

bool is_delimiter(std::string_view line) {
  // The parser closes a block at any line opening with the replace marker.
  return line == kSearch || line == kDivider || line.starts_with(">>>>>>>") || line == kNoNewline;
}

std::vector<ContentHunk> parse_unified_style(const std::vector<std::string_view>& lines) {
  std::vector<ContentHunk> hunks;
  // Which sides the last body line went to, for the no-newline marker.
  bool last_to_anchor = false;
  bool last_to_replacement = false;
  for (std::string_view line : lines) {
    if (line.starts_with("@@")) {
      hunks.emplace_back();
      last_to_anchor = last_to_replacement = false;
      continue;
    }
    if (hunks.empty()) continue;
    if (line.starts_with("```")) break;
    ContentHunk& hunk = hunks.back();
    const char prefix = line.empty() ? ' ' : line.front();
    const std::string body = line.empty() ? std::string{} : std::string(line.substr(1));
    switch (prefix) {
    case ' ':
      hunk.anchor.push_back(body);
      hunk.replacement.push_back(body);
      hunk.anchor_no_newline = hunk.replacement_no_newline = false;
      last_to_anchor = last_to_replacement = true;
      break;
    case '-':
      hunk.anchor.push_back(body);
      hunk.anchor_no_newline = false;
      last_to_anchor = true;
      last_to_replacement = false;
      break;
    case '+':
      hunk.replacement.push_back(body);
      hunk.replacement_no_newline = false;
      last_to_anchor = false;
      last_to_replacement = true;
      break;
    case '\\':
      if (last_to_anchor) hunk.anchor_no_newline = true;
      if (last_to_replacement) hunk.replacement_no_newline = true;
      break;
    default:
      throw Error(Reason::MalformedDiff, "unexpected diff body line: " + std::string(line));
    }
  }
  return hunks;
}

std::vector<ContentHunk> parse_search_replace(const std::vector<std::string_view>& lines) {
  enum class State { Outside, Search, Replace };
  std::vector<ContentHunk> hunks;
  State state = State::Outside;
  for (std::string_view line : lines) {
    switch (state) {
    case State::Outside:
      if (line.starts_with("<<<<<<<")) {
        hunks.emplace_back();
        state = State::Search;
      }
      break;
    case State::Search:
      if (line == kDivider) {
        state = State::Replace;
      } else if (line == kNoNewline) {
        hunks.back().anchor_no_newline = true;
      } else {
        hunks.back().anchor.emplace_back(line);
        hunks.back().anchor_no_newline = false;
      }
      break;
    case State::Replace:
      if (line.starts_with(">>>>>>>")) {
        state = State::Outside;
      } else if (line == kNoNewline) {
        hunks.back().replacement_no_newline = true;
      } else {
        hunks.back().replacement.emplace_back(line);
        hunks.back().replacement_no_newline = false;
      }
      break;
    }
  }
  if (state != State::Outside) throw Error(Reason::MalformedDiff, "unterminated search/replace block");
  return hunks;
}

} // namespace

std::string_view style_name(HunkStyle style) {
  switch (style) {
  case HunkStyle::Rewrite: return "rewrite";
  case HunkStyle::Interlaced: return "interlaced";
  case HunkStyle::SearchReplace: return "searchreplace";
  }
  return "rewrite";
}

std::optional<HunkStyle> parse_style(std::string_view name) {
  if (name == "rewrite") return HunkStyle::Rewrite;
  if (name == "interlaced" || name == "unified") return HunkStyle::Interlaced;
  if (name == "searchreplace" || name == "search-replace" || name == "search_replace") {
    return HunkStyle::SearchReplace;
  }
  return std::nullopt;
}

std::vector<ContentHunk> generate_content_diff(const LineSequence& source, const LineSequence& target,
                                               std::size_t min_context) {
  if (source == target) throw Error(Reason::NoChange, "source and target are identical");

  const std::vector<NumberedHunk> zero = group_hunks(compute_line_diff(source, target), 0);
  const std::vector<Change> changes = detail::changes_from_hunks(zero);
  const std::size_t n = source.size();

  std::vector<Region> regions;
  regions.reserve(changes.size());
  for (std::size_t i = 0; i < changes.size(); ++i) {
    Region region{changes[i].pos, changes[i].end(), {i}};
    for (std::size_t step = 0; step < min_context; ++step) {
      if (!grow(region, n)) break;
    }
    grow_until_unique(source, region);
    regions.push_back(std::move(region));
  }
  regions = merge_touching(std::move(regions));

  // Replay the hunks in order; a hunk whose anchor no longer locates exactly
  // once in the partially patched text grows another step.
  bool settled = false;
  while (!settled) {
    settled = true;
    LineSequence evolving = source;
    std::ptrdiff_t offset = 0;
    for (std::size_t i = 0; i < regions.size(); ++i) {
      Region& region = regions[i];
      if (region.begin != region.end &&
          detail::occurrences_of_range(evolving, source, region.begin, region.end) != 1) {
        grow(region, n);
        regions = merge_touching(std::move(regions));
        settled = false;
        break;
      }
      const detail::Spliced repl = detail::splice(source, region.begin, region.end, changes, region.owned);
      const auto at = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(region.begin) + offset);
      detail::splice_into(evolving, at, at + (region.end - region.begin), repl.lines, repl.no_newline);
      offset += static_cast<std::ptrdiff_t>(repl.lines.size()) -
                static_cast<std::ptrdiff_t>(region.end - region.begin);
    }
  }

  std::vector<ContentHunk> hunks;
  hunks.reserve(regions.size());
  for (const Region& region : regions) {
    ContentHunk hunk;
    hunk.anchor.assign(source.lines.begin() + static_cast<std::ptrdiff_t>(region.begin),
                       source.lines.begin() + static_cast<std::ptrdiff_t>(region.end));
    hunk.anchor_no_newline = region.end > region.begin && source.unterminated(region.end - 1);
    detail::Spliced repl = detail::splice(source, region.begin, region.end, changes, region.owned);
    hunk.replacement = std::move(repl.lines);
    hunk.replacement_no_newline = repl.no_newline;
    hunk.anchor_span = LineRange{region.begin + 1, region.end};
    hunks.push_back(std::move(hunk));
  }
  return hunks;
}

std::string render_hunks(std::span<const ContentHunk> hunks, HunkStyle style) {
  std::string out;
  for (const ContentHunk& hunk : hunks) {
    switch (style) {
    case HunkStyle::Rewrite:
      out += kHunkMarker;
      out += '\n';
      for (const std::string& line : hunk.anchor) append_line(out, '-', line);
      if (hunk.anchor_no_newline && !hunk.anchor.empty()) append_marker(out);
      for (const std::string& line : hunk.replacement) append_line(out, '+', line);
      if (hunk.replacement_no_newline && !hunk.replacement.empty()) append_marker(out);
      break;
    case HunkStyle::Interlaced: {
      out += kHunkMarker;
      out += '\n';
      const LineSequence before = LineSequence::from_lines(hunk.anchor, !hunk.anchor_no_newline);
      const LineSequence after = LineSequence::from_lines(hunk.replacement, !hunk.replacement_no_newline);
      const std::size_t whole = std::max(before.size(), after.size());
      const std::vector<NumberedHunk> body = group_hunks(compute_line_diff(before, after), whole);
      if (body.empty()) {
        for (std::size_t i = 0; i < before.size(); ++i) {
          append_line(out, ' ', before.lines[i]);
          if (before.unterminated(i)) append_marker(out);
        }
        break;
      }
      for (const BodyLine& line : body.front().body) {
        append_line(out, line.kind == BodyKind::Context ? ' ' : line.kind == BodyKind::Deleted ? '-' : '+',
                    line.text);
        if (line.no_newline) append_marker(out);
      }
      break;
    }
    case HunkStyle::SearchReplace:
      for (const auto* side : {&hunk.anchor, &hunk.replacement}) {
        for (const std::string& line : *side) {
          if (is_delimiter(line)) {
            throw Error(Reason::DelimiterCollision, "line collides with a search/replace delimiter: " + line);
          }
        }
      }
      out += kSearch;
      out += '\n';
      for (const std::string& line : hunk.anchor) {
        out += line;
        out += '\n';
      }
      if (hunk.anchor_no_newline && !hunk.anchor.empty()) append_marker(out);
      out += kDivider;
      out += '\n';
      for (const std::string& line : hunk.replacement) {
        out += line;
        out += '\n';
      }
      if (hunk.replacement_no_newline && !hunk.replacement.empty()) append_marker(out);
      out += kReplace;
      out += '\n';
      break;
    }
  }
  return out;
}

std::vector<ContentHunk> parse_content_diff(std::string_view text, HunkStyle style) {
  const std::vector<std::string_view> lines = split_lines(text);
  std::vector<ContentHunk> hunks =
      style == HunkStyle::SearchReplace ? parse_search_replace(lines) : parse_unified_style(lines);
  if (hunks.empty()) throw Error(Reason::MalformedDiff, "no hunks found");
  for (const ContentHunk& hunk : hunks) {
    if (hunk.anchor.empty() && hunk.replacement.empty()) {
      throw Error(Reason::MalformedDiff, "empty hunk");
    }
  }
  return hunks;
}

} // namespace adaedit
