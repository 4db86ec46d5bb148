#include "detail/changes.hpp"

#include <algorithm>

namespace adaedit::detail {

std::vector<Change> changes_from_hunks(std::span<const NumberedHunk> zero_context_hunks) {
  std::vector<Change> out;
  out.reserve(zero_context_hunks.size());
  for (const NumberedHunk& hunk : zero_context_hunks) {
    Change change;
    change.pos = hunk.old_position();
    for (const BodyLine& line : hunk.body) {
      if (line.kind == BodyKind::Inserted) {
        change.inserted.push_back(line.text);
        change.inserted_no_newline = line.no_newline;
      } else {
        ++change.deleted;
      }
    }
    out.push_back(std::move(change));
  }
  return out;
}

Spliced splice(const LineSequence& source, std::size_t begin, std::size_t end,
               std::span<const Change> changes, std::span<const std::size_t> owned) {
  std::vector<std::size_t> order(owned.begin(), owned.end());
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return changes[a].pos < changes[b].pos; });
  Spliced out;
  std::size_t i = begin;
  auto emit_source = [&](std::size_t to) {
    for (; i < to; ++i) {
      out.lines.push_back(source.lines[i]);
      out.no_newline = source.unterminated(i);
    }
  };
  for (std::size_t idx : order) {
    const Change& change = changes[idx];
    emit_source(change.pos);
    for (const std::string& line : change.inserted) out.lines.push_back(line);
    if (!change.inserted.empty()) out.no_newline = change.inserted_no_newline;
    i = change.end();
  }
  emit_source(end);
  if (out.lines.empty()) out.no_newline = false;
  return out;
}

void splice_into(LineSequence& text, std::size_t begin, std::size_t end,
                 const std::vector<std::string>& lines, bool lines_no_newline) {
  const bool at_end = end == text.lines.size();
  text.lines.erase(text.lines.begin() + static_cast<std::ptrdiff_t>(begin),
                   text.lines.begin() + static_cast<std::ptrdiff_t>(end));
  text.lines.insert(text.lines.begin() + static_cast<std::ptrdiff_t>(begin), lines.begin(), lines.end());
  if (at_end) {
    if (!lines.empty()) {
      text.trailing_newline = !lines_no_newline;
    } else if (begin > 0) {
      // The new last line used to be followed by another line.
      text.trailing_newline = true;
    }
  }
  if (text.lines.empty()) text.trailing_newline = false;
}

std::size_t occurrences_of_range(const LineSequence& hay, const LineSequence& source,
                                 std::size_t begin, std::size_t end) {
  std::span<const std::string> needle(source.lines.data() + begin, end - begin);
  const bool open = end > begin && source.unterminated(end - 1);
  return count_occurrences(hay, needle, open, 2);
}

} // namespace adaedit::detail
