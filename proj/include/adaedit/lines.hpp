#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace adaedit {

/// Inclusive 1-based line range. `end < start` denotes an empty range, so an
/// empty file spans [1..0].
struct LineRange {
  std::size_t start = 1;
  std::size_t end = 0;

  std::size_t size() const { return end >= start ? end - start + 1 : 0; }
  bool empty() const { return end < start; }
  bool contains(std::size_t line) const { return line >= start && line <= end; }
  bool contains(const LineRange& other) const {
    return other.empty() || (other.start >= start && other.end <= end);
  }
  bool overlaps(const LineRange& other) const {
    return !empty() && !other.empty() && other.start <= end && start <= other.end;
  }

  friend bool operator==(const LineRange&, const LineRange&) = default;
};

/// Text decomposed into newline-stripped lines. Only the final line can lack a
/// terminator, which is what `trailing_newline == false` records.
struct LineSequence {
  std::vector<std::string> lines;
  bool trailing_newline = false;

  static LineSequence from_text(std::string_view text);
  static LineSequence from_lines(std::vector<std::string> lines, bool trailing_newline = true);

  std::string to_text() const;

  std::size_t size() const { return lines.size(); }
  bool empty() const { return lines.empty(); }

  /// True for the final line of a text that does not end in a newline.
  bool unterminated(std::size_t index) const {
    return !trailing_newline && index + 1 == lines.size();
  }

  /// Text of lines [begin, end) (0-based), each followed by its terminator.
  std::string slice_text(std::size_t begin, std::size_t end) const;

  friend bool operator==(const LineSequence&, const LineSequence&) = default;
};

/// Counts the positions where `needle` occurs as a contiguous run of whole
/// lines in `hay`. A needle whose last line is flagged unterminated only
/// matches at the end of an unterminated text and vice versa. Counting stops
/// at `limit`.
std::size_t count_occurrences(const LineSequence& hay, std::span<const std::string> needle,
                              bool needle_unterminated, std::size_t limit = 2);

} // namespace adaedit
