#include "adaedit/lines.hpp"

namespace adaedit {

LineSequence LineSequence::from_text(std::string_view text) {
  LineSequence seq;
  std::size_t begin = 0;
  while (begin < text.size()) {
    const std::size_t nl = text.find('\n', begin);
    if (nl == std::string_view::npos) {
      seq.lines.emplace_back(text.substr(begin));
      seq.trailing_newline = false;
      return seq;
    }
    seq.lines.emplace_back(text.substr(begin, nl - begin));
    begin = nl + 1;
  }
  seq.trailing_newline = !seq.lines.empty();
  return seq;
}

LineSequence LineSequence::from_lines(std::vector<std::string> lines, bool trailing_newline) {
  LineSequence seq;
  seq.trailing_newline = trailing_newline && !lines.empty();
  seq.lines = std::move(lines);
  return seq;
}

std::string LineSequence::to_text() const { return slice_text(0, lines.size()); }

std::string LineSequence::slice_text(std::size_t begin, std::size_t end) const {
  std::size_t total = 0;
  for (std::size_t i = begin; i < end; ++i) total += lines[i].size() + 1;
  std::string out;
  out.reserve(total);
  for (std::size_t i = begin; i < end; ++i) {
    out += lines[i];
    if (!unterminated(i)) out += '\n';
  }
  return out;
}

std::size_t count_occurrences(const LineSequence& hay, std::span<const std::string> needle,
                              bool needle_unterminated, std::size_t limit) {
  const std::size_t n = hay.size();
  const std::size_t m = needle.size();
  if (m == 0) return n == 0 ? 1 : limit;
  if (m > n) return 0;
  std::size_t found = 0;
  for (std::size_t pos = 0; pos + m <= n; ++pos) {
    if (hay.lines[pos] != needle[0]) continue;
    bool match = true;
    for (std::size_t i = 1; i < m && match; ++i) match = hay.lines[pos + i] == needle[i];
    if (!match) continue;
    if (hay.unterminated(pos + m - 1) != needle_unterminated) continue;
    if (++found >= limit) break;
  }
  return found;
}

} // namespace adaedit
