#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "adaedit/lines.hpp"
#include "adaedit/linediff.hpp"

namespace adaedit::detail {

/// One zero-context edit: delete `deleted` source lines starting at `pos`
/// (0-based) and put `inserted` in their place.
struct Change {
  std::size_t pos = 0;
  std::size_t deleted = 0;
  std::vector<std::string> inserted;
  bool inserted_no_newline = false;

  std::size_t end() const { return pos + deleted; }
};

std::vector<Change> changes_from_hunks(std::span<const NumberedHunk> zero_context_hunks);

struct Spliced {
  std::vector<std::string> lines;
  bool no_newline = false;
};

/// Target-side text of source lines [begin, end) with the `owned` changes
/// applied. Every owned change must lie within [begin, end].
Spliced splice(const LineSequence& source, std::size_t begin, std::size_t end,
               std::span<const Change> changes, std::span<const std::size_t> owned);

/// Replaces lines [begin, end) of `text` with `lines`, keeping the
/// trailing-newline flag consistent.
void splice_into(LineSequence& text, std::size_t begin, std::size_t end,
                 const std::vector<std::string>& lines, bool lines_no_newline);

/// Number of occurrences of source lines [begin, end) in `hay`, capped at 2.
std::size_t occurrences_of_range(const LineSequence& hay, const LineSequence& source,
                                 std::size_t begin, std::size_t end);

} // namespace adaedit::detail
