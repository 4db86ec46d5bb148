#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adaedit/lines.hpp"
#include "adaedit/outcome.hpp"

namespace adaedit {

enum class RunKind { Keep, Delete, Insert };

struct DiffRun {
  RunKind kind;
  std::vector<std::string> lines;

  friend bool operator==(const DiffRun&, const DiffRun&) = default;
};

/// Minimal line edit script. Within each changed region all deletions come
/// before all insertions, so runs alternate Keep / Delete / Insert.
struct LineDiffScript {
  std::vector<DiffRun> runs;
  bool old_trailing_newline = false;
  bool new_trailing_newline = false;
};

/// Shortest edit script over lines (Myers), exact string equality. A final
/// line without a newline never equals a terminated line with the same text.
LineDiffScript compute_line_diff(const LineSequence& source, const LineSequence& target);

enum class BodyKind { Context, Deleted, Inserted };

struct BodyLine {
  BodyKind kind;
  std::string text;
  /// Rendered as a following `\ No newline at end of file` marker.
  bool no_newline = false;

  friend bool operator==(const BodyLine&, const BodyLine&) = default;
};

/// One unified-diff hunk. Starts follow the conventional numbering: for a
/// zero-count side the start is the line *after which* the change sits (0 for
/// the file head).
struct NumberedHunk {
  std::size_t old_start = 0;
  std::size_t old_count = 0;
  std::size_t new_start = 0;
  std::size_t new_count = 0;
  std::vector<BodyLine> body;

  /// 0-based index of the first source line this hunk touches (or the
  /// insertion point for a zero-count hunk).
  std::size_t old_position() const { return old_count == 0 ? old_start : old_start - 1; }

  friend bool operator==(const NumberedHunk&, const NumberedHunk&) = default;
};

/// Groups a script into hunks with `context` lines around each change. Changes
/// whose context windows touch or overlap share a hunk.
std::vector<NumberedHunk> group_hunks(const LineDiffScript& script, std::size_t context);

/// `@@ -s,c +s,c @@` headers (",c" omitted when c == 1), or the bare
/// `@@ .. @@` marker when `with_line_header` is false.
std::string render_unified(std::span<const NumberedHunk> hunks, bool with_line_header);

/// Lenient unified-diff parser. Headerless `@@ .. @@` hunks come back with
/// zero starts and counts derived from the body.
std::vector<NumberedHunk> parse_unified(std::string_view text);

/// Applies hunks purely by their line numbers. Deleted and context body lines
/// are never compared against the source.
PatchOutcome apply_numbered(const LineSequence& source, std::span<const NumberedHunk> hunks);

/// `<n>: <line>` per line, 1-based.
std::string render_numbered_source(const LineSequence& source);

} // namespace adaedit
