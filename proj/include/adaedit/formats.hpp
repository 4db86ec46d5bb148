#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "adaedit/blocktree.hpp"
#include "adaedit/contentdiff.hpp"
#include "adaedit/lines.hpp"
#include "adaedit/outcome.hpp"

namespace adaedit {

enum class Format { FullCode, MinUniDiff, UniDiff, MinContentDiff, ContentDiff, BlockDiff, FuncDiff };

inline constexpr std::array<Format, 7> kAllFormats = {Format::FullCode,       Format::MinUniDiff, Format::UniDiff,
                                                      Format::MinContentDiff, Format::ContentDiff, Format::BlockDiff,
                                                      Format::FuncDiff};

/// Lowercase wire name: fullcode, minunidiff, unidiff, mincontentdiff,
/// contentdiff, blockdiff, funcdiff.
std::string_view format_name(Format format);
std::optional<Format> parse_format(std::string_view name);

bool is_number_indexed(Format format);

struct FormatOptions {
  /// Hunk style for the content-addressed and structure-aware formats.
  HunkStyle style = HunkStyle::Rewrite;
  /// Context lines for unidiff and contentdiff; the min* formats always use 0.
  std::size_t context = 3;
  const LanguageProfile* profile = &python_profile();
};

/// The edit payload (no fences) turning `source` into `target`. For fullcode
/// this is the target text itself. Throws Error(NoChange) when the texts are
/// equal and a diff format is requested.
std::string generate_payload(const LineSequence& source, const LineSequence& target, Format format,
                             const FormatOptions& options = {});

/// Patches `source` with a payload in `format`. Parse errors come back as a
/// MalformedDiff failure, never as an exception.
PatchOutcome apply_payload(const LineSequence& source, std::string_view payload, Format format,
                           const FormatOptions& options = {});

/// "```" + tag + "\n" + payload + "\n```".
std::string fence(std::string_view payload, std::string_view tag);

struct Fenced {
  std::string tag;
  std::string payload;
};

/// Inverse of `fence`. The closing fence is the last line that is exactly
/// ``` and text after it is ignored; a missing closing fence is tolerated
/// (the payload runs to the end). Returns nothing
/// when `text` does not open with a fence.
std::optional<Fenced> unfence(std::string_view text);

} // namespace adaedit
