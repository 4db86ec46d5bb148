#include "adaedit/formats.hpp"

#include "adaedit/error.hpp"
#include "adaedit/linediff.hpp"
#include "adaedit/patch.hpp"
#include "adaedit/structdiff.hpp"

namespace adaedit {

std::string_view format_name(Format format) {
  switch (format) {
  case Format::FullCode: return "fullcode";
  case Format::MinUniDiff: return "minunidiff";
  case Format::UniDiff: return "unidiff";
  case Format::MinContentDiff: return "mincontentdiff";
  case Format::ContentDiff: return "contentdiff";
  case Format::BlockDiff: return "blockdiff";
  case Format::FuncDiff: return "funcdiff";
  }
  return "unknown";
}

std::optional<Format> parse_format(std::string_view name) {
  for (Format format : kAllFormats) {
    if (format_name(format) == name) return format;
  }
  return std::nullopt;
}

bool is_number_indexed(Format format) { return format == Format::MinUniDiff || format == Format::UniDiff; }

std::string generate_payload(const LineSequence& source, const LineSequence& target, Format format,
                             const FormatOptions& options) {
  if (format == Format::FullCode) return target.to_text();
  if (source == target) throw Error(Reason::NoChange, "source and target are identical");
  switch (format) {
  case Format::MinUniDiff:
  case Format::UniDiff: {
    const std::size_t context = format == Format::MinUniDiff ? 0 : options.context;
    return render_unified(group_hunks(compute_line_diff(source, target), context), true);
  }
  case Format::MinContentDiff:
  case Format::ContentDiff: {
    const std::size_t context = format == Format::MinContentDiff ? 0 : options.context;
    return render_hunks(generate_content_diff(source, target, context), options.style);
  }
  case Format::BlockDiff:
  case Format::FuncDiff: {
    const Granularity g = format == Format::BlockDiff ? Granularity::Fine : Granularity::FunctionLevel;
    return render_hunks(generate_structure_diff(source, target, *options.profile, g), options.style);
  }
  case Format::FullCode: break;
  }
  return {};
}

PatchOutcome apply_payload(const LineSequence& source, std::string_view payload, Format format,
                           const FormatOptions& options) {
  try {
    if (format == Format::FullCode) return PatchOutcome::success(LineSequence::from_text(payload), {});
    if (is_number_indexed(format)) return apply_numbered(source, parse_unified(payload));
    return apply_content_diff(source, parse_content_diff(payload, options.style));
  } catch (const Error& e) {
    return PatchOutcome::fail(e.reason(), e.what());
  }
}

std::string fence(std::string_view payload, std::string_view tag) {
  std::string out = "```";
  out += tag;
  out += '\n';
  out += payload;
  out += "\n```";
  return out;
}

std::optional<Fenced> unfence(std::string_view text) {
  if (!text.starts_with("```")) return std::nullopt;
  const std::size_t eol = text.find('\n');
  if (eol == std::string_view::npos) return Fenced{std::string(text.substr(3)), {}};
  Fenced out{std::string(text.substr(3, eol - 3)), {}};
  while (!out.tag.empty() && (out.tag.back() == ' ' || out.tag.back() == '\r')) out.tag.pop_back();
  while (!out.tag.empty() && out.tag.front() == ' ') out.tag.erase(out.tag.begin());
  std::string_view body = text.substr(eol + 1);
  // The closing fence is the last line consisting of ``` alone, so a payload
  // may itself contain fence lines.
  std::optional<std::size_t> closing;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = body.find('\n', pos);
    const std::string_view line = body.substr(pos, next == std::string_view::npos ? body.size() - pos : next - pos);
    if (line == "```") closing = pos;
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  if (closing) {
    out.payload = std::string(body.substr(0, *closing == 0 ? 0 : *closing - 1));
    return out;
  }
  out.payload = std::string(body);
  return out;
}

} // namespace adaedit
