#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adaedit/error.hpp"
#include "adaedit/formats.hpp"
#include "adaedit/select.hpp"
#include "adaedit/tokens.hpp"

namespace adaedit {

/// Serial runs one record at a time on the calling thread and is the
/// reference the parallel path is tested against.
enum class Execution { Serial, Parallel };

struct PrepOptions {
  Format format = Format::BlockDiff;
  bool adaptive = false;
  FormatOptions format_options;
  /// Shell command reading code on stdin and writing canonical code to
  /// stdout. Empty disables the step.
  std::string formatter_command;
  /// Shows the input code with line numbers; the default does so for the
  /// number-indexed formats only.
  std::optional<bool> numbered_source;
  /// 0 keeps the OpenMP default.
  int threads = 0;
};

struct DatasetRecord {
  std::string sample_id;
  std::string prompt;
  std::string response;
  std::string format;
  std::size_t tokens_full = 0;
  std::size_t tokens_diff = 0;
};

enum class DropReason { None, Syntax, NoChange, Malformed };

struct FilterReport {
  std::size_t kept = 0;
  std::size_t dropped_syntax = 0;
  std::size_t dropped_nochange = 0;
  std::size_t dropped_malformed = 0;

  std::size_t total() const { return kept + dropped_syntax + dropped_nochange + dropped_malformed; }
  friend bool operator==(const FilterReport&, const FilterReport&) = default;
};

/// One input line. `sample` is empty when the line was not a usable record.
struct PrepInput {
  std::string sample_id;
  std::optional<EditSample> sample;
  std::string error;
};

struct PrepResult {
  std::optional<DatasetRecord> record;
  DropReason drop = DropReason::None;
  std::string detail;
};

/// Parses a JSON object with `instruction`, `input` and `output` strings and
/// an optional `id`; `index` is the fallback sample id.
PrepInput parse_sample_line(std::string_view line, std::size_t index);

/// Filters then builds one record. Never throws.
PrepResult prepare_sample(const PrepInput& input, const PrepOptions& options, const TokenCounter& counter);

std::vector<PrepResult> prepare_samples(std::span<const PrepInput> inputs, const PrepOptions& options,
                                        const TokenCounter& counter, Execution execution);

/// Reads JSON lines from `in`, writes one record per kept sample to `out` in
/// input order, and returns the filter report.
FilterReport prepare_dataset(std::istream& in, std::ostream& out, const PrepOptions& options,
                             const TokenCounter& counter, Execution execution = Execution::Parallel);

std::string record_to_json(const DatasetRecord& record);
std::string report_to_json(const FilterReport& report);

/// Runs `command` with `text` on stdin and returns its stdout. Throws
/// Error(Usage) when the command cannot be run or exits non-zero.
std::string run_formatter(const std::string& command, const std::string& text);

/// Tokens of `output` up to the first renderable point: the whole output for
/// full code and for anything unrecognised, the text before the second hunk
/// header for diffs (the whole output when there is only one hunk).
std::size_t first_renderable_tokens(std::string_view output, const TokenCounter& counter);

struct EvalInput {
  std::string sample_id;
  LineSequence source;
  std::string output;
  /// Expected target, when the evaluation data carries one.
  std::optional<LineSequence> expected;
};

struct EvalRow {
  std::string sample_id;
  std::string chosen;  // fence tag of the reply
  std::size_t latency_tokens = 0;
  std::size_t cost_tokens = 0;
  bool patched = false;
  std::optional<bool> matches_expected;
  std::optional<Reason> failure;
};

struct EfficiencyReport {
  std::size_t samples = 0;
  double latency_tokens = 0.0;
  double cost_tokens = 0.0;
  double patch_success_rate = 0.0;
  std::vector<EvalRow> rows;
};

/// Parses a JSON object with `input` (source code) and `response` (the model
/// reply), plus optional `sample_id` and `output` (expected target).
/// Throws Error(MalformedDiff) on a malformed line.
EvalInput parse_eval_line(std::string_view line, std::size_t index);

EvalRow evaluate_output(const EvalInput& input, Format diff_format, const TokenCounter& counter,
                        const FormatOptions& options = {});

EfficiencyReport evaluate_usability(std::span<const EvalInput> inputs, Format diff_format,
                                    const TokenCounter& counter, const FormatOptions& options = {},
                                    Execution execution = Execution::Parallel, int threads = 0);

std::string report_to_json(const EfficiencyReport& report);

} // namespace adaedit
