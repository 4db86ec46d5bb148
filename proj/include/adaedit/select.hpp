#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "adaedit/formats.hpp"
#include "adaedit/lines.hpp"
#include "adaedit/tokens.hpp"

namespace adaedit {

/// One editing task: intent, source code, target code.
struct EditSample {
  std::string intent;
  LineSequence source;
  LineSequence target;
};

enum class RepresentationKind { Full, Diff };

struct EditRepresentation {
  RepresentationKind kind = RepresentationKind::Full;
  Format format = Format::FullCode;
  std::string payload;
};

struct Selection {
  EditRepresentation representation;
  std::size_t tokens_full = 0;
  /// Absent when the diff could not be generated.
  std::optional<std::size_t> tokens_diff;
};

/// AdaEdit: the cheaper of the full target and the `diff_format` payload under
/// `counter`. Equal counts pick the diff. An empty source, or a diff that
/// cannot be generated, yields Full. Throws Error(NoChange) when source equals
/// target and Error(Usage) when `diff_format` is fullcode.
Selection select_format(const EditSample& sample, Format diff_format, const TokenCounter& counter,
                        const FormatOptions& options = {});

/// The representation for a fixed format, without selection.
EditRepresentation fixed_representation(const EditSample& sample, Format format, const FormatOptions& options = {});

struct TrainingRecord {
  std::string prompt;
  std::string response;
};

/// Prompt ending exactly at "### Response\n"; response is the fenced payload
/// (language fence tag for full code, "diff" otherwise). `input_code`
/// overrides the code shown in the prompt, e.g. with line numbers.
TrainingRecord build_training_record(const EditSample& sample, const EditRepresentation& representation,
                                     const LanguageProfile& profile,
                                     std::optional<std::string_view> input_code = std::nullopt);

/// Generation prefix at inference time: "```python\n" for full code,
/// "```diff\n" for a fixed diff format and a bare "```" for adaptive prompting.
std::string inference_prefix(Format format, bool adaptive, const LanguageProfile& profile);

enum class SelectionCategory { Correct, BiasLE20, BiasLE50, BiasGT50, NoChange };

std::string_view category_name(SelectionCategory category);

/// Token deviation of a chosen count from the optimum, relative to the optimum.
double selection_deviation(std::size_t chosen, std::size_t optimal);

/// Buckets a model reply (a fenced block). The fence tag tells which format
/// was chosen ("diff" means `diff_format`, anything else full code). A reply
/// that fails to parse or patch, or leaves the source unchanged, is NoChange.
/// Otherwise the realised edit is converted to the other representation and
/// both are counted.
SelectionCategory classify_selection(std::string_view model_output, const EditSample& sample, Format diff_format,
                                     const TokenCounter& counter, const FormatOptions& options = {});

} // namespace adaedit
