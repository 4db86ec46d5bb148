#include "adaedit/select.hpp"

#include <limits>

#include "adaedit/error.hpp"

namespace adaedit {

Selection select_format(const EditSample& sample, Format diff_format, const TokenCounter& counter,
                        const FormatOptions& options) {
  if (diff_format == Format::FullCode) throw Error(Reason::Usage, "adaptive selection needs a diff format");
  if (sample.source == sample.target) throw Error(Reason::NoChange, "source and target are identical");

  Selection out;
  const std::string full = sample.target.to_text();
  out.tokens_full = counter.count(full);
  std::optional<std::string> diff;
  try {
    diff = generate_payload(sample.source, sample.target, diff_format, options);
    out.tokens_diff = counter.count(*diff);
  } catch (const Error&) {
    diff.reset();
  }
  if (diff && !sample.source.empty() && *out.tokens_diff <= out.tokens_full) {
    out.representation = {RepresentationKind::Diff, diff_format, std::move(*diff)};
  } else {
    out.representation = {RepresentationKind::Full, Format::FullCode, full};
  }
  return out;
}

EditRepresentation fixed_representation(const EditSample& sample, Format format, const FormatOptions& options) {
  if (format == Format::FullCode) return {RepresentationKind::Full, format, sample.target.to_text()};
  return {RepresentationKind::Diff, format, generate_payload(sample.source, sample.target, format, options)};
}

TrainingRecord build_training_record(const EditSample& sample, const EditRepresentation& representation,
                                     const LanguageProfile& profile, std::optional<std::string_view> input_code) {
  TrainingRecord out;
  out.prompt = "### Instruction\n";
  out.prompt += sample.intent;
  out.prompt += "\n\n### Input Code\n";
  out.prompt += fence(input_code ? std::string(*input_code) : sample.source.to_text(), profile.fence_tag);
  out.prompt += "\n\n### Response\n";
  const std::string_view tag = representation.kind == RepresentationKind::Full ? std::string_view(profile.fence_tag)
                                                                              : std::string_view("diff");
  out.response = fence(representation.payload, tag);
  return out;
}

std::string inference_prefix(Format format, bool adaptive, const LanguageProfile& profile) {
  if (adaptive) return "```";
  if (format == Format::FullCode) return "```" + profile.fence_tag + "\n";
  return "```diff\n";
}

std::string_view category_name(SelectionCategory category) {
  switch (category) {
  case SelectionCategory::Correct: return "correct";
  case SelectionCategory::BiasLE20: return "bias_le20";
  case SelectionCategory::BiasLE50: return "bias_le50";
  case SelectionCategory::BiasGT50: return "bias_gt50";
  case SelectionCategory::NoChange: return "nochange";
  }
  return "nochange";
}

double selection_deviation(std::size_t chosen, std::size_t optimal) {
  if (chosen <= optimal) return 0.0;
  if (optimal == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(chosen - optimal) / static_cast<double>(optimal);
}

SelectionCategory classify_selection(std::string_view model_output, const EditSample& sample, Format diff_format,
                                     const TokenCounter& counter, const FormatOptions& options) {
  const std::optional<Fenced> reply = unfence(model_output);
  if (!reply) return SelectionCategory::NoChange;
  const bool chose_diff = reply->tag == "diff";
  const PatchOutcome outcome =
      apply_payload(sample.source, reply->payload, chose_diff ? diff_format : Format::FullCode, options);
  if (!outcome.ok() || *outcome.patched == sample.source) return SelectionCategory::NoChange;

  const std::size_t chosen = counter.count(reply->payload);
  std::size_t alternative = 0;
  if (chose_diff) {
    alternative = counter.count(outcome.patched->to_text());
  } else {
    try {
      alternative = counter.count(generate_payload(sample.source, *outcome.patched, diff_format, options));
    } catch (const Error&) {
      // No diff rendering exists, so full code was the only choice.
      return SelectionCategory::Correct;
    }
  }
  if (chosen <= alternative) return SelectionCategory::Correct;
  const double d = selection_deviation(chosen, alternative);
  if (d <= 0.2) return SelectionCategory::BiasLE20;
  if (d <= 0.5) return SelectionCategory::BiasLE50;
  return SelectionCategory::BiasGT50;
}

} // namespace adaedit
