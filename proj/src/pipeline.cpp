#include "adaedit/pipeline.hpp"

#include <omp.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sys/wait.h>

#include <json.hpp>

#include "adaedit/blocktree.hpp"
#include "adaedit/linediff.hpp"

namespace adaedit {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string dump(const ordered_json& value) {
  return value.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::optional<std::string> string_field(const nlohmann::json& object, const char* key) {
  const auto it = object.find(key);
  if (it == object.end() || !it->is_string()) return std::nullopt;
  return it->get<std::string>();
}

std::string id_field(const nlohmann::json& object, std::initializer_list<const char*> keys, std::size_t index) {
  for (const char* key : keys) {
    const auto it = object.find(key);
    if (it == object.end()) continue;
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number_integer()) return std::to_string(it->get<long long>());
  }
  return std::to_string(index);
}

int thread_count(int requested) { return requested > 0 ? requested : omp_get_max_threads(); }

// Offset of the second hunk header inside `body`, if any.
std::optional<std::size_t> second_hunk_offset(std::string_view body) {
  std::size_t headers = 0;
  std::size_t pos = 0;
  while (pos < body.size()) {
    const std::size_t next = body.find('\n', pos);
    const std::string_view line = body.substr(pos, next == std::string_view::npos ? body.size() - pos : next - pos);
    if (line.starts_with("@@") || line == "<<<<<<< SEARCH") {
      if (++headers == 2) return pos;
    }
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return std::nullopt;
}

} // namespace

PrepInput parse_sample_line(std::string_view line, std::size_t index) {
  PrepInput out;
  out.sample_id = std::to_string(index);
  nlohmann::json object;
  try {
    object = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    out.error = std::string("invalid JSON: ") + e.what();
    return out;
  }
  if (!object.is_object()) {
    out.error = "record is not an object";
    return out;
  }
  out.sample_id = id_field(object, {"id", "sample_id"}, index);
  const auto instruction = string_field(object, "instruction");
  const auto input = string_field(object, "input");
  const auto output = string_field(object, "output");
  if (!instruction || !input || !output) {
    out.error = "record needs string fields instruction, input and output";
    return out;
  }
  out.sample = EditSample{*instruction, LineSequence::from_text(*input), LineSequence::from_text(*output)};
  return out;
}

std::string run_formatter(const std::string& command, const std::string& text) {
  char path[] = "/tmp/adaedit-fmt-XXXXXX";
  const int fd = mkstemp(path);
  if (fd < 0) throw Error(Reason::Usage, "cannot create a temporary file for the formatter");
  const bool written = ::write(fd, text.data(), text.size()) == static_cast<ssize_t>(text.size());
  ::close(fd);
  if (!written) {
    std::remove(path);
    throw Error(Reason::Usage, "cannot write formatter input");
  }
  const std::string full = command + " < '" + path + "'";
  FILE* pipe = popen(full.c_str(), "r");
  if (pipe == nullptr) {
    std::remove(path);
    throw Error(Reason::Usage, "cannot run formatter '" + command + "'");
  }
  std::string out;
  char buffer[4096];
  std::size_t n = 0;
  while ((n = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) out.append(buffer, n);
  const int status = pclose(pipe);
  std::remove(path);
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw Error(Reason::Usage, "formatter '" + command + "' failed");
  }
  return out;
}

PrepResult prepare_sample(const PrepInput& input, const PrepOptions& options, const TokenCounter& counter) {
  PrepResult out;
  if (!input.sample) {
    out.drop = DropReason::Malformed;
    out.detail = input.error;
    return out;
  }
  try {
    EditSample sample = *input.sample;
    const LanguageProfile& profile = *options.format_options.profile;
    if (!options.formatter_command.empty()) {
      sample.source = LineSequence::from_text(run_formatter(options.formatter_command, sample.source.to_text()));
      sample.target = LineSequence::from_text(run_formatter(options.formatter_command, sample.target.to_text()));
    }
    const std::string target_text = sample.target.to_text();
    if (!parses_cleanly(target_text, profile)) {
      out.drop = DropReason::Syntax;
      return out;
    }
    if (sample.source == sample.target) {
      out.drop = DropReason::NoChange;
      return out;
    }

    DatasetRecord record;
    record.sample_id = input.sample_id;
    EditRepresentation representation;
    if (options.adaptive) {
      Selection selection = select_format(sample, options.format, counter, options.format_options);
      record.tokens_full = selection.tokens_full;
      record.tokens_diff = selection.tokens_diff.value_or(selection.tokens_full);
      representation = std::move(selection.representation);
    } else {
      representation = fixed_representation(sample, options.format, options.format_options);
      record.tokens_full = counter.count(target_text);
      record.tokens_diff =
          representation.kind == RepresentationKind::Diff ? counter.count(representation.payload) : record.tokens_full;
    }
    const bool numbered = options.numbered_source.value_or(is_number_indexed(options.format));
    const std::optional<std::string> shown =
        numbered ? std::optional<std::string>(render_numbered_source(sample.source)) : std::nullopt;
    TrainingRecord training = build_training_record(sample, representation, profile, shown);
    record.prompt = std::move(training.prompt);
    record.response = std::move(training.response);
    record.format = std::string(format_name(representation.format));
    out.record = std::move(record);
  } catch (const Error& e) {
    out.drop = e.reason() == Reason::NoChange ? DropReason::NoChange : DropReason::Malformed;
    out.detail = e.what();
  } catch (const std::exception& e) {
    out.drop = DropReason::Malformed;
    out.detail = e.what();
  }
  return out;
}

std::vector<PrepResult> prepare_samples(std::span<const PrepInput> inputs, const PrepOptions& options,
                                        const TokenCounter& counter, Execution execution) {
  std::vector<PrepResult> out(inputs.size());
  if (execution == Execution::Serial) {
    for (std::size_t i = 0; i < inputs.size(); ++i) out[i] = prepare_sample(inputs[i], options, counter);
    return out;
  }
  const auto n = static_cast<std::ptrdiff_t>(inputs.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count(options.threads))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = prepare_sample(inputs[static_cast<std::size_t>(i)], options, counter);
  }
  return out;
}

FilterReport prepare_dataset(std::istream& in, std::ostream& out, const PrepOptions& options,
                             const TokenCounter& counter, Execution execution) {
  constexpr std::size_t kChunk = 256;
  FilterReport report;
  std::size_t index = 0;
  std::string line;
  bool more = true;
  while (more) {
    std::vector<PrepInput> chunk;
    chunk.reserve(kChunk);
    while (chunk.size() < kChunk && (more = static_cast<bool>(std::getline(in, line)))) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      chunk.push_back(parse_sample_line(line, index++));
    }
    for (PrepResult& result : prepare_samples(chunk, options, counter, execution)) {
      switch (result.drop) {
      case DropReason::None:
        ++report.kept;
        out << record_to_json(*result.record) << '\n';
        break;
      case DropReason::Syntax: ++report.dropped_syntax; break;
      case DropReason::NoChange: ++report.dropped_nochange; break;
      case DropReason::Malformed: ++report.dropped_malformed; break;
      }
    }
  }
  return report;
}

std::string record_to_json(const DatasetRecord& record) {
  ordered_json object;
  object["sample_id"] = record.sample_id;
  object["prompt"] = record.prompt;
  object["response"] = record.response;
  object["format"] = record.format;
  object["tokens_full"] = record.tokens_full;
  object["tokens_diff"] = record.tokens_diff;
  return dump(object);
}

std::string report_to_json(const FilterReport& report) {
  ordered_json object;
  object["kept"] = report.kept;
  object["dropped_syntax"] = report.dropped_syntax;
  object["dropped_nochange"] = report.dropped_nochange;
  object["dropped_malformed"] = report.dropped_malformed;
  return dump(object);
}

std::size_t first_renderable_tokens(std::string_view output, const TokenCounter& counter) {
  const std::optional<Fenced> reply = unfence(output);
  if (!reply || reply->tag != "diff") return counter.count(output);
  const std::size_t body_start = output.find('\n') + 1;
  const std::optional<std::size_t> second = second_hunk_offset(output.substr(body_start));
  if (!second) return counter.count(output);
  return counter.count(output.substr(0, body_start + *second));
}

EvalInput parse_eval_line(std::string_view line, std::size_t index) {
  nlohmann::json object;
  try {
    object = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Reason::MalformedDiff, std::string("invalid JSON: ") + e.what());
  }
  if (!object.is_object()) throw Error(Reason::MalformedDiff, "record is not an object");
  const auto input = string_field(object, "input");
  const auto response = string_field(object, "response");
  if (!input || !response) throw Error(Reason::MalformedDiff, "record needs string fields input and response");
  EvalInput out;
  out.sample_id = id_field(object, {"sample_id", "id"}, index);
  out.source = LineSequence::from_text(*input);
  out.output = *response;
  if (const auto expected = string_field(object, "output")) out.expected = LineSequence::from_text(*expected);
  return out;
}

EvalRow evaluate_output(const EvalInput& input, Format diff_format, const TokenCounter& counter,
                        const FormatOptions& options) {
  EvalRow row;
  row.sample_id = input.sample_id;
  row.cost_tokens = counter.count(input.output);
  row.latency_tokens = first_renderable_tokens(input.output, counter);
  const std::optional<Fenced> reply = unfence(input.output);
  if (!reply) {
    row.failure = Reason::MalformedDiff;
    return row;
  }
  row.chosen = reply->tag;
  const Format format = reply->tag == "diff" ? diff_format : Format::FullCode;
  const PatchOutcome outcome = apply_payload(input.source, reply->payload, format, options);
  row.patched = outcome.ok();
  row.failure = outcome.failure;
  if (input.expected) row.matches_expected = outcome.ok() && outcome.patched->to_text() == input.expected->to_text();
  return row;
}

EfficiencyReport evaluate_usability(std::span<const EvalInput> inputs, Format diff_format,
                                    const TokenCounter& counter, const FormatOptions& options, Execution execution,
                                    int threads) {
  EfficiencyReport report;
  report.samples = inputs.size();
  report.rows.resize(inputs.size());
  if (execution == Execution::Serial) {
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      report.rows[i] = evaluate_output(inputs[i], diff_format, counter, options);
    }
  } else {
    const auto n = static_cast<std::ptrdiff_t>(inputs.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count(threads))
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      report.rows[k] = evaluate_output(inputs[k], diff_format, counter, options);
    }
  }
  if (inputs.empty()) return report;
  double latency = 0.0;
  double cost = 0.0;
  std::size_t patched = 0;
  for (const EvalRow& row : report.rows) {
    latency += static_cast<double>(row.latency_tokens);
    cost += static_cast<double>(row.cost_tokens);
    patched += row.patched ? 1 : 0;
  }
  const auto n = static_cast<double>(inputs.size());
  report.latency_tokens = latency / n;
  report.cost_tokens = cost / n;
  report.patch_success_rate = static_cast<double>(patched) / n;
  return report;
}

std::string report_to_json(const EfficiencyReport& report) {
  ordered_json object;
  object["samples"] = report.samples;
  object["latency_tokens"] = report.latency_tokens;
  object["cost_tokens"] = report.cost_tokens;
  object["patch_success_rate"] = report.patch_success_rate;
  ordered_json rows = ordered_json::array();
  for (const EvalRow& row : report.rows) {
    ordered_json r;
    r["sample_id"] = row.sample_id;
    r["chosen"] = row.chosen;
    r["latency_tokens"] = row.latency_tokens;
    r["cost_tokens"] = row.cost_tokens;
    r["patched"] = row.patched;
    if (row.failure) r["failure"] = std::string(reason_name(*row.failure));
    if (row.matches_expected) r["matches_expected"] = *row.matches_expected;
    rows.push_back(std::move(r));
  }
  object["rows"] = std::move(rows);
  return dump(object);
}

} // namespace adaedit
