#include "adaedit/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "adaedit/blocktree.hpp"
#include "adaedit/corpus.hpp"
#include "adaedit/error.hpp"
#include "adaedit/formats.hpp"
#include "adaedit/pipeline.hpp"
#include "adaedit/select.hpp"
#include "adaedit/structdiff.hpp"
#include "adaedit/tokens.hpp"

namespace adaedit {
namespace {

bool is_failure_reason(Reason reason) {
  switch (reason) {
  case Reason::NoChange:
  case Reason::MalformedDiff:
  case Reason::NoMatch:
  case Reason::AmbiguousMatch:
  case Reason::DelimiterCollision: return true;
  default: return false;
  }
}

void report_error(std::ostream& err, Reason reason, const std::string& detail,
                  std::optional<std::size_t> hunk = std::nullopt) {
  nlohmann::ordered_json object;
  object["error"] = std::string(reason_name(reason));
  object["detail"] = detail;
  if (hunk) object["hunk"] = *hunk;
  err << object.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Reason::Usage, "cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return sanitize_utf8(buffer.str());
}

Format require_format(const std::string& name) {
  const std::optional<Format> format = parse_format(name);
  if (!format) {
    throw Error(Reason::Usage, "unknown format '" + name +
                                   "' (fullcode, minunidiff, unidiff, mincontentdiff, contentdiff, blockdiff, funcdiff)");
  }
  return *format;
}

HunkStyle require_style(const std::string& name) {
  const std::optional<HunkStyle> style = parse_style(name);
  if (!style) throw Error(Reason::Usage, "unknown style '" + name + "' (rewrite, interlaced, searchreplace)");
  return *style;
}

const LanguageProfile& require_language(const std::string& name, const std::string& path) {
  try {
    return name.empty() ? profile_for_path(path) : profile_for(name);
  } catch (const Error& e) {
    throw Error(Reason::Usage, e.what());
  }
}

std::shared_ptr<const TokenCounter> require_counter(const std::string& spec) {
  try {
    return make_counter(spec.empty() ? default_counter_spec() : spec);
  } catch (const Error& e) {
    throw Error(Reason::Usage, e.what());
  }
}

struct Options {
  std::string format = "blockdiff";
  std::string style = "rewrite";
  std::size_t context = 3;
  std::string lang;
  std::string tokenizer;
  bool no_fence = false;
  bool adaptive = false;
  bool serial = false;
  int threads = 0;
  std::string old_path;
  std::string new_path;
  std::string diff_path;
  std::string in_path;
  std::string out_path;
  std::string report_path;
  std::string formatter;
  std::string numbered = "auto";
  std::size_t synthesize = 0;
  std::uint64_t seed = 1;
  std::size_t edits = 20;
};

FormatOptions format_options(const Options& o, const LanguageProfile& profile) {
  FormatOptions out;
  out.style = require_style(o.style);
  out.context = o.context;
  out.profile = &profile;
  return out;
}

// Reads from the named file, or `in` for "-" or an empty path.
std::string read_input(const std::string& path, std::istream& in) {
  if (path.empty() || path == "-") {
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return sanitize_utf8(buffer.str());
  }
  return read_file(path);
}

int cmd_diff(const Options& o, std::ostream& out) {
  const Format format = require_format(o.format);
  const LanguageProfile& profile = require_language(o.lang, o.old_path);
  const FormatOptions fo = format_options(o, profile);
  const LineSequence source = LineSequence::from_text(read_file(o.old_path));
  const LineSequence target = LineSequence::from_text(read_file(o.new_path));
  if (source == target) throw Error(Reason::NoChange, "the files are identical");
  const std::string payload = generate_payload(source, target, format, fo);
  if (o.no_fence) {
    out << payload;
  } else {
    out << fence(payload, format == Format::FullCode ? std::string_view(profile.fence_tag) : "diff") << '\n';
  }
  return kExitOk;
}

int cmd_patch(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
  const Format format = require_format(o.format);
  const LanguageProfile& profile = require_language(o.lang, o.old_path);
  const FormatOptions fo = format_options(o, profile);
  const LineSequence source = LineSequence::from_text(read_file(o.old_path));
  std::string diff = read_input(o.diff_path, in);
  if (const std::optional<Fenced> fenced = unfence(diff)) diff = fenced->payload;
  const PatchOutcome outcome = apply_payload(source, diff, format, fo);
  if (!outcome.ok()) {
    report_error(err, *outcome.failure, outcome.detail, outcome.failed_hunk);
    return kExitFailure;
  }
  out << outcome.patched->to_text();
  return kExitOk;
}

int cmd_tree(const Options& o, std::ostream& out) {
  const LanguageProfile& profile = require_language(o.lang, o.old_path);
  const BlockTree tree = build_block_tree(LineSequence::from_text(read_file(o.old_path)), profile);
  out << dump_tree(tree);
  return kExitOk;
}

int cmd_select(const Options& o, std::ostream& out) {
  const Format format = require_format(o.format);
  if (format == Format::FullCode) throw Error(Reason::Usage, "select needs a diff format");
  const LanguageProfile& profile = require_language(o.lang, o.old_path);
  const FormatOptions fo = format_options(o, profile);
  const auto counter = require_counter(o.tokenizer);
  const EditSample sample{"", LineSequence::from_text(read_file(o.old_path)),
                          LineSequence::from_text(read_file(o.new_path))};
  const Selection selection = select_format(sample, format, *counter, fo);
  out << "format: " << format_name(selection.representation.format) << '\n';
  out << "tokenizer: " << counter->name() << '\n';
  out << "tokens_full: " << selection.tokens_full << '\n';
  out << "tokens_diff: ";
  if (selection.tokens_diff) {
    out << *selection.tokens_diff;
  } else {
    out << "unavailable";
  }
  out << '\n';
  const bool full = selection.representation.kind == RepresentationKind::Full;
  out << fence(selection.representation.payload, full ? std::string_view(profile.fence_tag) : "diff") << '\n';
  return kExitOk;
}

int cmd_prep(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
  PrepOptions options;
  options.format = require_format(o.format);
  if (o.adaptive && options.format == Format::FullCode) throw Error(Reason::Usage, "--adaptive needs a diff format");
  options.adaptive = o.adaptive;
  const LanguageProfile& profile = require_language(o.lang.empty() ? "python" : o.lang, "");
  options.format_options = format_options(o, profile);
  options.formatter_command = o.formatter;
  options.threads = o.threads;
  if (o.numbered == "on") {
    options.numbered_source = true;
  } else if (o.numbered == "off") {
    options.numbered_source = false;
  } else if (o.numbered != "auto") {
    throw Error(Reason::Usage, "--numbered takes auto, on or off");
  }
  const auto counter = require_counter(o.tokenizer);

  std::ifstream in_file;
  std::istream* source = &in;
  if (!o.in_path.empty() && o.in_path != "-") {
    in_file.open(o.in_path, std::ios::binary);
    if (!in_file) throw Error(Reason::Usage, "cannot read '" + o.in_path + "'");
    source = &in_file;
  }
  std::ofstream out_file;
  std::ostream* sink = &out;
  if (!o.out_path.empty() && o.out_path != "-") {
    out_file.open(o.out_path, std::ios::binary);
    if (!out_file) throw Error(Reason::Usage, "cannot write '" + o.out_path + "'");
    sink = &out_file;
  }
  const FilterReport report =
      prepare_dataset(*source, *sink, options, *counter, o.serial ? Execution::Serial : Execution::Parallel);
  if (!o.report_path.empty()) {
    std::ofstream report_file(o.report_path, std::ios::binary);
    if (!report_file) throw Error(Reason::Usage, "cannot write '" + o.report_path + "'");
    report_file << report_to_json(report) << '\n';
  } else {
    err << report_to_json(report) << '\n';
  }
  return kExitOk;
}

int cmd_eval(const Options& o, std::istream& in, std::ostream& out) {
  const Format format = require_format(o.format);
  const LanguageProfile& profile = require_language(o.lang.empty() ? "python" : o.lang, "");
  const FormatOptions fo = format_options(o, profile);
  const auto counter = require_counter(o.tokenizer);
  std::istringstream lines(read_input(o.in_path, in));
  std::vector<EvalInput> inputs;
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    inputs.push_back(parse_eval_line(line, inputs.size()));
  }
  const EfficiencyReport report = evaluate_usability(inputs, format, *counter, fo,
                                                     o.serial ? Execution::Serial : Execution::Parallel, o.threads);
  out << report_to_json(report) << '\n';
  return kExitOk;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_bench(const Options& o, std::ostream& out) {
  const Format format = require_format(o.format);
  const LanguageProfile& profile = require_language(o.lang, o.old_path);
  const FormatOptions fo = format_options(o, profile);
  LineSequence source;
  if (o.synthesize > 0) {
    source = corpus::large_python_file(o.seed, o.synthesize);
  } else if (!o.old_path.empty()) {
    source = LineSequence::from_text(read_file(o.old_path));
  } else {
    throw Error(Reason::Usage, "bench needs a file or --synthesize N");
  }
  const LineSequence target = corpus::scattered_edits(source, o.seed, o.edits);

  double blocktree_seconds = 0.0;
  double diff_seconds = 0.0;
  double patch_seconds = 0.0;
  std::size_t payload_bytes = 0;
  bool round_trip = true;
  if (source != target) {
    const bool structural = format == Format::BlockDiff || format == Format::FuncDiff;
    std::string payload;
    const auto diff_start = std::chrono::steady_clock::now();
    if (structural) {
      const auto tree_start = std::chrono::steady_clock::now();
      const BlockTree tree = build_block_tree(source, profile);
      blocktree_seconds = seconds_since(tree_start);
      const Granularity g = format == Format::BlockDiff ? Granularity::Fine : Granularity::FunctionLevel;
      payload = render_hunks(generate_structure_diff(tree, target, g), fo.style);
    } else {
      payload = generate_payload(source, target, format, fo);
    }
    diff_seconds = seconds_since(diff_start);
    payload_bytes = payload.size();

    const auto patch_start = std::chrono::steady_clock::now();
    const PatchOutcome outcome = apply_payload(source, payload, format, fo);
    patch_seconds = seconds_since(patch_start);
    round_trip = outcome.ok() && *outcome.patched == target;
  }
  nlohmann::ordered_json object;
  object["format"] = std::string(format_name(format));
  object["lines"] = source.size();
  object["edits"] = o.edits;
  object["seed"] = o.seed;
  object["payload_bytes"] = payload_bytes;
  object["blocktree_seconds"] = blocktree_seconds;
  object["diff_seconds"] = diff_seconds;
  object["patch_seconds"] = patch_seconds;
  object["round_trip"] = round_trip;
  out << object.dump() << '\n';
  return round_trip ? kExitOk : kExitFailure;
}

} // namespace

std::string sanitize_utf8(std::string_view bytes) {
  std::string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  while (i < bytes.size()) {
    const auto b0 = static_cast<unsigned char>(bytes[i]);
    std::size_t len = 0;
    std::uint32_t min = 0;
    if (b0 < 0x80) {
      out += static_cast<char>(b0);
      ++i;
      continue;
    }
    if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      min = 0x10000;
    }
    bool valid = len != 0 && i + len <= bytes.size();
    std::uint32_t cp = len == 2 ? (b0 & 0x1F) : len == 3 ? (b0 & 0x0F) : (b0 & 0x07);
    for (std::size_t k = 1; valid && k < len; ++k) {
      const auto b = static_cast<unsigned char>(bytes[i + k]);
      valid = (b & 0xC0) == 0x80;
      cp = (cp << 6) | (b & 0x3F);
    }
    valid = valid && cp >= min && cp <= 0x10FFFF && !(cp >= 0xD800 && cp <= 0xDFFF);
    if (valid) {
      out.append(bytes.substr(i, len));
      i += len;
    } else {
      out += "\xEF\xBF\xBD";
      ++i;
    }
  }
  return out;
}

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structure-aware code diffs, content-addressed patching and adaptive edit formats", "adaedit"};
  app.require_subcommand(1);
  Options o;

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format,-f", o.format, "Edit format")->capture_default_str();
  };
  auto add_style = [&](CLI::App* sub) {
    sub->add_option("--style", o.style, "Hunk style: rewrite, interlaced, searchreplace")->capture_default_str();
    sub->add_option("--context", o.context, "Context lines for unidiff and contentdiff")->capture_default_str();
  };
  auto add_lang = [&](CLI::App* sub) {
    sub->add_option("--lang,-l", o.lang, "Language (python, javascript); guessed from the file name if omitted");
  };
  auto add_tokenizer = [&](CLI::App* sub) {
    sub->add_option("--tokenizer,-t", o.tokenizer, "Token counter: chars, ws or bpe:<tokenizer.json>")
        ->envname("ADAEDIT_TOKENIZER");
  };

  CLI::App* diff = app.add_subcommand("diff", "Print the diff turning OLD into NEW");
  diff->add_option("old", o.old_path, "Original file")->required();
  diff->add_option("new", o.new_path, "Edited file")->required();
  add_format(diff);
  add_style(diff);
  add_lang(diff);
  diff->add_flag("--no-fence", o.no_fence, "Print the bare payload without a code fence");

  CLI::App* patch = app.add_subcommand("patch", "Apply a diff to OLD and print the result");
  patch->add_option("old", o.old_path, "File to patch")->required();
  patch->add_option("--diff,-d", o.diff_path, "Diff file ('-' for standard input)")->required();
  add_format(patch);
  add_style(patch);
  add_lang(patch);

  CLI::App* tree = app.add_subcommand("tree", "Print the block tree of FILE");
  tree->add_option("file", o.old_path, "Source file")->required();
  add_lang(tree);

  CLI::App* select = app.add_subcommand("select", "Pick the cheaper of full code and a diff");
  select->add_option("old", o.old_path, "Original file")->required();
  select->add_option("new", o.new_path, "Edited file")->required();
  add_format(select);
  add_style(select);
  add_lang(select);
  add_tokenizer(select);

  CLI::App* prep = app.add_subcommand("prep", "Turn instruction/input/output records into training records");
  prep->add_option("--in,-i", o.in_path, "Input JSON lines (default standard input)");
  prep->add_option("--out,-o", o.out_path, "Output JSON lines (default standard output)");
  prep->add_option("--report", o.report_path, "Write the filter report here instead of standard error");
  prep->add_flag("--adaptive", o.adaptive, "Choose per sample between full code and the diff format");
  prep->add_option("--formatter", o.formatter, "Command normalising code from stdin to stdout");
  prep->add_option("--numbered", o.numbered, "Line-numbered input code: auto, on, off")->capture_default_str();
  prep->add_option("--threads", o.threads, "Worker threads (0 = OpenMP default)");
  prep->add_flag("--serial", o.serial, "Process records one at a time");
  add_format(prep);
  add_style(prep);
  add_lang(prep);
  add_tokenizer(prep);

  CLI::App* eval = app.add_subcommand("eval", "Latency, cost and patch success of model replies");
  eval->add_option("--in,-i", o.in_path, "JSON lines with input and response (default standard input)");
  eval->add_option("--threads", o.threads, "Worker threads (0 = OpenMP default)");
  eval->add_flag("--serial", o.serial, "Process records one at a time");
  add_format(eval);
  add_style(eval);
  add_lang(eval);
  add_tokenizer(eval);

  CLI::App* bench = app.add_subcommand("bench", "Time diff generation and patching on scattered edits");
  bench->add_option("file", o.old_path, "Source file");
  bench->add_option("--synthesize", o.synthesize, "Generate a Python file of at least N lines instead");
  bench->add_option("--seed", o.seed, "Seed for the edits and the synthesized file")->capture_default_str();
  bench->add_option("--edits", o.edits, "Number of scattered single-line edits")->capture_default_str();
  add_format(bench);
  add_style(bench);
  add_lang(bench);

  std::vector<const char*> argv{"adaedit"};
  for (const std::string& arg : args) argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (diff->parsed()) return cmd_diff(o, out);
    if (patch->parsed()) return cmd_patch(o, in, out, err);
    if (tree->parsed()) return cmd_tree(o, out);
    if (select->parsed()) return cmd_select(o, out);
    if (prep->parsed()) return cmd_prep(o, in, out, err);
    if (eval->parsed()) return cmd_eval(o, in, out);
    if (bench->parsed()) return cmd_bench(o, out);
  } catch (const Error& e) {
    report_error(err, e.reason(), e.what());
    return is_failure_reason(e.reason()) ? kExitFailure : kExitUsage;
  } catch (const std::exception& e) {
    report_error(err, Reason::Usage, e.what());
    return kExitUsage;
  }
  return kExitUsage;
}

} // namespace adaedit
