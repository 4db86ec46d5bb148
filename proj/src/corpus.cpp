#include "adaedit/corpus.hpp"

#include <algorithm>
#include <array>
#include <string_view>

namespace adaedit::corpus {

std::uint64_t Rng::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

constexpr std::array<std::string_view, 16> kVerbs = {"load", "parse", "build", "render", "merge", "split",
                                                     "scan", "check", "apply", "update", "fetch", "store",
                                                     "encode", "decode", "resolve", "emit"};
constexpr std::array<std::string_view, 16> kNouns = {"config", "items", "record", "buffer", "token", "node",
                                                     "path", "entry", "table", "value", "index", "state",
                                                     "batch", "frame", "query", "limit"};
constexpr std::array<std::string_view, 8> kClasses = {"Reader", "Writer", "Cache", "Registry",
                                                      "Session", "Parser", "Planner", "Tracker"};

template <std::size_t N>
std::string_view pick(Rng& rng, const std::array<std::string_view, N>& pool) {
  return pool[rng.below(N)];
}

std::string ident(Rng& rng) { return std::string(pick(rng, kVerbs)) + "_" + std::string(pick(rng, kNouns)); }
std::string noun(Rng& rng) { return std::string(pick(rng, kNouns)); }
std::string pad(std::size_t indent) { return std::string(indent, ' '); }

class Emitter {
public:
  Emitter(Rng& rng, Language language) : rng_(rng), js_(language == Language::JavaScript) {}

  std::vector<std::string> lines;

  std::string expr() {
    switch (rng_.below(7)) {
    case 0: return std::to_string(rng_.below(100));
    case 1: return noun(rng_) + " + " + std::to_string(rng_.between(1, 9));
    case 2: return ident(rng_) + "(" + noun(rng_) + ")";
    case 3: return js_ ? "[]" : "[]";
    case 4: return js_ ? "null" : "None";
    case 5: return "\"" + noun(rng_) + "\"";
    default: return noun(rng_) + "." + noun(rng_);
    }
  }

  std::string cond() {
    switch (rng_.below(4)) {
    case 0: return noun(rng_) + (js_ ? " === " : " == ") + expr();
    case 1: return noun(rng_) + " > " + std::to_string(rng_.below(10));
    case 2: return js_ ? "!" + noun(rng_) : "not " + noun(rng_);
    default: return noun(rng_);
    }
  }

  std::string statement(std::size_t indent) {
    const std::string end = js_ ? ";" : "";
    const std::string decl = js_ ? "const " : "";
    switch (rng_.below(8)) {
    case 0: return pad(indent) + decl + noun(rng_) + " = " + expr() + end;
    case 1: return pad(indent) + noun(rng_) + " += 1" + end;
    case 2: return pad(indent) + "result" + (js_ ? ".push(" : ".append(") + noun(rng_) + ")" + end;
    case 3: return pad(indent) + (js_ ? "// " : "# ") + "TODO: " + std::string(pick(rng_, kVerbs)) + " the " + noun(rng_);
    case 4: return pad(indent) + (js_ ? "console.log(" : "logger.debug(") + "\"" + noun(rng_) + "\", " + noun(rng_) + ")" + end;
    case 5: return pad(indent) + (js_ ? "count += 1;" : "count += 1");
    default: return pad(indent) + ident(rng_) + "(" + noun(rng_) + ", " + expr() + ")" + end;
    }
  }

  void close(std::size_t indent, std::string_view tail = "}") {
    if (js_) lines.push_back(pad(indent) + std::string(tail));
  }

  void control(std::size_t indent, std::size_t depth) {
    const std::string open = js_ ? " {" : ":";
    switch (rng_.below(js_ ? 4 : 5)) {
    case 0:
      lines.push_back(pad(indent) + (js_ ? "if (" + cond() + ")" : "if " + cond()) + open);
      body(indent + 4, depth + 1);
      if (rng_.chance(40)) {
        if (js_) {
          lines.push_back(pad(indent) + "} else {");
        } else {
          lines.push_back(pad(indent) + "else:");
        }
        body(indent + 4, depth + 1);
      }
      close(indent);
      break;
    case 1:
      lines.push_back(pad(indent) + (js_ ? "for (const item of " + noun(rng_) + ")" : "for item in " + noun(rng_)) + open);
      body(indent + 4, depth + 1);
      close(indent);
      break;
    case 2:
      lines.push_back(pad(indent) + (js_ ? "while (" + cond() + ")" : "while " + cond()) + open);
      body(indent + 4, depth + 1);
      close(indent);
      break;
    case 3:
      lines.push_back(pad(indent) + "try" + open);
      body(indent + 4, depth + 1);
      if (js_) {
        lines.push_back(pad(indent) + "} catch (err) {");
      } else {
        lines.push_back(pad(indent) + "except ValueError as err:");
      }
      lines.push_back(pad(indent + 4) + (js_ ? "throw err;" : "raise"));
      close(indent);
      break;
    default:
      lines.push_back(pad(indent) + "with open(" + noun(rng_) + ") as fh:");
      body(indent + 4, depth + 1);
      break;
    }
  }

  void body(std::size_t indent, std::size_t depth) {
    const std::size_t n = rng_.between(1, 4);
    for (std::size_t i = 0; i < n; ++i) {
      if (depth < 3 && rng_.chance(30)) {
        control(indent, depth);
      } else {
        lines.push_back(statement(indent));
      }
    }
  }

  // Function bodies already produced, kept for deliberate repetition.
  std::vector<std::vector<std::string>> bodies;

  void function(std::size_t indent, bool method) {
    const std::string name = ident(rng_);
    if (!js_ && rng_.chance(15)) lines.push_back(pad(indent) + (method ? "@property" : "@cache"));
    if (js_) {
      if (method) {
        lines.push_back(pad(indent) + name + "(" + noun(rng_) + ") {");
      } else if (rng_.chance(25)) {
        lines.push_back(pad(indent) + "const " + name + " = (" + noun(rng_) + ") => {");
      } else {
        lines.push_back(pad(indent) + "function " + name + "(" + noun(rng_) + ", " + noun(rng_) + ") {");
      }
    } else {
      lines.push_back(pad(indent) + "def " + name + "(" + (method ? "self, " : "") + noun(rng_) + "):");
      if (rng_.chance(30)) lines.push_back(pad(indent + 4) + "\"\"\"" + std::string(pick(rng_, kVerbs)) + " the " + noun(rng_) + ".\"\"\"");
    }
    const std::size_t start = lines.size();
    if (!bodies.empty() && rng_.chance(20)) {
      // Reuse an earlier body verbatim at this indentation.
      const auto& reused = bodies[rng_.below(bodies.size())];
      for (const std::string& line : reused) lines.push_back(pad(indent) + line);
    } else {
      body(indent + 4, 1);
      lines.push_back(pad(indent + 4) + "return " + (rng_.chance(40) ? (js_ ? "null;" : "None") : (js_ ? "result;" : "result")));
    }
    std::vector<std::string> relative;
    for (std::size_t i = start; i < lines.size(); ++i) relative.push_back(lines[i].substr(std::min(indent, lines[i].size())));
    bodies.push_back(std::move(relative));
    const bool arrow = js_ && !method && lines[start - 1].find("=>") != std::string::npos;
    close(indent, arrow ? "};" : "}");
  }

  void klass() {
    const std::string name = std::string(pick(rng_, kClasses)) + std::to_string(rng_.below(10));
    if (js_) {
      lines.push_back("class " + name + " {");
      lines.push_back("    constructor(" + noun(rng_) + ") {");
      lines.push_back("        this." + noun(rng_) + " = " + expr() + ";");
      lines.push_back("    }");
    } else {
      lines.push_back("class " + name + "(object):");
      if (rng_.chance(50)) lines.push_back("    \"\"\"Keeps track of " + noun(rng_) + ".\"\"\"");
      lines.push_back("    " + noun(rng_) + " = " + expr());
    }
    const std::size_t methods = rng_.between(1, 4);
    for (std::size_t i = 0; i < methods; ++i) {
      lines.push_back("");
      if (rng_.chance(15)) {
        // The same tiny method shows up in many classes.
        if (js_) {
          lines.push_back("    toString() {");
          lines.push_back("        return this.name;");
          lines.push_back("    }");
        } else {
          lines.push_back("    def __repr__(self):");
          lines.push_back("        return self.name");
        }
      } else {
        function(4, true);
      }
    }
    close(0);
  }

  void module(std::size_t approx_lines) {
    if (js_) {
      lines.push_back("'use strict';");
      lines.push_back("const fs = require('fs');");
    } else {
      lines.push_back("import os");
      lines.push_back("import logging");
      if (rng_.chance(50)) lines.push_back("from typing import Any, Dict");
    }
    lines.push_back("");
    lines.push_back(js_ ? "const LIMIT = " + std::to_string(rng_.below(1000)) + ";" : "LIMIT = " + std::to_string(rng_.below(1000)));
    if (!js_) lines.push_back("logger = logging.getLogger(__name__)");
    while (lines.size() < approx_lines) {
      lines.push_back("");
      if (!js_) lines.push_back("");
      const std::size_t roll = rng_.below(10);
      if (roll < 5) {
        function(0, false);
      } else if (roll < 8) {
        klass();
      } else {
        lines.push_back(statement(0));
        if (rng_.chance(50)) control(0, 1);
      }
    }
  }

private:
  Rng& rng_;
  bool js_;
};

std::size_t indent_of(const std::string& line) {
  const std::size_t pos = line.find_first_not_of(' ');
  return pos == std::string::npos ? 0 : pos;
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t") == std::string::npos; }

bool opens_block(const std::string& line, bool js) {
  if (blank(line)) return false;
  const char last = line.back();
  return js ? last == '{' : last == ':';
}

bool is_definition(const std::string& line, bool js) {
  const std::string_view body = std::string_view(line).substr(indent_of(line));
  if (js) {
    return body.starts_with("function ") || body.starts_with("class ") ||
           (body.find("=>") != std::string_view::npos && body.ends_with("{"));
  }
  return body.starts_with("def ") || body.starts_with("class ") || body.starts_with("@");
}

// One past the last line of the block opened at `start`, judged by
// indentation (both languages are generated with consistent indentation).
std::size_t block_end(const std::vector<std::string>& lines, std::size_t start, bool js) {
  const std::size_t indent = indent_of(lines[start]);
  std::size_t i = start + 1;
  // A decorator line belongs to the definition that follows it.
  while (!js && i < lines.size() && std::string_view(lines[i - 1]).substr(indent).starts_with("@")) ++i;
  std::size_t last = i - 1;
  for (; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    if (indent_of(lines[i]) <= indent) {
      if (js && indent_of(lines[i]) == indent && lines[i][indent] == '}') last = i;
      break;
    }
    last = i;
  }
  return last + 1;
}

std::string edit_line(const std::string& line, Rng& rng, bool js) {
  const std::size_t digit = line.find_first_of("0123456789");
  if (digit != std::string::npos && rng.chance(50)) {
    std::string out = line;
    out[digit] = static_cast<char>('0' + (out[digit] - '0' + 1 + rng.below(8)) % 10);
    return out;
  }
  for (std::string_view n : kNouns) {
    const std::size_t at = line.find(n);
    if (at != std::string::npos && rng.chance(60)) {
      return line.substr(0, at) + noun(rng) + line.substr(at + n.size());
    }
  }
  if (rng.chance(20)) return line + "  ";
  return line + (js ? " // changed" : "  # changed");
}

} // namespace

std::string python_module(Rng& rng, std::size_t approx_lines) {
  Emitter emitter(rng, Language::Python);
  emitter.module(approx_lines);
  return LineSequence::from_lines(std::move(emitter.lines)).to_text();
}

std::string javascript_module(Rng& rng, std::size_t approx_lines) {
  Emitter emitter(rng, Language::JavaScript);
  emitter.module(approx_lines);
  return LineSequence::from_lines(std::move(emitter.lines)).to_text();
}

LineSequence mutate(const LineSequence& source, Language language, Rng& rng, std::size_t edits) {
  const bool js = language == Language::JavaScript;
  LineSequence out = source;
  auto& lines = out.lines;
  for (std::size_t e = 0; e < edits; ++e) {
    const std::size_t n = lines.size();
    const std::size_t kind = rng.below(100);
    if (n == 0 || kind < 25) {
      if (n == 0) {
        Emitter emitter(rng, language);
        emitter.function(0, false);
        lines = std::move(emitter.lines);
        continue;
      }
      const std::size_t i = rng.below(n);
      lines[i] = blank(lines[i]) ? (js ? "// note" : "# note") : edit_line(lines[i], rng, js);
    } else if (kind < 40) {
      // Line insertion with the neighbour's indentation.
      const std::size_t at = rng.below(n + 1);
      std::size_t indent = at > 0 ? indent_of(lines[at - 1]) : 0;
      if (at > 0 && opens_block(lines[at - 1], js)) indent += 4;
      Emitter emitter(rng, language);
      lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(at), emitter.statement(indent));
    } else if (kind < 52) {
      const std::size_t i = rng.below(n);
      lines.erase(lines.begin() + static_cast<std::ptrdiff_t>(i));
    } else if (kind < 64) {
      // Block insertion: a control block inside a body, or a new top-level
      // function between items.
      const std::size_t at = rng.below(n + 1);
      Emitter emitter(rng, language);
      if (at > 0 && indent_of(lines[at - 1]) > 0 && rng.chance(60)) {
        std::size_t indent = indent_of(lines[at - 1]);
        if (opens_block(lines[at - 1], js)) indent += 4;
        emitter.control(indent, 1);
      } else {
        emitter.lines.push_back("");
        emitter.function(0, false);
        emitter.lines.push_back("");
      }
      lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(at), emitter.lines.begin(), emitter.lines.end());
    } else if (kind < 76) {
      // Block deletion.
      const std::size_t i = rng.below(n);
      const std::size_t end = opens_block(lines[i], js) || is_definition(lines[i], js)
                                  ? block_end(lines, i, js)
                                  : std::min(n, i + rng.between(1, 4));
      lines.erase(lines.begin() + static_cast<std::ptrdiff_t>(i), lines.begin() + static_cast<std::ptrdiff_t>(end));
    } else if (kind < 95) {
      // Function rewrite or duplication.
      std::vector<std::size_t> defs;
      for (std::size_t i = 0; i < n; ++i) {
        if (is_definition(lines[i], js) && std::string_view(lines[i]).substr(indent_of(lines[i])).find("class ") != 0) {
          defs.push_back(i);
        }
      }
      if (defs.empty()) continue;
      const std::size_t start = defs[rng.below(defs.size())];
      const std::size_t end = block_end(lines, start, js);
      if (kind < 88) {
        std::size_t header = start;
        while (header + 1 < end && !opens_block(lines[header], js)) ++header;
        const std::size_t indent = indent_of(lines[header]);
        Emitter emitter(rng, language);
        emitter.body(indent + 4, 1);
        const std::size_t body_end = js && end > header + 1 ? end - 1 : end;
        lines.erase(lines.begin() + static_cast<std::ptrdiff_t>(header + 1),
                    lines.begin() + static_cast<std::ptrdiff_t>(body_end));
        lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(header + 1), emitter.lines.begin(), emitter.lines.end());
      } else {
        std::vector<std::string> copy(lines.begin() + static_cast<std::ptrdiff_t>(start),
                                      lines.begin() + static_cast<std::ptrdiff_t>(end));
        copy.insert(copy.begin(), "");
        lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(end), copy.begin(), copy.end());
      }
    } else {
      out.trailing_newline = !out.trailing_newline;
    }
  }
  if (lines.empty()) out.trailing_newline = false;
  return out;
}

std::vector<EditPair> mutation_corpus(std::uint64_t seed, std::size_t count, std::size_t min_lines,
                                      std::size_t max_lines, std::size_t js_every) {
  Rng rng(seed);
  std::vector<EditPair> out;
  out.reserve(count);
  std::uint64_t id = 0;
  while (out.size() < count) {
    EditPair pair;
    pair.id = id++;
    pair.language = js_every != 0 && pair.id % js_every == js_every - 1 ? Language::JavaScript : Language::Python;
    const std::size_t lines = rng.between(min_lines, max_lines);
    const std::string text = pair.language == Language::Python ? python_module(rng, lines) : javascript_module(rng, lines);
    LineSequence source = LineSequence::from_text(text);
    // Generators overshoot a little; trim back into range.
    if (source.size() > max_lines) source.lines.resize(max_lines);
    if (rng.chance(5)) source.trailing_newline = false;
    const LineSequence target = mutate(source, pair.language, rng, rng.between(1, 6));
    // An unterminated empty last line is the same text as a terminated one;
    // re-splitting keeps every pair in the form from_text produces.
    pair.source = LineSequence::from_text(source.to_text());
    pair.target = LineSequence::from_text(target.to_text());
    if (pair.source == pair.target) continue;
    out.push_back(std::move(pair));
  }
  return out;
}

LineSequence large_python_file(std::uint64_t seed, std::size_t min_lines) {
  Rng rng(seed);
  return LineSequence::from_text(python_module(rng, min_lines));
}

LineSequence scattered_edits(const LineSequence& source, std::uint64_t seed, std::size_t edits) {
  LineSequence out = source;
  if (source.empty() || edits == 0) return out;
  Rng rng(seed);
  const std::size_t stride = std::max<std::size_t>(1, source.size() / edits);
  for (std::size_t k = 0; k < edits; ++k) {
    const std::size_t lo = k * stride;
    if (lo >= out.size()) break;
    const std::size_t i = lo + rng.below(std::min(stride, out.size() - lo));
    out.lines[i] = blank(out.lines[i]) ? "# note" : edit_line(out.lines[i], rng, false);
  }
  return out;
}

} // namespace adaedit::corpus
