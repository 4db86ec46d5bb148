#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "adaedit/lines.hpp"

namespace adaedit::corpus {

/// Small deterministic generator (splitmix64). Unlike the standard
/// distributions its output does not depend on the standard library in use.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform in [0, n); n must be positive.
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
  /// Uniform in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  bool chance(unsigned percent) { return below(100) < percent; }

private:
  std::uint64_t state_;
};

enum class Language { Python, JavaScript };

/// A module of roughly `approx_lines` lines: imports, constants, functions
/// with nested control flow, classes with (sometimes decorated) methods, and
/// deliberately repeated helper bodies so that anchors need expansion.
std::string python_module(Rng& rng, std::size_t approx_lines);
std::string javascript_module(Rng& rng, std::size_t approx_lines);

/// Applies `edits` random edits: line edits, line and block insertions and
/// deletions, function rewrites and duplications. Occasionally flips the
/// trailing newline. The result may equal the input only if every edit was a
/// no-op, which callers should filter.
LineSequence mutate(const LineSequence& source, Language language, Rng& rng, std::size_t edits);

struct EditPair {
  std::uint64_t id = 0;
  Language language = Language::Python;
  LineSequence source;
  LineSequence target;
};

/// `count` distinct (source, target) pairs with sources of `min_lines` to
/// `max_lines` lines; every `js_every`-th pair is JavaScript (0 disables).
std::vector<EditPair> mutation_corpus(std::uint64_t seed, std::size_t count, std::size_t min_lines,
                                      std::size_t max_lines, std::size_t js_every);

/// A Python file of at least `min_lines` lines.
LineSequence large_python_file(std::uint64_t seed, std::size_t min_lines);

/// `edits` single-line edits spread evenly through the file.
LineSequence scattered_edits(const LineSequence& source, std::uint64_t seed, std::size_t edits);

} // namespace adaedit::corpus
