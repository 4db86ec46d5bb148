#pragma once

// Independent reference implementations used as test oracles. They are
// deliberately naive: quadratic scans and textbook DP.

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "adaedit/blocktree.hpp"
#include "adaedit/contentdiff.hpp"
#include "adaedit/corpus.hpp"
#include "adaedit/linediff.hpp"
#include "adaedit/lines.hpp"

namespace oracle {

using adaedit::LineSequence;

inline LineSequence seq(std::initializer_list<const char*> lines, bool trailing = true) {
  std::vector<std::string> v(lines.begin(), lines.end());
  return LineSequence::from_lines(std::move(v), trailing);
}

/// Every occurrence of `needle` as a contiguous line run in `hay`, compared
/// together with the end-of-file newline state of the last line.
inline std::size_t occurrences(const LineSequence& hay, std::span<const std::string> needle, bool needle_unterminated) {
  if (needle.empty()) return 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i) {
    bool match = true;
    for (std::size_t k = 0; k < needle.size() && match; ++k) match = hay.lines[i + k] == needle[k];
    const bool hay_unterminated = hay.unterminated(i + needle.size() - 1);
    if (match && hay_unterminated == needle_unterminated) ++count;
  }
  return count;
}

/// Classic O(nm) longest common subsequence length. The last line of an
/// unterminated text is treated as different from any terminated line.
inline std::size_t lcs(const LineSequence& a, const LineSequence& b) {
  auto key = [](const LineSequence& s, std::size_t i) { return s.lines[i] + (s.unterminated(i) ? "\x01" : ""); };
  std::vector<std::vector<std::size_t>> dp(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      dp[i][j] = key(a, i - 1) == key(b, j - 1) ? dp[i - 1][j - 1] + 1 : std::max(dp[i - 1][j], dp[i][j - 1]);
    }
  }
  return dp[a.size()][b.size()];
}

/// Replays a script run by run; returns {source side, target side}.
inline std::pair<std::vector<std::string>, std::vector<std::string>> replay(const adaedit::LineDiffScript& script) {
  std::vector<std::string> old_side;
  std::vector<std::string> new_side;
  for (const auto& run : script.runs) {
    if (run.kind != adaedit::RunKind::Insert) old_side.insert(old_side.end(), run.lines.begin(), run.lines.end());
    if (run.kind != adaedit::RunKind::Delete) new_side.insert(new_side.end(), run.lines.begin(), run.lines.end());
  }
  return {old_side, new_side};
}

/// Node-run texts of a tree: every contiguous run of siblings, as line ranges.
inline bool is_sibling_run(const adaedit::BlockTree& tree, adaedit::LineRange span) {
  if (span == tree.root().span) return true;
  for (const auto& node : tree.nodes()) {
    const auto& children = node.children;
    for (std::size_t i = 0; i < children.size(); ++i) {
      if (tree.node(children[i]).span.start != span.start) continue;
      for (std::size_t j = i; j < children.size(); ++j) {
        if (tree.node(children[j]).span.end == span.end) return true;
      }
    }
  }
  return false;
}

inline const adaedit::LanguageProfile& profile(adaedit::corpus::Language language) {
  return language == adaedit::corpus::Language::Python ? adaedit::python_profile() : adaedit::javascript_profile();
}

/// Small random line texts drawn from a tiny alphabet so that repeats are
/// common.
inline LineSequence random_lines(adaedit::corpus::Rng& rng, std::size_t min_lines, std::size_t max_lines) {
  static const char* pool[] = {"a", "b", "c", "x = 1", "", "    pass", "return y", "}"};
  std::vector<std::string> lines(rng.between(min_lines, max_lines));
  for (auto& line : lines) line = pool[rng.below(std::size(pool))];
  LineSequence out = LineSequence::from_lines(std::move(lines), !rng.chance(20));
  if (out.empty()) out.trailing_newline = false;
  return out;
}

} // namespace oracle
