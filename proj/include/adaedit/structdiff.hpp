#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "adaedit/blocktree.hpp"
#include "adaedit/contentdiff.hpp"
#include "adaedit/linediff.hpp"

namespace adaedit {

/// Fine edits any fine-grained node (BlockDiff); FunctionLevel treats control
/// structures as transparent (FuncDiff).
enum class Granularity { Fine, FunctionLevel };

/// An edit targeting a contiguous run of sibling block nodes.
struct StructuralHunk {
  std::vector<NodeId> nodes;
  LineRange anchor_span;
  std::vector<std::string> replacement;
  bool replacement_no_newline = false;
  /// Indices of the zero-context hunks whose edits this hunk carries.
  std::vector<std::size_t> edits;
};

/// The tree a granularity operates on: `tree` itself for Fine, the
/// control-free view for FunctionLevel.
BlockTree tree_for(const BlockTree& tree, Granularity granularity);

/// Maps each zero-context hunk onto block nodes of `tree` (which must already
/// be the view for `granularity`). Pure insertions go to the smallest node
/// containing the insertion point; an insertion that sits on a boundary inside
/// a Root or Class attaches to the following sibling (the preceding one at the
/// container's end). Hunks with deletions go to the covering contiguous set.
std::vector<StructuralHunk> map_hunks(const BlockTree& tree, std::span<const NumberedHunk> edits,
                                      Granularity granularity);

/// Grows the node run until its text occurs exactly once in the source:
/// preceding and following siblings are added alternately, nearest first, then
/// the parent replaces the run. Ends at the root at the latest.
StructuralHunk expand_anchor_to_unique(const BlockTree& tree, StructuralHunk hunk);

/// Merges hunks with overlapping lines, then repeatedly folds hunks sharing a
/// fine-grained ancestor into that ancestor, deepest first. Class and Root
/// never become consolidation targets.
std::vector<StructuralHunk> consolidate_shared_parent(const BlockTree& tree, std::span<const NumberedHunk> edits,
                                                      std::vector<StructuralHunk> hunks);

/// The whole pipeline (BlockDiff for Fine, FuncDiff for FunctionLevel).
/// Throws Error(NoChange) or Error(UnsupportedLanguage).
std::vector<ContentHunk> generate_structure_diff(const LineSequence& source, const LineSequence& target,
                                                 const LanguageProfile& profile, Granularity granularity);

/// Same pipeline on a tree that was already built for `source`.
std::vector<ContentHunk> generate_structure_diff(const BlockTree& tree, const LineSequence& target,
                                                 Granularity granularity);

} // namespace adaedit
