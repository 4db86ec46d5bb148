#include "adaedit/structdiff.hpp"

#include <algorithm>
#include <optional>

#include "adaedit/error.hpp"
#include "detail/changes.hpp"

namespace adaedit {
namespace {

using detail::Change;

LineRange union_span(const BlockTree& tree, std::span<const NodeId> nodes) {
  return LineRange{tree.node(nodes.front()).span.start, tree.node(nodes.back()).span.end};
}

bool anchor_unique(const BlockTree& tree, LineRange span) {
  const LineSequence& source = tree.source();
  if (span.empty()) return source.empty();
  return detail::occurrences_of_range(source, source, span.start - 1, span.end) == 1;
}

void recompute_replacement(const BlockTree& tree, std::span<const Change> changes, StructuralHunk& hunk) {
  const std::size_t begin = hunk.anchor_span.empty() ? 0 : hunk.anchor_span.start - 1;
  const std::size_t end = hunk.anchor_span.empty() ? 0 : hunk.anchor_span.end;
  detail::Spliced spliced = detail::splice(tree.source(), begin, end, changes, hunk.edits);
  hunk.replacement = std::move(spliced.lines);
  hunk.replacement_no_newline = spliced.no_newline;
}

// Re-targets `hunk` at a wider node run and widens the replacement with the
// source lines that were added on either side. The added lines never carry
// edits of this hunk, so no re-splicing is needed.
void retarget(const BlockTree& tree, StructuralHunk& hunk, std::vector<NodeId> nodes) {
  const LineSequence& source = tree.source();
  const LineRange old_span = hunk.anchor_span;
  const LineRange new_span = union_span(tree, nodes);
  std::vector<std::string> before(source.lines.begin() + static_cast<std::ptrdiff_t>(new_span.start - 1),
                                  source.lines.begin() + static_cast<std::ptrdiff_t>(old_span.start - 1));
  before.insert(before.end(), std::make_move_iterator(hunk.replacement.begin()),
                std::make_move_iterator(hunk.replacement.end()));
  for (std::size_t line = old_span.end + 1; line <= new_span.end; ++line) {
    before.push_back(source.lines[line - 1]);
    hunk.replacement_no_newline = source.unterminated(line - 1);
  }
  hunk.replacement = std::move(before);
  hunk.nodes = std::move(nodes);
  hunk.anchor_span = new_span;
}

// One expansion step. Returns false once the run is the root.
bool expand_once(const BlockTree& tree, StructuralHunk& hunk, bool prefer_preceding) {
  const NodeId first = hunk.nodes.front();
  if (first == BlockTree::kRoot) return false;
  const NodeId parent = tree.node(first).parent;
  const auto& siblings = tree.node(parent).children;
  const std::size_t i = tree.sibling_index(first);
  const std::size_t j = tree.sibling_index(hunk.nodes.back());
  const bool can_prepend = i > 0;
  const bool can_append = j + 1 < siblings.size();
  std::vector<NodeId> nodes = hunk.nodes;
  if (can_prepend && (prefer_preceding || !can_append)) {
    nodes.insert(nodes.begin(), siblings[i - 1]);
  } else if (can_append) {
    nodes.push_back(siblings[j + 1]);
  } else {
    nodes = {parent};
  }
  retarget(tree, hunk, std::move(nodes));
  return true;
}

// Descends through coarse nodes at an insertion boundary so the edit lands on
// a fine-grained node: the first child when inserting at a node's head, the
// last child when appending at its tail.
NodeId descend_coarse(const BlockTree& tree, NodeId id, bool at_head) {
  while (!is_fine_grained(tree.node(id).kind) && !tree.node(id).children.empty()) {
    const auto& children = tree.node(id).children;
    id = at_head ? children.front() : children.back();
  }
  return id;
}

std::vector<NodeId> insertion_target(const BlockTree& tree, std::size_t after_line) {
  const NodeId container = smallest_containing(tree, InsertionPoint{after_line});
  const BlockNode& node = tree.node(container);
  if (is_fine_grained(node.kind) || node.children.empty()) return {container};
  for (NodeId child : node.children) {
    if (tree.node(child).span.start > after_line) return {descend_coarse(tree, child, true)};
  }
  return {descend_coarse(tree, node.children.back(), false)};
}

std::vector<StructuralHunk> merge_overlapping(const BlockTree& tree, std::span<const Change> changes,
                                              std::vector<StructuralHunk> hunks) {
  bool merged_any = true;
  while (merged_any) {
    merged_any = false;
    std::sort(hunks.begin(), hunks.end(), [](const StructuralHunk& a, const StructuralHunk& b) {
      return a.anchor_span.start != b.anchor_span.start ? a.anchor_span.start < b.anchor_span.start
                                                        : a.anchor_span.end < b.anchor_span.end;
    });
    std::vector<StructuralHunk> out;
    out.reserve(hunks.size());
    for (StructuralHunk& hunk : hunks) {
      if (!out.empty() && out.back().anchor_span.overlaps(hunk.anchor_span)) {
        StructuralHunk& last = out.back();
        const LineRange range{last.anchor_span.start, std::max(last.anchor_span.end, hunk.anchor_span.end)};
        last.edits.insert(last.edits.end(), hunk.edits.begin(), hunk.edits.end());
        last.nodes = covering_contiguous_set(tree, range);
        last.anchor_span = union_span(tree, last.nodes);
        recompute_replacement(tree, changes, last);
        merged_any = true;
      } else {
        out.push_back(std::move(hunk));
      }
    }
    hunks = std::move(out);
  }
  return hunks;
}

// Deepest fine-grained node containing `range`, if any.
std::optional<NodeId> fine_container(const BlockTree& tree, LineRange range) {
  NodeId id = smallest_containing(tree, range);
  while (true) {
    if (is_fine_grained(tree.node(id).kind)) return id;
    if (id == BlockTree::kRoot) return std::nullopt;
    id = tree.node(id).parent;
  }
}

std::vector<StructuralHunk> consolidate(const BlockTree& tree, std::span<const Change> changes,
                                        std::vector<StructuralHunk> hunks) {
  hunks = merge_overlapping(tree, changes, std::move(hunks));
  while (hunks.size() > 1) {
    std::optional<NodeId> best;
    for (std::size_t i = 0; i + 1 < hunks.size(); ++i) {
      const LineRange both{hunks[i].anchor_span.start, hunks[i + 1].anchor_span.end};
      const std::optional<NodeId> container = fine_container(tree, both);
      if (container && (!best || tree.node(*container).depth > tree.node(*best).depth)) best = container;
    }
    if (!best) break;
    const LineRange target = tree.node(*best).span;
    StructuralHunk folded;
    folded.nodes = {*best};
    folded.anchor_span = target;
    std::vector<StructuralHunk> rest;
    for (StructuralHunk& hunk : hunks) {
      if (target.contains(hunk.anchor_span)) {
        folded.edits.insert(folded.edits.end(), hunk.edits.begin(), hunk.edits.end());
      } else {
        rest.push_back(std::move(hunk));
      }
    }
    recompute_replacement(tree, changes, folded);
    rest.push_back(std::move(folded));
    hunks = merge_overlapping(tree, changes, std::move(rest));
  }
  return hunks;
}

std::vector<StructuralHunk> map_with_changes(const BlockTree& tree, std::span<const Change> changes) {
  std::vector<StructuralHunk> out;
  out.reserve(changes.size());
  for (std::size_t i = 0; i < changes.size(); ++i) {
    const Change& change = changes[i];
    StructuralHunk hunk;
    if (change.deleted == 0) {
      hunk.nodes = insertion_target(tree, change.pos);
    } else {
      hunk.nodes = covering_contiguous_set(tree, LineRange{change.pos + 1, change.end()});
    }
    hunk.anchor_span = union_span(tree, hunk.nodes);
    hunk.edits = {i};
    recompute_replacement(tree, changes, hunk);
    out.push_back(std::move(hunk));
  }
  return out;
}

StructuralHunk expand_to_unique(const BlockTree& tree, StructuralHunk hunk) {
  bool prefer_preceding = true;
  NodeId parent = hunk.nodes.front() == BlockTree::kRoot ? BlockTree::kRoot : tree.node(hunk.nodes.front()).parent;
  while (!anchor_unique(tree, hunk.anchor_span)) {
    if (!expand_once(tree, hunk, prefer_preceding)) break;
    const NodeId now = hunk.nodes.front() == BlockTree::kRoot ? BlockTree::kRoot : tree.node(hunk.nodes.front()).parent;
    if (now != parent) {
      // Moved up a level: restart the alternation with the preceding side.
      parent = now;
      prefer_preceding = true;
    } else {
      prefer_preceding = !prefer_preceding;
    }
  }
  return hunk;
}

// Replays the hunks in order and widens any hunk whose anchor would not locate
// exactly once in the partially patched text.
std::vector<StructuralHunk> settle_sequential(const BlockTree& tree, std::span<const Change> changes,
                                              std::vector<StructuralHunk> hunks) {
  const LineSequence& source = tree.source();
  while (true) {
    LineSequence evolving = source;
    std::ptrdiff_t offset = 0;
    std::optional<std::size_t> conflict;
    for (std::size_t i = 0; i < hunks.size() && !conflict; ++i) {
      const StructuralHunk& hunk = hunks[i];
      const LineRange span = hunk.anchor_span;
      if (span.empty()) continue;
      const std::size_t begin = span.start - 1;
      if (detail::occurrences_of_range(evolving, source, begin, span.end) != 1) {
        conflict = i;
        break;
      }
      const auto at = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(begin) + offset);
      detail::splice_into(evolving, at, at + span.size(), hunk.replacement, hunk.replacement_no_newline);
      offset += static_cast<std::ptrdiff_t>(hunk.replacement.size()) - static_cast<std::ptrdiff_t>(span.size());
    }
    if (!conflict) return hunks;
    expand_once(tree, hunks[*conflict], true);
    hunks = consolidate(tree, changes, std::move(hunks));
  }
}

std::vector<ContentHunk> emit(const BlockTree& tree, const std::vector<StructuralHunk>& hunks) {
  const LineSequence& source = tree.source();
  std::vector<ContentHunk> out;
  out.reserve(hunks.size());
  for (const StructuralHunk& hunk : hunks) {
    ContentHunk content;
    const LineRange span = hunk.anchor_span;
    if (!span.empty()) {
      content.anchor.assign(source.lines.begin() + static_cast<std::ptrdiff_t>(span.start - 1),
                            source.lines.begin() + static_cast<std::ptrdiff_t>(span.end));
      content.anchor_no_newline = source.unterminated(span.end - 1);
    }
    content.replacement = hunk.replacement;
    content.replacement_no_newline = hunk.replacement_no_newline;
    content.anchor_span = span;
    out.push_back(std::move(content));
  }
  return out;
}

void require_view(const BlockTree& tree, Granularity granularity) {
  if (granularity != Granularity::FunctionLevel) return;
  for (const BlockNode& node : tree.nodes()) {
    if (node.kind == BlockKind::Control) {
      throw std::invalid_argument("FunctionLevel mapping needs the control-free tree (see tree_for)");
    }
  }
}

} // namespace

BlockTree tree_for(const BlockTree& tree, Granularity granularity) {
  return granularity == Granularity::Fine ? tree : without_control_nodes(tree);
}

std::vector<StructuralHunk> map_hunks(const BlockTree& tree, std::span<const NumberedHunk> edits,
                                      Granularity granularity) {
  require_view(tree, granularity);
  return map_with_changes(tree, detail::changes_from_hunks(edits));
}

StructuralHunk expand_anchor_to_unique(const BlockTree& tree, StructuralHunk hunk) {
  return expand_to_unique(tree, std::move(hunk));
}

std::vector<StructuralHunk> consolidate_shared_parent(const BlockTree& tree, std::span<const NumberedHunk> edits,
                                                      std::vector<StructuralHunk> hunks) {
  return consolidate(tree, detail::changes_from_hunks(edits), std::move(hunks));
}

std::vector<ContentHunk> generate_structure_diff(const LineSequence& source, const LineSequence& target,
                                                 const LanguageProfile& profile, Granularity granularity) {
  if (source == target) throw Error(Reason::NoChange, "source and target are identical");
  return generate_structure_diff(build_block_tree(source, profile), target, granularity);
}

std::vector<ContentHunk> generate_structure_diff(const BlockTree& fine_tree, const LineSequence& target,
                                                 Granularity granularity) {
  const LineSequence& source = fine_tree.source();
  if (source == target) throw Error(Reason::NoChange, "source and target are identical");

  const BlockTree view = granularity == Granularity::Fine ? BlockTree{} : without_control_nodes(fine_tree);
  const BlockTree& tree = granularity == Granularity::Fine ? fine_tree : view;

  const std::vector<NumberedHunk> zero = group_hunks(compute_line_diff(source, target), 0);
  const std::vector<Change> changes = detail::changes_from_hunks(zero);

  std::vector<StructuralHunk> hunks = map_with_changes(tree, changes);
  for (StructuralHunk& hunk : hunks) hunk = expand_to_unique(tree, std::move(hunk));

  // Consolidation can produce anchors that are no longer unique; re-expand
  // and re-consolidate until nothing moves.
  while (true) {
    hunks = consolidate(tree, changes, std::move(hunks));
    bool expanded = false;
    for (StructuralHunk& hunk : hunks) {
      if (!anchor_unique(tree, hunk.anchor_span)) {
        hunk = expand_to_unique(tree, std::move(hunk));
        expanded = true;
      }
    }
    if (!expanded) break;
  }

  hunks = settle_sequential(tree, changes, std::move(hunks));
  return emit(tree, hunks);
}

} // namespace adaedit
