#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "adaedit/lines.hpp"

namespace adaedit {

enum class BlockKind { Root, Synthetic, Control, Function, Class };

std::string_view block_kind_name(BlockKind kind);

/// Control, Function and Synthetic nodes are legal edit targets; Class and
/// Root are only reached through anchor escalation.
constexpr bool is_fine_grained(BlockKind kind) {
  return kind == BlockKind::Control || kind == BlockKind::Function || kind == BlockKind::Synthetic;
}

/// Grammar node kinds that become block nodes for one language.
struct LanguageProfile {
  std::string language_name;
  std::set<std::string, std::less<>> control_kinds;
  std::set<std::string, std::less<>> function_kinds;
  std::set<std::string, std::less<>> class_kinds;
  /// Wrapper kinds (Python's decorated_definition) take the block kind of
  /// their `definition` child so decorators stay with the definition.
  std::set<std::string, std::less<>> wrapper_kinds;
  /// Fence tag used when this language's code is shown in a prompt.
  std::string fence_tag;
};

const LanguageProfile& python_profile();
const LanguageProfile& javascript_profile();

/// Built-in profile by name ("python"/"py", "javascript"/"js").
/// Throws Error(UnsupportedLanguage) for anything else.
const LanguageProfile& profile_for(std::string_view name);

/// Picks a profile from a file extension, defaulting to Python.
const LanguageProfile& profile_for_path(std::string_view path);

using NodeId = std::uint32_t;

struct BlockNode {
  BlockKind kind;
  std::string kind_name;
  LineRange span;
  NodeId parent = 0;
  std::uint32_t depth = 0;
  std::vector<NodeId> children;
};

/// Block hierarchy over one source text. Node 0 is the root; nodes are stored
/// in pre-order, so a parent always precedes its descendants.
class BlockTree {
public:
  static constexpr NodeId kRoot = 0;

  const BlockNode& node(NodeId id) const { return nodes_[id]; }
  const BlockNode& root() const { return nodes_[kRoot]; }
  const std::vector<BlockNode>& nodes() const { return nodes_; }
  const LineSequence& source() const { return source_; }
  const std::string& language() const { return language_; }

  /// True when the parser reported at least one error or missing node.
  bool has_syntax_error() const { return syntax_error_; }

  /// Index of `id` within its parent's children.
  std::size_t sibling_index(NodeId id) const;

  bool is_ancestor_or_self(NodeId ancestor, NodeId id) const;

  /// Verbatim text of the lines in `span`.
  std::string text(LineRange span) const;

private:
  friend BlockTree build_block_tree(LineSequence, const LanguageProfile&);
  friend BlockTree without_control_nodes(const BlockTree&);
  friend class TreeBuilder;

  std::vector<BlockNode> nodes_;
  LineSequence source_;
  std::string language_;
  bool syntax_error_ = false;
};

BlockTree build_block_tree(LineSequence source, const LanguageProfile& profile);

/// The same tree with every Control node dissolved: its children move up to
/// the nearest remaining ancestor and coarse containers are re-filled with
/// Synthetic runs. This is the view FunctionLevel diffs operate on.
BlockTree without_control_nodes(const BlockTree& tree);

/// True when `text` parses without error nodes under `profile`'s grammar.
bool parses_cleanly(std::string_view text, const LanguageProfile& profile);

/// Insertion point between line `after_line` and `after_line + 1`; 0 is the
/// file head.
struct InsertionPoint {
  std::size_t after_line = 0;
};

/// Deepest node strictly containing the insertion point (both neighbouring
/// lines inside its span). Root when nothing smaller qualifies.
NodeId smallest_containing(const BlockTree& tree, InsertionPoint point);

/// Deepest node whose span contains `range`.
NodeId smallest_containing(const BlockTree& tree, LineRange range);

/// Smallest ordered run of sibling nodes whose spans are contiguous and cover
/// `deleted`; a single ancestor when no such run exists below it.
std::vector<NodeId> covering_contiguous_set(const BlockTree& tree, LineRange deleted);

/// One node per line: `<kind_class> <kind_name> [start..end]`, indented two
/// spaces per level.
std::string dump_tree(const BlockTree& tree);

} // namespace adaedit
