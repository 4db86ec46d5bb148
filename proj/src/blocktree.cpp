#include "adaedit/blocktree.hpp"

#include <algorithm>
#include <memory>
#include <optional>

#include <tree_sitter/api.h>

#include "adaedit/error.hpp"

extern "C" const TSLanguage* tree_sitter_python();
extern "C" const TSLanguage* tree_sitter_javascript();

namespace adaedit {
namespace {

const TSLanguage* grammar_for(const LanguageProfile& profile) {
  if (profile.language_name == "python") return tree_sitter_python();
  if (profile.language_name == "javascript") return tree_sitter_javascript();
  throw Error(Reason::UnsupportedLanguage, "no grammar registered for '" + profile.language_name + "'");
}

struct ParserDeleter {
  void operator()(TSParser* p) const { ts_parser_delete(p); }
};
struct TreeDeleter {
  void operator()(TSTree* t) const { ts_tree_delete(t); }
};
using ParserPtr = std::unique_ptr<TSParser, ParserDeleter>;
using TreePtr = std::unique_ptr<TSTree, TreeDeleter>;

TreePtr parse(std::string_view text, const LanguageProfile& profile) {
  ParserPtr parser(ts_parser_new());
  ts_parser_set_language(parser.get(), grammar_for(profile));
  TreePtr tree(ts_parser_parse_string(parser.get(), nullptr, text.data(),
                                      static_cast<std::uint32_t>(text.size())));
  if (!tree) throw Error(Reason::UnsupportedLanguage, "parser returned no tree");
  return tree;
}

LineRange line_span(TSNode node) {
  const TSPoint start = ts_node_start_point(node);
  const TSPoint end = ts_node_end_point(node);
  LineRange span{start.row + 1, end.row + 1};
  // A node ending right after a newline does not occupy the next line.
  if (end.column == 0 && end.row > start.row) span.end = end.row;
  return span;
}

// Mutable tree used while building; flattened into BlockTree afterwards.
struct Proto {
  BlockKind kind;
  std::string name;
  LineRange span;
  std::vector<Proto> children;
};

void fill_synthetic(Proto& proto) {
  for (Proto& child : proto.children) fill_synthetic(child);
  if (proto.kind != BlockKind::Root && proto.kind != BlockKind::Class) return;
  std::vector<Proto> filled;
  filled.reserve(proto.children.size() * 2 + 1);
  std::size_t cursor = proto.span.start;
  for (Proto& child : proto.children) {
    if (child.span.start > cursor) {
      filled.push_back(Proto{BlockKind::Synthetic, "synthetic", LineRange{cursor, child.span.start - 1}, {}});
    }
    cursor = child.span.end + 1;
    filled.push_back(std::move(child));
  }
  if (cursor <= proto.span.end) {
    filled.push_back(Proto{BlockKind::Synthetic, "synthetic", LineRange{cursor, proto.span.end}, {}});
  }
  proto.children = std::move(filled);
}

} // namespace

class TreeBuilder {
public:
  explicit TreeBuilder(const LanguageProfile& profile) : profile_(profile) {}

  std::optional<BlockKind> classify(std::string_view type) const {
    if (profile_.control_kinds.contains(type)) return BlockKind::Control;
    if (profile_.function_kinds.contains(type)) return BlockKind::Function;
    if (profile_.class_kinds.contains(type)) return BlockKind::Class;
    return std::nullopt;
  }

  // Walks the named children of the cursor's current node, attaching block
  // nodes to `container`. `transparent` is a child that must be descended
  // into without being classified (the definition inside a wrapper).
  void collect(Proto& container, TSTreeCursor* cursor, std::optional<TSNode> transparent = std::nullopt) {
    if (!ts_tree_cursor_goto_first_child(cursor)) return;
    do {
      const TSNode child = ts_tree_cursor_current_node(cursor);
      if (!ts_node_is_named(child) || ts_node_is_error(child) || ts_node_is_missing(child)) continue;
      if (transparent && ts_node_eq(child, *transparent)) {
        collect(container, cursor);
        continue;
      }
      const std::string_view type = ts_node_type(child);
      std::optional<BlockKind> kind;
      std::optional<TSNode> definition;
      if (profile_.wrapper_kinds.contains(type)) {
        const TSNode def = ts_node_child_by_field_name(child, "definition", 10);
        if (!ts_node_is_null(def)) {
          kind = classify(ts_node_type(def));
          definition = def;
        }
      } else {
        kind = classify(type);
      }
      const LineRange span = line_span(child);
      const bool overlaps_previous =
          !container.children.empty() && span.start <= container.children.back().span.end;
      if (kind && !ts_node_has_error(child) && !overlaps_previous) {
        Proto proto{*kind, std::string(type), span, {}};
        collect(proto, cursor, definition);
        container.children.push_back(std::move(proto));
      } else {
        collect(container, cursor);
      }
    } while (ts_tree_cursor_goto_next_sibling(cursor));
    ts_tree_cursor_goto_parent(cursor);
  }

  static void flatten(Proto& proto, NodeId parent, std::uint32_t depth, std::vector<BlockNode>& out) {
    const auto id = static_cast<NodeId>(out.size());
    out.push_back(BlockNode{proto.kind, std::move(proto.name), proto.span, parent, depth, {}});
    if (id != parent) out[parent].children.push_back(id);
    for (Proto& child : proto.children) flatten(child, id, depth + 1, out);
  }


private:
  const LanguageProfile& profile_;
};

namespace {

void unflatten(const BlockTree& tree, NodeId id, Proto& into) {
  for (NodeId child_id : tree.node(id).children) {
    const BlockNode& child = tree.node(child_id);
    if (child.kind == BlockKind::Synthetic) continue;
    if (child.kind == BlockKind::Control) {
      unflatten(tree, child_id, into);
      continue;
    }
    Proto proto{child.kind, child.kind_name, child.span, {}};
    unflatten(tree, child_id, proto);
    into.children.push_back(std::move(proto));
  }
}

} // namespace

std::string_view block_kind_name(BlockKind kind) {
  switch (kind) {
  case BlockKind::Root: return "Root";
  case BlockKind::Synthetic: return "Synthetic";
  case BlockKind::Control: return "Control";
  case BlockKind::Function: return "Function";
  case BlockKind::Class: return "Class";
  }
  return "Unknown";
}

const LanguageProfile& python_profile() {
  static const LanguageProfile profile{
      "python",
      {"if_statement", "for_statement", "while_statement", "try_statement", "with_statement",
       "match_statement"},
      {"function_definition"},
      {"class_definition"},
      {"decorated_definition"},
      "python",
  };
  return profile;
}

const LanguageProfile& javascript_profile() {
  static const LanguageProfile profile{
      "javascript",
      {"if_statement", "for_statement", "for_in_statement", "while_statement", "do_statement",
       "try_statement", "switch_statement", "with_statement"},
      {"function_declaration", "generator_function_declaration", "function_expression",
       "generator_function", "arrow_function", "method_definition"},
      {"class_declaration", "class"},
      {},
      "javascript",
  };
  return profile;
}

const LanguageProfile& profile_for(std::string_view name) {
  if (name == "python" || name == "py") return python_profile();
  if (name == "javascript" || name == "js") return javascript_profile();
  throw Error(Reason::UnsupportedLanguage, "unsupported language '" + std::string(name) + "'");
}

const LanguageProfile& profile_for_path(std::string_view path) {
  for (std::string_view ext : {".js", ".mjs", ".cjs", ".jsx"}) {
    if (path.ends_with(ext)) return javascript_profile();
  }
  return python_profile();
}

std::size_t BlockTree::sibling_index(NodeId id) const {
  if (id == kRoot) return 0;
  const auto& siblings = nodes_[nodes_[id].parent].children;
  return static_cast<std::size_t>(std::find(siblings.begin(), siblings.end(), id) - siblings.begin());
}

bool BlockTree::is_ancestor_or_self(NodeId ancestor, NodeId id) const {
  while (true) {
    if (id == ancestor) return true;
    if (id == kRoot) return false;
    id = nodes_[id].parent;
  }
}

std::string BlockTree::text(LineRange span) const {
  if (span.empty()) return {};
  return source_.slice_text(span.start - 1, span.end);
}

BlockTree build_block_tree(LineSequence source, const LanguageProfile& profile) {
  const std::string text = source.to_text();
  TreePtr ts_tree = parse(text, profile);
  const TSNode ts_root = ts_tree_root_node(ts_tree.get());

  Proto root{BlockKind::Root, std::string(ts_node_type(ts_root)), LineRange{1, source.size()}, {}};
  TreeBuilder builder(profile);
  TSTreeCursor cursor = ts_tree_cursor_new(ts_root);
  builder.collect(root, &cursor);
  ts_tree_cursor_delete(&cursor);
  fill_synthetic(root);

  BlockTree tree;
  tree.syntax_error_ = ts_node_has_error(ts_root);
  tree.language_ = profile.language_name;
  TreeBuilder::flatten(root, BlockTree::kRoot, 0, tree.nodes_);
  tree.source_ = std::move(source);
  return tree;
}

BlockTree without_control_nodes(const BlockTree& tree) {
  const BlockNode& old_root = tree.root();
  Proto root{BlockKind::Root, old_root.kind_name, old_root.span, {}};
  unflatten(tree, BlockTree::kRoot, root);
  fill_synthetic(root);

  BlockTree out;
  out.syntax_error_ = tree.syntax_error_;
  out.language_ = tree.language_;
  TreeBuilder::flatten(root, BlockTree::kRoot, 0, out.nodes_);
  out.source_ = tree.source_;
  return out;
}

bool parses_cleanly(std::string_view text, const LanguageProfile& profile) {
  TreePtr ts_tree = parse(text, profile);
  return !ts_node_has_error(ts_tree_root_node(ts_tree.get()));
}

NodeId smallest_containing(const BlockTree& tree, InsertionPoint point) {
  const std::size_t k = point.after_line;
  NodeId current = BlockTree::kRoot;
  while (true) {
    const auto& children = tree.node(current).children;
    // Last child starting at or before line k.
    auto it = std::upper_bound(children.begin(), children.end(), k,
                               [&](std::size_t line, NodeId id) { return line < tree.node(id).span.start; });
    if (it == children.begin()) return current;
    const BlockNode& candidate = tree.node(*std::prev(it));
    if (!(candidate.span.start <= k && k < candidate.span.end)) return current;
    current = *std::prev(it);
  }
}

NodeId smallest_containing(const BlockTree& tree, LineRange range) {
  NodeId current = BlockTree::kRoot;
  while (true) {
    const auto& children = tree.node(current).children;
    auto it = std::upper_bound(children.begin(), children.end(), range.start,
                               [&](std::size_t line, NodeId id) { return line < tree.node(id).span.start; });
    if (it == children.begin()) return current;
    const NodeId candidate = *std::prev(it);
    if (!tree.node(candidate).span.contains(range)) return current;
    current = candidate;
  }
}

std::vector<NodeId> covering_contiguous_set(const BlockTree& tree, LineRange deleted) {
  const NodeId parent = smallest_containing(tree, deleted);
  const auto& children = tree.node(parent).children;
  std::vector<NodeId> run;
  for (NodeId id : children) {
    if (tree.node(id).span.overlaps(deleted)) run.push_back(id);
  }
  if (run.empty()) return {parent};
  bool covers = tree.node(run.front()).span.start <= deleted.start &&
                tree.node(run.back()).span.end >= deleted.end;
  for (std::size_t i = 0; covers && i + 1 < run.size(); ++i) {
    covers = tree.node(run[i]).span.end + 1 == tree.node(run[i + 1]).span.start;
  }
  if (!covers) return {parent};
  return run;
}

namespace {

void dump_node(const BlockTree& tree, NodeId id, std::size_t indent, std::string& out) {
  const BlockNode& node = tree.node(id);
  out.append(indent * 2, ' ');
  out += block_kind_name(node.kind);
  out += ' ';
  out += node.kind_name;
  out += " [" + std::to_string(node.span.start) + ".." + std::to_string(node.span.end) + "]\n";
  for (NodeId child : node.children) dump_node(tree, child, indent + 1, out);
}

} // namespace

std::string dump_tree(const BlockTree& tree) {
  std::string out;
  dump_node(tree, BlockTree::kRoot, 0, out);
  return out;
}

} // namespace adaedit
