#include <gtest/gtest.h>

#include "adaedit/blocktree.hpp"
#include "adaedit/error.hpp"
#include "support.hpp"

using namespace adaedit;

namespace {

const char* kExample = "import os\n\ndef f(x):\n    if x:\n        return 1\n    return 2\n";

BlockTree example_tree() { return build_block_tree(LineSequence::from_text(kExample), python_profile()); }

// Finds the node with exactly this span, preferring the deepest.
NodeId node_with_span(const BlockTree& tree, LineRange span) {
  NodeId found = BlockTree::kRoot;
  for (NodeId id = 0; id < tree.nodes().size(); ++id) {
    if (tree.node(id).span == span) found = id;
  }
  return found;
}

void check_invariants(const BlockTree& tree) {
  const std::size_t lines = tree.source().size();
  ASSERT_EQ(tree.root().kind, BlockKind::Root);
  EXPECT_EQ(tree.root().span, (LineRange{1, lines}));
  std::vector<int> covered(lines + 1, 0);
  std::size_t roots = 0;
  for (NodeId id = 0; id < tree.nodes().size(); ++id) {
    const BlockNode& node = tree.node(id);
    if (node.kind == BlockKind::Root) ++roots;
    if (node.kind == BlockKind::Synthetic) EXPECT_TRUE(node.children.empty());
    std::size_t previous_end = node.span.start - 1;
    for (NodeId child : node.children) {
      const BlockNode& c = tree.node(child);
      EXPECT_EQ(c.parent, id);
      EXPECT_FALSE(c.span.empty());
      EXPECT_TRUE(node.span.contains(c.span));
      EXPECT_GT(c.span.start, previous_end);
      previous_end = c.span.end;
    }
    if (is_fine_grained(node.kind)) {
      for (std::size_t l = node.span.start; l <= node.span.end && l <= lines; ++l) covered[l] = 1;
    }
  }
  EXPECT_EQ(roots, 1u);
  for (std::size_t l = 1; l <= lines; ++l) EXPECT_EQ(covered[l], 1) << "line " << l << " only in coarse nodes";
}

} // namespace

TEST(BlockTree, ExampleShape) {
  const BlockTree tree = example_tree();
  EXPECT_EQ(dump_tree(tree),
            "Root module [1..6]\n"
            "  Synthetic synthetic [1..2]\n"
            "  Function function_definition [3..6]\n"
            "    Control if_statement [4..5]\n");
  EXPECT_FALSE(tree.has_syntax_error());
  check_invariants(tree);
}

TEST(BlockTree, EmptyFile) {
  const BlockTree tree = build_block_tree(LineSequence::from_text(""), python_profile());
  EXPECT_EQ(tree.root().span, (LineRange{1, 0}));
  EXPECT_TRUE(tree.root().children.empty());
  EXPECT_EQ(tree.nodes().size(), 1u);
}

TEST(BlockTree, SyntaxErrorFileIsOneSyntheticNode) {
  const BlockTree tree = build_block_tree(LineSequence::from_text("def f(:\n"), python_profile());
  EXPECT_TRUE(tree.has_syntax_error());
  ASSERT_EQ(tree.root().children.size(), 1u);
  const BlockNode& only = tree.node(tree.root().children[0]);
  EXPECT_EQ(only.kind, BlockKind::Synthetic);
  EXPECT_EQ(only.span, (LineRange{1, 1}));
}

TEST(BlockTree, MultiClauseConstructsAndDecorators) {
  const char* text =
      "class A:\n"
      "    x = 1\n"
      "    y = 2\n"
      "\n"
      "    @dec\n"
      "    def m(self):\n"
      "        for i in r:\n"
      "            if i:\n"
      "                a()\n"
      "            else:\n"
      "                b()\n"
      "        return 3\n"
      "\n"
      "# c\n"
      "def g():\n"
      "    pass\n";
  const BlockTree tree = build_block_tree(LineSequence::from_text(text), python_profile());
  check_invariants(tree);
  EXPECT_EQ(dump_tree(tree),
            "Root module [1..16]\n"
            "  Class class_definition [1..12]\n"
            "    Synthetic synthetic [1..4]\n"
            "    Function decorated_definition [5..12]\n"
            "      Control for_statement [7..11]\n"
            "        Control if_statement [8..11]\n"
            "  Synthetic synthetic [13..14]\n"
            "  Function function_definition [15..16]\n");
  // Promotion guard: a class-body attribute line maps to its Synthetic node.
  const auto cover = covering_contiguous_set(tree, LineRange{2, 2});
  ASSERT_EQ(cover.size(), 1u);
  EXPECT_EQ(tree.node(cover[0]).kind, BlockKind::Synthetic);
}

TEST(BlockTree, JavaScriptProfile) {
  const char* text =
      "function f(x) {\n"
      "  if (x) {\n"
      "    return 1;\n"
      "  }\n"
      "  return 2;\n"
      "}\n"
      "const y = 3;\n"
      "class K {\n"
      "  m() { return 1; }\n"
      "}\n";
  const BlockTree tree = build_block_tree(LineSequence::from_text(text), javascript_profile());
  check_invariants(tree);
  EXPECT_FALSE(tree.has_syntax_error());
  EXPECT_EQ(tree.node(node_with_span(tree, {1, 6})).kind, BlockKind::Function);
  EXPECT_EQ(tree.node(node_with_span(tree, {2, 4})).kind, BlockKind::Control);
  EXPECT_EQ(tree.node(node_with_span(tree, {8, 10})).kind, BlockKind::Class);
  EXPECT_EQ(tree.node(node_with_span(tree, {9, 9})).kind, BlockKind::Function);
}

TEST(BlockTree, ProfilesHaveDisjointKindSets) {
  for (const LanguageProfile* p : {&python_profile(), &javascript_profile()}) {
    for (const auto& k : p->control_kinds) {
      EXPECT_FALSE(p->function_kinds.contains(k));
      EXPECT_FALSE(p->class_kinds.contains(k));
    }
    for (const auto& k : p->function_kinds) EXPECT_FALSE(p->class_kinds.contains(k));
  }
  EXPECT_EQ(&profile_for("py"), &python_profile());
  EXPECT_EQ(&profile_for("javascript"), &javascript_profile());
  EXPECT_EQ(&profile_for_path("x.js"), &javascript_profile());
  try {
    profile_for("cobol");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.reason(), Reason::UnsupportedLanguage);
  }
}

TEST(BlockTree, SmallestContaining) {
  const BlockTree tree = example_tree();
  EXPECT_EQ(tree.node(smallest_containing(tree, InsertionPoint{4})).span, (LineRange{4, 5}));
  EXPECT_EQ(smallest_containing(tree, InsertionPoint{0}), BlockTree::kRoot);
  EXPECT_EQ(tree.node(smallest_containing(tree, LineRange{3, 6})).kind, BlockKind::Function);
}

TEST(BlockTree, CoveringContiguousSet) {
  const BlockTree tree = example_tree();
  auto spans = [&](const std::vector<NodeId>& ids) {
    std::vector<LineRange> out;
    for (NodeId id : ids) out.push_back(tree.node(id).span);
    return out;
  };
  EXPECT_EQ(spans(covering_contiguous_set(tree, {5, 6})), (std::vector<LineRange>{{3, 6}}));
  EXPECT_EQ(spans(covering_contiguous_set(tree, {4, 4})), (std::vector<LineRange>{{4, 5}}));
  EXPECT_EQ(spans(covering_contiguous_set(tree, {1, 1})), (std::vector<LineRange>{{1, 2}}));
  EXPECT_EQ(spans(covering_contiguous_set(tree, {2, 3})), (std::vector<LineRange>{{1, 2}, {3, 6}}));
}

TEST(BlockTree, WithoutControlNodes) {
  const BlockTree tree = without_control_nodes(example_tree());
  check_invariants(tree);
  for (const auto& node : tree.nodes()) EXPECT_NE(node.kind, BlockKind::Control);
  EXPECT_EQ(tree.node(covering_contiguous_set(tree, {5, 5})[0]).kind, BlockKind::Function);
}

TEST(BlockTree, InvariantsAndDeterminismOnCorpus) {
  const auto pairs = corpus::mutation_corpus(21, 120, 5, 300, 4);
  for (const auto& pair : pairs) {
    const auto& profile = oracle::profile(pair.language);
    for (const LineSequence* text : {&pair.source, &pair.target}) {
      const BlockTree tree = build_block_tree(*text, profile);
      check_invariants(tree);
      check_invariants(without_control_nodes(tree));
      EXPECT_EQ(dump_tree(tree), dump_tree(build_block_tree(*text, profile)));
    }
  }
}

TEST(BlockTree, CoveringSetIsAContiguousSiblingRun) {
  const auto pairs = corpus::mutation_corpus(22, 40, 20, 200, 5);
  corpus::Rng rng(22);
  for (const auto& pair : pairs) {
    const BlockTree tree = build_block_tree(pair.source, oracle::profile(pair.language));
    if (tree.source().empty()) continue;
    for (int k = 0; k < 20; ++k) {
      const std::size_t a = rng.between(1, tree.source().size());
      const std::size_t b = std::min(tree.source().size(), a + rng.below(4));
      const auto cover = covering_contiguous_set(tree, {a, b});
      ASSERT_FALSE(cover.empty());
      const LineRange span{tree.node(cover.front()).span.start, tree.node(cover.back()).span.end};
      EXPECT_TRUE(span.contains(LineRange{a, b}));
      EXPECT_TRUE(oracle::is_sibling_run(tree, span));
      for (std::size_t i = 1; i < cover.size(); ++i) {
        EXPECT_EQ(tree.node(cover[i]).parent, tree.node(cover[0]).parent);
        EXPECT_EQ(tree.node(cover[i]).span.start, tree.node(cover[i - 1]).span.end + 1);
      }
    }
  }
}
