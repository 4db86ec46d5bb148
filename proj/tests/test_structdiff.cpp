#include <gtest/gtest.h>

#include "adaedit/error.hpp"
#include "adaedit/patch.hpp"
#include "adaedit/structdiff.hpp"
#include "support.hpp"

using namespace adaedit;
using oracle::seq;

namespace {

const char* kExample = "import os\n\ndef f(x):\n    if x:\n        return 1\n    return 2\n";

LineSequence text(const char* s) { return LineSequence::from_text(s); }

std::vector<NumberedHunk> zero_context(const LineSequence& a, const LineSequence& b) {
  return group_hunks(compute_line_diff(a, b), 0);
}

std::vector<LineRange> node_spans(const BlockTree& tree, const StructuralHunk& hunk) {
  std::vector<LineRange> out;
  for (NodeId id : hunk.nodes) out.push_back(tree.node(id).span);
  return out;
}

std::string joined(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

// The anchor's source lines, located by the generation-side span.
bool anchor_is_node_run(const BlockTree& tree, const ContentHunk& hunk) {
  if (!hunk.anchor_span) return false;
  return oracle::is_sibling_run(tree, *hunk.anchor_span);
}

} // namespace

TEST(StructureDiff, BlockDiffTargetsTheIfBlock) {
  const auto source = text(kExample);
  const auto target = text("import os\n\ndef f(x):\n    if x:\n        return 10\n    return 2\n");
  const auto hunks = generate_structure_diff(source, target, python_profile(), Granularity::Fine);
  ASSERT_EQ(hunks.size(), 1u);
  EXPECT_EQ(joined(hunks[0].anchor), "    if x:\n        return 1\n");
  EXPECT_EQ(joined(hunks[0].replacement), "    if x:\n        return 10\n");
}

TEST(StructureDiff, FuncDiffTargetsTheFunction) {
  const auto source = text(kExample);
  const auto target = text("import os\n\ndef f(x):\n    if x:\n        return 10\n    return 2\n");
  const auto hunks = generate_structure_diff(source, target, python_profile(), Granularity::FunctionLevel);
  ASSERT_EQ(hunks.size(), 1u);
  EXPECT_EQ(hunks[0].anchor_span, (LineRange{3, 6}));
  EXPECT_EQ(hunks[0].anchor.size(), 4u);
}

TEST(StructureDiff, NoChange) {
  try {
    generate_structure_diff(text(kExample), text(kExample), python_profile(), Granularity::Fine);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.reason(), Reason::NoChange);
  }
}

TEST(MapHunks, Examples) {
  const BlockTree tree = build_block_tree(text(kExample), python_profile());
  const auto source = tree.source();

  // Insertion between lines 4 and 5.
  auto inserted = source;
  inserted.lines.insert(inserted.lines.begin() + 4, "        pass");
  auto mapped = map_hunks(tree, zero_context(source, inserted), Granularity::Fine);
  ASSERT_EQ(mapped.size(), 1u);
  EXPECT_EQ(node_spans(tree, mapped[0]), (std::vector<LineRange>{{4, 5}}));
  EXPECT_EQ(mapped[0].replacement, (std::vector<std::string>{"    if x:", "        pass", "        return 1"}));

  // Deletion of lines 5 and 6.
  auto deleted = source;
  deleted.lines.erase(deleted.lines.begin() + 4, deleted.lines.end());
  mapped = map_hunks(tree, zero_context(source, deleted), Granularity::Fine);
  ASSERT_EQ(mapped.size(), 1u);
  EXPECT_EQ(node_spans(tree, mapped[0]), (std::vector<LineRange>{{3, 6}}));

  // Insertion at the file head attaches to the first child.
  auto head = source;
  head.lines.insert(head.lines.begin(), "import sys");
  mapped = map_hunks(tree, zero_context(source, head), Granularity::Fine);
  ASSERT_EQ(mapped.size(), 1u);
  EXPECT_EQ(node_spans(tree, mapped[0]), (std::vector<LineRange>{{1, 2}}));
  EXPECT_EQ(mapped[0].replacement, (std::vector<std::string>{"import sys", "import os", ""}));
}

TEST(MapHunks, FunctionLevelRejectsTreesWithControlNodes) {
  const BlockTree tree = build_block_tree(text(kExample), python_profile());
  auto target = tree.source();
  target.lines[4] = "        return 10";
  EXPECT_THROW(map_hunks(tree, zero_context(tree.source(), target), Granularity::FunctionLevel),
               std::invalid_argument);
  const BlockTree view = tree_for(tree, Granularity::FunctionLevel);
  const auto mapped = map_hunks(view, zero_context(tree.source(), target), Granularity::FunctionLevel);
  ASSERT_EQ(mapped.size(), 1u);
  EXPECT_EQ(node_spans(view, mapped[0]), (std::vector<LineRange>{{3, 6}}));
}

TEST(ExpandAnchor, UniqueAnchorIsUnchanged) {
  const BlockTree tree = build_block_tree(text(kExample), python_profile());
  auto target = tree.source();
  target.lines[4] = "        return 10";
  auto mapped = map_hunks(tree, zero_context(tree.source(), target), Granularity::Fine);
  ASSERT_EQ(mapped.size(), 1u);
  const auto expanded = expand_anchor_to_unique(tree, mapped[0]);
  EXPECT_EQ(expanded.nodes, mapped[0].nodes);
  EXPECT_EQ(expanded.replacement, mapped[0].replacement);
}

TEST(ExpandAnchor, IdenticalSiblingFunctions) {
  const auto source = text(
      "def g1():\n    return compute(1)\n\n"
      "def g2():\n    return compute(1)\n\n"
      "def g3():\n    return other()\n");
  // The bodies are identical; the edit is inside g2's body line.
  const BlockTree tree = build_block_tree(source, python_profile());
  auto target = source;
  target.lines[4] = "    return compute(2)";
  const auto hunks = generate_structure_diff(tree, target, Granularity::Fine);
  ASSERT_EQ(hunks.size(), 1u);
  EXPECT_EQ(oracle::occurrences(source, hunks[0].anchor, hunks[0].anchor_no_newline), 1u);
  EXPECT_TRUE(hunks[0].anchor_span->contains(LineRange{5, 5}));
  EXPECT_TRUE(anchor_is_node_run(tree, hunks[0]));
  const auto out = apply_content_diff(source, hunks);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(*out.patched, target);
}

TEST(ExpandAnchor, UniformFileEscalatesToRoot) {
  std::vector<std::string> lines(10, "x = 1");
  const auto source = LineSequence::from_lines(lines);
  lines[6] = "x = 2";
  const auto target = LineSequence::from_lines(lines);
  const BlockTree tree = build_block_tree(source, python_profile());
  auto mapped = map_hunks(tree, zero_context(source, target), Granularity::Fine);
  ASSERT_EQ(mapped.size(), 1u);
  const auto expanded = expand_anchor_to_unique(tree, mapped[0]);
  EXPECT_EQ(expanded.anchor_span, (LineRange{1, 10}));
  const auto hunks = generate_structure_diff(source, target, python_profile(), Granularity::Fine);
  ASSERT_EQ(hunks.size(), 1u);
  EXPECT_EQ(hunks[0].anchor, source.lines);
  EXPECT_EQ(hunks[0].replacement, target.lines);
}

TEST(Consolidate, BranchesOfOneConstructFoldIntoIt) {
  const auto source = text(
      "def h(items):\n"
      "    total = 0\n"
      "    for i in items:\n"
      "        if i > 0:\n"
      "            total += i\n"
      "        else:\n"
      "            total -= i\n"
      "    return total\n");
  auto target = source;
  target.lines[4] = "            total += 2 * i";
  target.lines[6] = "            total -= 2 * i";
  const auto hunks = generate_structure_diff(source, target, python_profile(), Granularity::Fine);
  ASSERT_EQ(hunks.size(), 1u);
  // Both edits sit in the if/else, which is inside the loop: the deepest
  // fine-grained node containing both is the if/else itself.
  EXPECT_EQ(hunks[0].anchor_span, (LineRange{4, 7}));
}

TEST(Consolidate, TopLevelFunctionsStaySeparate) {
  const auto source = text(
      "def a():\n    return 1\n\n"
      "def b():\n    return 2\n");
  auto target = source;
  target.lines[1] = "    return 10";
  target.lines[4] = "    return 20";
  const auto hunks = generate_structure_diff(source, target, python_profile(), Granularity::Fine);
  ASSERT_EQ(hunks.size(), 2u);
  EXPECT_EQ(hunks[0].anchor_span, (LineRange{1, 2}));
  EXPECT_EQ(hunks[1].anchor_span, (LineRange{4, 5}));
}

TEST(Consolidate, SingleHunkIsIdentity) {
  const BlockTree tree = build_block_tree(text(kExample), python_profile());
  auto target = tree.source();
  target.lines[4] = "        return 10";
  const auto edits = zero_context(tree.source(), target);
  auto mapped = map_hunks(tree, edits, Granularity::Fine);
  const auto consolidated = consolidate_shared_parent(tree, edits, mapped);
  ASSERT_EQ(consolidated.size(), 1u);
  EXPECT_EQ(consolidated[0].nodes, mapped[0].nodes);
}

TEST(Consolidate, ClassMethodsStaySeparate) {
  const auto source = text(
      "class C:\n"
      "    def a(self):\n        return 1\n\n"
      "    def b(self):\n        return 2\n");
  auto target = source;
  target.lines[2] = "        return 10";
  target.lines[5] = "        return 20";
  const auto hunks = generate_structure_diff(source, target, python_profile(), Granularity::Fine);
  EXPECT_EQ(hunks.size(), 2u);
}

TEST(StructureDiff, CorpusProperties) {
  const auto pairs = corpus::mutation_corpus(51, 250, 5, 300, 5);
  for (const auto& pair : pairs) {
    const auto& profile = oracle::profile(pair.language);
    const BlockTree tree = build_block_tree(pair.source, profile);
    const BlockTree func_view = without_control_nodes(tree);
    for (Granularity g : {Granularity::Fine, Granularity::FunctionLevel}) {
      const auto hunks = generate_structure_diff(tree, pair.target, g);
      const BlockTree& view = g == Granularity::Fine ? tree : func_view;
      for (const auto& h : hunks) {
        ASSERT_TRUE(h.anchor_span.has_value());
        if (!h.anchor.empty()) {
          EXPECT_EQ(oracle::occurrences(pair.source, h.anchor, h.anchor_no_newline), 1u) << pair.id;
        }
        EXPECT_TRUE(anchor_is_node_run(view, h)) << pair.id;
        std::vector<std::string> expected(pair.source.lines.begin() + (h.anchor_span->start - 1),
                                          pair.source.lines.begin() + h.anchor_span->end);
        EXPECT_EQ(h.anchor, expected);
        if (g == Granularity::FunctionLevel) {
          for (const auto& node : tree.nodes()) {
            if (node.kind == BlockKind::Control && node.span == *h.anchor_span) {
              // A control node spanning the same lines as a function is fine.
              bool also_other = false;
              for (const auto& n : tree.nodes()) {
                also_other |= n.kind != BlockKind::Control && n.span == node.span;
              }
              EXPECT_TRUE(also_other) << pair.id;
            }
          }
        }
      }
      const auto out = apply_content_diff(pair.source, hunks);
      ASSERT_TRUE(out.ok()) << pair.id << " " << out.detail;
      EXPECT_EQ(out.patched->to_text(), pair.target.to_text()) << pair.id;
    }
  }
}

TEST(StructureDiff, BlockAnchorWithinFuncAnchorForSingleEdits) {
  const auto pairs = corpus::mutation_corpus(52, 150, 20, 200, 0);
  corpus::Rng rng(52);
  for (const auto& pair : pairs) {
    const BlockTree tree = build_block_tree(pair.source, python_profile());
    if (tree.has_syntax_error() || pair.source.empty()) continue;
    auto target = pair.source;
    const std::size_t at = rng.below(target.size());
    target.lines[at] += "  # edited";
    const auto fine = generate_structure_diff(tree, target, Granularity::Fine);
    const auto coarse = generate_structure_diff(tree, target, Granularity::FunctionLevel);
    ASSERT_EQ(fine.size(), 1u);
    ASSERT_EQ(coarse.size(), 1u);
    EXPECT_TRUE(coarse[0].anchor_span->contains(*fine[0].anchor_span)) << pair.id;
  }
}
