#ifndef COORDLM_TREE_H
#define COORDLM_TREE_H

#include <string>
#include <vector>

namespace coordlm {

// Phrase-structure tree. Leaves are word forms (no children); preterminal
// tags, where present, are ordinary unary internal nodes above their word.
struct Tree {
  std::string label;
  std::vector<Tree> children;

  bool is_leaf() const { return children.empty(); }
  // True for a tag node: exactly one child and that child is a leaf.
  bool is_preterminal() const { return children.size() == 1 && children[0].is_leaf(); }

  bool operator==(const Tree& o) const { return label == o.label && children == o.children; }

  int num_leaves() const;
  void leaves(std::vector<std::string>& out) const;
  std::vector<std::string> leaves() const;
};

// Parse one S-expression; the entire string must be consumed (surrounding
// whitespace allowed). A bare token parses as a single leaf. Throws
// ParseError with a 0-based byte offset on unbalanced parentheses, missing
// labels, or trailing garbage.
Tree parse_bracketed(const std::string& text);

// Canonical form: leaves print as their word, internal nodes as
// "(LABEL child ...)" single-space separated. parse_bracketed(serialize(t))
// reproduces t exactly.
std::string serialize(const Tree& t);

// One tree per line; blank lines and lines starting with '#' are skipped.
// Parse errors are rethrown with the 1-based line number prepended.
std::vector<Tree> read_treebank(const std::string& path);
void write_treebank(const std::vector<Tree>& trees, const std::string& path);

// Replace each unary-over-leaf tag node by its leaf:
// (NP (DT the) (NN door)) -> (NP the door).
Tree strip_preterminals(const Tree& t);

// Relabel every NP that is a direct conjunct inside a coordinated NP as
// NP-COORD. An NP counts as coordinated when one of its children is a
// coordinating-conjunction word from `coordinators` (either a bare leaf or a
// tag node over one). Idempotent; leaves and all other labels untouched.
Tree to_coord_annotation(const Tree& t, const std::vector<std::string>& coordinators);

// "and"/"or" for en, "et"/"ou" for fr. Throws std::invalid_argument on an
// unknown language code.
const std::vector<std::string>& coordinators_for(const std::string& language);

}  // namespace coordlm

#endif
