#ifndef COORDLM_ACTIONS_H
#define COORDLM_ACTIONS_H

#include <string>
#include <vector>

#include "tree.h"

namespace coordlm {

// Generative transition: NT(label) opens a constituent, GEN(word) emits a
// terminal, REDUCE closes the most recent open constituent.
struct Action {
  enum Kind { kNt, kGen, kReduce };
  Kind kind;
  std::string sym;  // NT label or word; empty for REDUCE

  static Action nt(std::string label) { return {kNt, std::move(label)}; }
  static Action gen(std::string word) { return {kGen, std::move(word)}; }
  static Action reduce() { return {kReduce, {}}; }

  bool operator==(const Action& o) const { return kind == o.kind && sym == o.sym; }
  std::string str() const;
};

// Depth-first linearization: internal node -> NT(label) ... REDUCE, leaf ->
// GEN(word). The root must be an internal node (a bare word has no bracketed
// encoding); preterminals should normally be stripped first.
std::vector<Action> tree_to_actions(const Tree& t);

// Inverse of tree_to_actions. Throws DecodeError on: an empty sequence, a
// leading non-NT action, GEN/REDUCE with nothing open, REDUCE of an empty
// constituent, trailing actions after the root closes, or leftover open
// constituents at the end.
Tree actions_to_tree(const std::vector<Action>& actions);

}  // namespace coordlm

#endif
