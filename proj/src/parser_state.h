#ifndef COORDLM_PARSER_STATE_H
#define COORDLM_PARSER_STATE_H

#include <memory>
#include <optional>
#include <vector>

namespace coordlm {

// Hard constraints that keep every masked action distribution supported and
// every decode finite: at most max_open_nts nested open constituents, at most
// max_consec_struct structural actions (NT/REDUCE) between word emissions.
struct StructuralLimits {
  int max_open_nts = 12;
  int max_consec_struct = 8;
};

// Model-independent derivation state used for action masking. Persistent:
// apply() shares the stack spine with the predecessor, so beam hypotheses
// branch in O(1).
struct ParserState {
  struct Node {
    std::shared_ptr<const Node> below;
    bool open;  // true: open constituent marker; false: completed item
    int nt;     // marker label id (-1 on items)
    // nearest open marker at or below this node (nullptr outside one)
    const Node* enclosing;
  };

  std::shared_ptr<const Node> top;  // nullptr in the initial state
  int open_nts = 0;
  int words_gen = 0;
  int consec_struct = 0;

  // root closed: no action is ever valid again
  bool terminal() const { return top != nullptr && open_nts == 0; }
  // REDUCE precondition: the innermost open constituent has a child
  bool top_open_has_child() const { return top != nullptr && !top->open; }

  bool can_nt(const StructuralLimits& lim) const {
    return !terminal() && open_nts < lim.max_open_nts && consec_struct < lim.max_consec_struct;
  }
  bool can_gen(std::optional<int> word_budget = std::nullopt) const {
    return open_nts >= 1 && (!word_budget || words_gen < *word_budget);
  }
  bool can_reduce(const StructuralLimits& lim) const {
    return open_nts >= 1 && top_open_has_child() && consec_struct < lim.max_consec_struct;
  }

  ParserState push_nt(int nt_label) const;
  ParserState push_word() const;
  ParserState reduce() const;
};

}  // namespace coordlm

#endif
