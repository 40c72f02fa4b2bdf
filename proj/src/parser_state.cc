#include "parser_state.h"

#include <stdexcept>

namespace coordlm {

namespace {

std::shared_ptr<const ParserState::Node> make_node(std::shared_ptr<const ParserState::Node> below,
                                                   bool open, int nt) {
  auto n = std::make_shared<ParserState::Node>();
  n->below = std::move(below);
  n->open = open;
  n->nt = nt;
  n->enclosing = open ? n.get() : (n->below ? n->below->enclosing : nullptr);
  return n;
}

}  // namespace

ParserState ParserState::push_nt(int nt_label) const {
  ParserState s = *this;
  s.top = make_node(top, true, nt_label);
  s.open_nts += 1;
  s.consec_struct += 1;
  return s;
}

ParserState ParserState::push_word() const {
  ParserState s = *this;
  s.top = make_node(top, false, -1);
  s.words_gen += 1;
  s.consec_struct = 0;
  return s;
}

ParserState ParserState::reduce() const {
  if (!top_open_has_child() || open_nts < 1)
    throw std::logic_error("reduce applied to a state where it is invalid");
  const Node* marker = top->enclosing;
  ParserState s = *this;
  s.top = make_node(marker->below, false, -1);
  s.open_nts -= 1;
  s.consec_struct += 1;
  return s;
}

}  // namespace coordlm
