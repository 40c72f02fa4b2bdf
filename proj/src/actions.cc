#include "actions.h"

#include <stdexcept>

#include "errors.h"

namespace coordlm {

std::string Action::str() const {
  switch (kind) {
    case kNt: return "NT(" + sym + ")";
    case kGen: return "GEN(" + sym + ")";
    default: return "REDUCE";
  }
}

namespace {

void linearize(const Tree& t, std::vector<Action>& out) {
  if (t.is_leaf()) {
    out.push_back(Action::gen(t.label));
    return;
  }
  out.push_back(Action::nt(t.label));
  for (const auto& c : t.children) linearize(c, out);
  out.push_back(Action::reduce());
}

}  // namespace

std::vector<Action> tree_to_actions(const Tree& t) {
  if (t.is_leaf())
    throw std::invalid_argument("cannot linearize a bare leaf; the root must be a constituent");
  std::vector<Action> out;
  linearize(t, out);
  return out;
}

Tree actions_to_tree(const std::vector<Action>& actions) {
  if (actions.empty()) throw DecodeError("empty action sequence");
  std::vector<Tree> open;  // partially built constituents, innermost last
  Tree root;
  bool have_root = false;
  for (size_t i = 0; i < actions.size(); ++i) {
    const Action& a = actions[i];
    if (have_root)
      throw DecodeError("action " + std::to_string(i) + " (" + a.str() +
                        ") after the root constituent closed");
    switch (a.kind) {
      case Action::kNt:
        open.push_back(Tree{a.sym, {}});
        break;
      case Action::kGen:
        if (open.empty())
          throw DecodeError("action " + std::to_string(i) + ": GEN with no open constituent");
        open.back().children.push_back(Tree{a.sym, {}});
        break;
      case Action::kReduce: {
        if (open.empty())
          throw DecodeError("action " + std::to_string(i) + ": REDUCE with no open constituent");
        if (open.back().children.empty())
          throw DecodeError("action " + std::to_string(i) + ": REDUCE of an empty constituent");
        Tree done = std::move(open.back());
        open.pop_back();
        if (open.empty()) {
          root = std::move(done);
          have_root = true;
        } else {
          open.back().children.push_back(std::move(done));
        }
        break;
      }
    }
  }
  if (!have_root)
    throw DecodeError(std::to_string(open.size()) + " constituent(s) still open at end of sequence");
  return root;
}

}  // namespace coordlm
