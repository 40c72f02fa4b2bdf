#include "tree.h"

#include <algorithm>
#include <fstream>

#include "errors.h"

namespace coordlm {

int Tree::num_leaves() const {
  if (is_leaf()) return 1;
  int n = 0;
  for (const auto& c : children) n += c.num_leaves();
  return n;
}

void Tree::leaves(std::vector<std::string>& out) const {
  if (is_leaf()) {
    out.push_back(label);
    return;
  }
  for (const auto& c : children) c.leaves(out);
}

std::vector<std::string> Tree::leaves() const {
  std::vector<std::string> out;
  leaves(out);
  return out;
}

namespace {

struct Cursor {
  const std::string& s;
  size_t at = 0;

  void skip_ws() {
    while (at < s.size() && (s[at] == ' ' || s[at] == '\t' || s[at] == '\n' || s[at] == '\r')) ++at;
  }
  bool done() const { return at >= s.size(); }
  char peek() const { return s[at]; }

  std::string token() {
    size_t start = at;
    while (at < s.size() && s[at] != '(' && s[at] != ')' && s[at] != ' ' && s[at] != '\t' &&
           s[at] != '\n' && s[at] != '\r')
      ++at;
    if (at == start) throw ParseError("expected a label or word", start);
    return s.substr(start, at - start);
  }
};

Tree parse_node(Cursor& c) {
  c.skip_ws();
  if (c.done()) throw ParseError("unexpected end of input", c.at);
  if (c.peek() != '(') {
    if (c.peek() == ')') throw ParseError("unexpected ')'", c.at);
    return Tree{c.token(), {}};
  }
  size_t open_at = c.at;
  ++c.at;  // consume '('
  c.skip_ws();
  if (c.done()) throw ParseError("unbalanced '('", c.at);
  if (c.peek() == '(' || c.peek() == ')')
    throw ParseError("missing node label after '('", c.at);
  Tree t{c.token(), {}};
  while (true) {
    c.skip_ws();
    if (c.done()) throw ParseError("unbalanced '('", c.at);
    if (c.peek() == ')') {
      ++c.at;
      if (t.children.empty())
        throw ParseError("internal node \"" + t.label + "\" has no children", open_at);
      return t;
    }
    t.children.push_back(parse_node(c));
  }
}

}  // namespace

Tree parse_bracketed(const std::string& text) {
  Cursor c{text};
  Tree t = parse_node(c);
  c.skip_ws();
  if (!c.done()) throw ParseError("trailing garbage after tree", c.at);
  return t;
}

std::string serialize(const Tree& t) {
  if (t.is_leaf()) return t.label;
  std::string out = "(" + t.label;
  for (const auto& c : t.children) {
    out += ' ';
    out += serialize(c);
  }
  out += ')';
  return out;
}

std::vector<Tree> read_treebank(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open treebank file: " + path);
  std::vector<Tree> trees;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      trees.push_back(parse_bracketed(line));
    } catch (const ParseError& e) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return trees;
}

void write_treebank(const std::vector<Tree>& trees, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write treebank file: " + path);
  for (const auto& t : trees) out << serialize(t) << '\n';
  if (!out) throw IoError("short write to treebank file: " + path);
}

Tree strip_preterminals(const Tree& t) {
  if (t.is_leaf()) return t;
  if (t.is_preterminal()) return t.children[0];
  Tree out{t.label, {}};
  out.children.reserve(t.children.size());
  for (const auto& c : t.children) out.children.push_back(strip_preterminals(c));
  return out;
}

namespace {

bool is_coordinator_child(const Tree& c, const std::vector<std::string>& coordinators) {
  const std::string* word = nullptr;
  if (c.is_leaf())
    word = &c.label;
  else if (c.is_preterminal())
    word = &c.children[0].label;
  if (!word) return false;
  return std::find(coordinators.begin(), coordinators.end(), *word) != coordinators.end();
}

}  // namespace

Tree to_coord_annotation(const Tree& t, const std::vector<std::string>& coordinators) {
  if (t.is_leaf()) return t;
  bool coordinated = t.label == "NP" &&
                     std::any_of(t.children.begin(), t.children.end(), [&](const Tree& c) {
                       return is_coordinator_child(c, coordinators);
                     });
  Tree out{t.label, {}};
  out.children.reserve(t.children.size());
  for (const auto& c : t.children) {
    Tree child = to_coord_annotation(c, coordinators);
    if (coordinated && child.label == "NP" && !child.is_leaf()) child.label = "NP-COORD";
    out.children.push_back(std::move(child));
  }
  return out;
}

const std::vector<std::string>& coordinators_for(const std::string& language) {
  static const std::vector<std::string> en = {"and", "or"};
  static const std::vector<std::string> fr = {"et", "ou"};
  if (language == "en") return en;
  if (language == "fr") return fr;
  throw std::invalid_argument("unknown language code: " + language + " (expected en or fr)");
}

}  // namespace coordlm
