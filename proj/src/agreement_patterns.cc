#include "agreement_patterns.h"

#include <algorithm>

#include "csv.h"

namespace coordlm {

FeatureTagger english_tag_tagger() {
  return [](const std::string& tag, const std::string& word) -> std::optional<LeafFeatures> {
    if (tag == "NN" || tag == "NNP") return LeafFeatures{LeafFeatures::kNoun, "sg", ""};
    if (tag == "NNS" || tag == "NNPS") return LeafFeatures{LeafFeatures::kNoun, "pl", ""};
    if (tag == "VBZ") return LeafFeatures{LeafFeatures::kVerb, "sg", ""};
    if (tag == "VBP") return LeafFeatures{LeafFeatures::kVerb, "pl", ""};
    if (tag == "VBD") {
      if (word == "was") return LeafFeatures{LeafFeatures::kVerb, "sg", ""};
      if (word == "were") return LeafFeatures{LeafFeatures::kVerb, "pl", ""};
      return LeafFeatures{LeafFeatures::kVerb, "", ""};
    }
    if (tag == "VB" || tag == "VBG" || tag == "VBN" || tag == "MD")
      return LeafFeatures{LeafFeatures::kVerb, "", ""};
    if (tag == "JJ" || tag == "JJR" || tag == "JJS") return LeafFeatures{LeafFeatures::kAdj, "", ""};
    return std::nullopt;
  };
}

FeatureTagger lexicon_feature_tagger(Lexicon lexicon, std::string language) {
  return [lex = std::move(lexicon), lang = std::move(language)](
             const std::string&, const std::string& word) -> std::optional<LeafFeatures> {
    auto matches = lex.find_form(lang, word);
    if (matches.empty()) return std::nullopt;
    const std::string& role = matches[0]->role;
    if (role == "det") return std::nullopt;
    LeafFeatures f;
    f.cat = role == "noun" ? LeafFeatures::kNoun
                           : (role == "verb" ? LeafFeatures::kVerb : LeafFeatures::kAdj);
    f.number = matches[0]->number == "-" ? "" : matches[0]->number;
    f.gender = matches[0]->gender == "-" ? "" : matches[0]->gender;
    for (const auto* e : matches) {
      if (e->role != role) return std::nullopt;  // form is role-ambiguous
      if (e->number != matches[0]->number) f.number.clear();
      if (e->gender != matches[0]->gender) f.gender.clear();
    }
    return f;
  };
}

namespace {

bool is_clause(const std::string& label) {
  return label == "S" || label == "SINV" || label == "SQ" || label == "SENT";
}

const std::string* coordinator_word(const Tree& c, const std::vector<std::string>& coordinators) {
  const std::string* word = nullptr;
  if (c.is_leaf())
    word = &c.label;
  else if (c.is_preterminal())
    word = &c.children[0].label;
  if (word && std::find(coordinators.begin(), coordinators.end(), *word) != coordinators.end())
    return word;
  return nullptr;
}

// tag of a leaf is its parent's label only when the parent is unary
void collect_leaves(const Tree& t, std::vector<std::pair<std::string, const Tree*>>& out) {
  if (t.is_leaf()) {
    out.push_back({"", &t});
    return;
  }
  if (t.is_preterminal()) {
    out.push_back({t.label, &t.children[0]});
    return;
  }
  for (const auto& c : t.children) collect_leaves(c, out);
}

std::string feature_of(const LeafFeatures& f, PatternMode mode) {
  return mode == PatternMode::kNumber ? f.number : f.gender;
}

// feature of the last noun-classified leaf among `children[from, to)`
std::string conjunct_feature(const std::vector<Tree>& children, size_t from, size_t to,
                             const FeatureTagger& tagger, PatternMode mode) {
  std::string feat;
  for (size_t i = from; i < to; ++i) {
    std::vector<std::pair<std::string, const Tree*>> leaves;
    collect_leaves(children[i], leaves);
    for (const auto& [tag, leaf] : leaves) {
      auto f = tagger(tag, leaf->label);
      if (f && f->cat == LeafFeatures::kNoun && !feature_of(*f, mode).empty())
        feat = feature_of(*f, mode);
    }
  }
  return feat;
}

}  // namespace

long AgreementPatternTable::total() const {
  long n = 0;
  for (const auto& [k, c] : cells) n += c.total();
  return n;
}

void AgreementPatternTable::write_csv(std::ostream& out) const {
  bool number = mode == PatternMode::kNumber;
  write_csv_row(out, {number ? "n1" : "g1", "coord", number ? "n2" : "g2",
                      number ? "outcome_sg" : "outcome_m", number ? "outcome_pl" : "outcome_f",
                      "unclassified", "total"});
  for (const auto& [key, cell] : cells)
    write_csv_row(out, {key[0], key[1], key[2], std::to_string(cell.outcome_first),
                        std::to_string(cell.outcome_second), std::to_string(cell.unclassified),
                        std::to_string(cell.total())});
}

AgreementPatternTable count_agreement_patterns(const std::vector<Tree>& trees,
                                               const FeatureTagger& tagger,
                                               const std::vector<std::string>& coordinators,
                                               PatternMode mode) {
  AgreementPatternTable table;
  table.mode = mode;
  const bool number = mode == PatternMode::kNumber;
  const std::vector<std::string> feats =
      number ? std::vector<std::string>{"sg", "pl"} : std::vector<std::string>{"m", "f"};
  for (const auto& f1 : feats)
    for (const auto& coord : {std::string("and"), std::string("or")})
      for (const auto& f2 : feats) table.cells[{f1, coord, f2}];

  std::function<void(const Tree&)> walk = [&](const Tree& t) {
    for (const auto& c : t.children) walk(c);
    if (t.is_leaf() || !is_clause(t.label)) return;

    // leftmost NP child must be the subject CoordNP
    const Tree* subject = nullptr;
    for (const auto& c : t.children) {
      if (!c.is_leaf() && c.label.rfind("NP", 0) == 0) {
        subject = &c;
        break;
      }
    }
    if (!subject) return;
    std::vector<size_t> coord_at;
    for (size_t i = 0; i < subject->children.size(); ++i)
      if (coordinator_word(subject->children[i], coordinators)) coord_at.push_back(i);
    if (coord_at.empty()) return;
    ++table.diagnostics.coord_np_subjects;
    if (coord_at.size() > 1) {
      ++table.diagnostics.skipped_multi_coord;
      return;
    }
    std::string norm_coord;
    {
      const std::string* w = coordinator_word(subject->children[coord_at[0]], coordinators);
      norm_coord = (*w == "or" || *w == "ou") ? "or" : "and";
    }

    std::string f1 = conjunct_feature(subject->children, 0, coord_at[0], tagger, mode);
    std::string f2 = conjunct_feature(subject->children, coord_at[0] + 1,
                                      subject->children.size(), tagger, mode);
    if (f1.empty() || f2.empty()) {
      ++table.diagnostics.skipped_conjunct;
      return;
    }

    // predicate: first VP-like sibling after the subject
    const Tree* vp = nullptr;
    bool past_subject = false;
    for (const auto& c : t.children) {
      if (&c == subject) {
        past_subject = true;
        continue;
      }
      if (past_subject && !c.is_leaf() &&
          (c.label.rfind("VP", 0) == 0 || c.label.rfind("VN", 0) == 0)) {
        vp = &c;
        break;
      }
    }
    if (!vp) {
      ++table.diagnostics.skipped_no_predicate;
      return;
    }
    std::vector<std::pair<std::string, const Tree*>> leaves;
    collect_leaves(*vp, leaves);
    const LeafFeatures* verb = nullptr;
    std::optional<LeafFeatures> verb_store, adj_store;
    for (const auto& [tag, leaf] : leaves) {
      auto f = tagger(tag, leaf->label);
      if (!f) continue;
      if (f->cat == LeafFeatures::kVerb && !verb_store) verb_store = *f;
      if (f->cat == LeafFeatures::kAdj && !adj_store && !f->gender.empty()) adj_store = *f;
    }
    verb = verb_store ? &*verb_store : nullptr;
    if (!verb) {
      ++table.diagnostics.skipped_no_predicate;
      return;
    }

    PatternCell& cell = table.cells[{f1, norm_coord, f2}];
    std::string outcome;
    if (number) {
      outcome = verb->number;
    } else {
      outcome = adj_store ? adj_store->gender : "";
    }
    if (outcome.empty())
      ++cell.unclassified;
    else if (outcome == feats[0])
      ++cell.outcome_first;
    else
      ++cell.outcome_second;
  };

  for (const auto& t : trees) walk(t);
  return table;
}

}  // namespace coordlm
